#include "tchm/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace tchm {

const std::vector<ScenarioInfo>& scenario_catalog() {
  static const std::vector<ScenarioInfo> cat = {
      {"assoc",
       "association: electron bit x nuclear bit x one photon mode; starts apart with one photon",
       {{"g", 1.0, "photon coupling"},
        {"omega", 1.0, "mode frequency"},
        {"omega_e", 1.0, "electron excitation frequency"},
        {"tun", 1.0, "nuclear tunneling amplitude"},
        {"gamma", 1.0, "leakage rate"},
        {"photons0", 1.0, "initial photon number"}},
       {{"assoc_channel", "nuclear", {"nuclear", "printed"}}},
       100.0,
       200},
      {"dissoc",
       "dissociation: same Hamiltonian as assoc; starts bound with the excited electron",
       {{"g", 1.0, "photon coupling"},
        {"omega", 1.0, "mode frequency"},
        {"omega_e", 1.0, "electron excitation frequency"},
        {"tun", 1.0, "nuclear tunneling amplitude"},
        {"gamma", 1.0, "leakage rate"},
        {"photons0", 0.0, "initial photon number"}},
       {},
       100.0,
       200},
      {"hybrid-I",
       "two-hole hybrid spectrum, spin-resolved; dark start in the lower orbit with four photons",
       {{"W", 1e10, "upper frequency (orbit 1 <-> 2)"},
        {"w", 1e9, "tunneling frequency"},
        {"g", 1e7, "orbit coupling"},
        {"g_tun", 1e8, "tunneling coupling"},
        {"gamma_W", 1e8, "W-mode leakage"},
        {"gamma_w", 1e6, "w-mode leakage"}},
       {},
       1e-5,
       200},
      {"hybrid-II",
       "two-hole hybrid spectrum, spin-resolved; antisymmetric start in the upper orbit, no photons",
       {{"W", 1e10, "upper frequency (orbit 1 <-> 2)"},
        {"w", 1e9, "tunneling frequency"},
        {"g", 1e7, "orbit coupling"},
        {"g_tun", 1e8, "tunneling coupling"},
        {"gamma_W", 1e8, "W-mode leakage"},
        {"gamma_w", 1e6, "w-mode leakage"}},
       {},
       1e-5,
       200},
      {"bottleneck",
       "two-level atom with photon leakage and an absorbing transformation level",
       {{"g", 1.0, "photon coupling"},
        {"omega", 1.0, "mode and transition frequency"},
        {"gamma_out", 1.0, "photon leakage rate"},
        {"gamma_ex", 1.0, "transformation rate"}},
       {},
       60.0,
       200},
      {"bottleneck-sweep",
       "transformation probability versus gamma_out / gamma_ex",
       {{"ratio_max", 10.0, "largest gamma_out / gamma_ex"},
        {"points", 50.0, "number of ratios"},
        {"g", 1.0, "photon coupling"},
        {"gamma_ex", 1.0, "transformation rate"}},
       {},
       60.0,
       1},
      {"lambda",
       "two three-level atoms, two spin electrons, transport layer, two leaking modes with sinks",
       {{"g_W", 2.0, "coupling on the 0 <-> 2 transition"},
        {"g_w", 1.0, "coupling on the 1 <-> 2 transition"},
        {"gamma_W", 1.0, "W-mode leakage into its sink"},
        {"gamma_w", 1.0, "w-mode leakage into its sink"},
        {"g_tun", 1.0, "w-assisted tunneling through the transport layer"},
        {"W", 2.0, "0 <-> 2 frequency"},
        {"w", 1.0, "1 <-> 2 frequency"}},
       {{"seed", "both", {"both", "W", "w", "none"}}},
       60.0,
       200},
      {"electron-explicit",
       "two four-state atoms (two orbits each), transport level, modes w01 w12 w23 with leakage",
       {{"w01", 1.0, "mode w01 frequency"},
        {"w12", 1.0, "mode w12 frequency"},
        {"w23", 1.0, "mode w23 frequency"},
        {"g01", 1.0, "T01 coupling"},
        {"g12", 1.0, "T12 coupling"},
        {"g23", 1.0, "T23 coupling"},
        {"gamma", 1.0, "leakage rate of every mode"},
        {"tp_cap", 2.0, "transport level capacity"}},
       {{"initial", "dressed", {"dressed", "dark", "product"}}},
       20.0,
       200},
      {"optical-interp",
       "optical interpretation: three-level atoms with an anode level, transfer photons hop between cavities",
       {{"w01", 1.0, "mode w01 frequency"},
        {"w12", 1.0, "mode w12 frequency"},
        {"wb", 1.0, "transfer photon frequency"},
        {"g01", 1.0, "anode transfer coupling"},
        {"g12", 1.0, "T12 coupling"},
        {"mu", 1.0, "transfer photon hopping"},
        {"gamma", 1.0, "leakage rate of every mode"}},
       {{"initial", "dressed", {"dressed", "dark", "product"}}},
       20.0,
       200},
  };
  return cat;
}

const ScenarioInfo& scenario_info(const std::string& id) {
  for (const auto& s : scenario_catalog())
    if (s.id == id) return s;
  throw ScenarioError("unknown scenario: " + id);
}

double param(const ScenarioConfig& cfg, const std::string& name) {
  if (auto it = cfg.params.find(name); it != cfg.params.end()) return it->second;
  for (const auto& p : scenario_info(cfg.id).params)
    if (p.name == name) return p.value;
  throw ScenarioError("scenario " + cfg.id + " has no parameter " + name);
}

std::string option(const ScenarioConfig& cfg, const std::string& name) {
  const auto& info = scenario_info(cfg.id);
  for (const auto& o : info.options) {
    if (o.name != name) continue;
    auto it = cfg.options.find(name);
    if (it == cfg.options.end()) return o.value;
    if (std::find(o.choices.begin(), o.choices.end(), it->second) == o.choices.end())
      throw ScenarioError("option " + name + " does not accept " + it->second);
    return it->second;
  }
  throw ScenarioError("scenario " + cfg.id + " has no option " + name);
}

bool RunResult::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass(); });
}

std::vector<double> RunResult::column(const std::string& name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw ScenarioError("no column " + name);
  std::size_t j = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r[j]);
  return out;
}

BasisState unflatten(const StateSpace& space, const std::vector<int>& regs) {
  const std::size_t need = space.modes().size() + 2 * space.atoms().size() + space.sites().size();
  if (regs.size() != need)
    throw ScenarioError("state literal needs " + std::to_string(need) + " registers, got " +
                        std::to_string(regs.size()));
  BasisState s;
  std::size_t r = 0;
  for (std::size_t i = 0; i < space.modes().size(); ++i) s.photons.push_back(regs[r++]);
  for (std::size_t i = 0; i < space.atoms().size(); ++i) {
    AtomConfig a{regs[r], regs[r + 1]};
    r += 2;
    s.atoms.push_back(a);
  }
  for (std::size_t i = 0; i < space.sites().size(); ++i) s.sites.push_back(regs[r++]);
  return s;
}

StateVector basis_vector(const StateSpace& space, const BasisState& s) {
  StateVector v = StateVector::Zero(space.dimension());
  v(space.index_of(s)) = 1.0;
  return v;
}

StateVector literal_state(const StateSpace& space, const std::vector<StateTerm>& terms) {
  StateVector v = StateVector::Zero(space.dimension());
  for (const auto& t : terms) {
    BasisState s = unflatten(space, t.registers);
    auto i = space.find(s);
    if (!i) throw ScenarioError("state literal outside the basis: " + to_string(s));
    v(*i) += t.amplitude;
  }
  double n = v.norm();
  if (n == 0.0) throw ScenarioError("state literal has zero norm");
  return v / n;
}

namespace {

void apply_grid(Model& m, const ScenarioConfig& cfg) {
  if (cfg.t_max) m.t_max = *cfg.t_max;
  if (cfg.dt) m.dt = *cfg.dt;
  if (cfg.samples) m.samples = *cfg.samples;
  if (!cfg.initial.empty()) m.rho0 = pure_density(literal_state(m.space, cfg.initial));
}

void fill_defaults(Model& m, ScenarioConfig& c) {
  const auto& info = scenario_info(c.id);
  m.id = c.id;
  m.t_max = info.t_max;
  m.samples = info.samples;
  for (const auto& p : info.params) m.params[p.name] = param(c, p.name);
  for (const auto& o : info.options) m.options[o.name] = option(c, o.name);
}

}  // namespace

StateSpace assoc_dissoc_space() {
  // photon register, then electron bit k (nucleus holding the electron), nuclear bit l (0 together).
  return build_space({{"a", 1.0, 1}}, {{"e", 2, {0}, {1.0}}, {"n", 2, {0}, {1.0}}}, {}, {},
                     [](const BasisState& s) { return s.photons[0]; });
}

namespace {

// |phi0><phi1| on the electron bit, phi0,1 = (|0> +- |1>)/sqrt(2).
SparseOperator sigma_e(const StateSpace& space) {
  SparseOperator s(space.dimension());
  const double h = 0.5;
  s += build_term(space, {act::transition(0, 0, 0)}, h);
  s += build_term(space, {act::transition(0, 0, 1)}, -h);
  s += build_term(space, {act::transition(0, 1, 0)}, h);
  s += build_term(space, {act::transition(0, 1, 1)}, -h);
  return s;
}

}  // namespace

SparseOperator assoc_dissoc_hamiltonian(const StateSpace& space, double g, double omega,
                                        double omega_e, double tun) {
  SparseOperator se = sigma_e(space);
  SparseOperator sn = build_term(space, {act::transition(1, 0, 1)});
  SparseOperator a = photon_op(space, 0, LadderKind::annihilate);
  SparseOperator ad = a.adjoint();
  SparseOperator see = se.adjoint() * se;
  SparseOperator H = tun * (see * (sn + sn.adjoint()));
  H += omega * (ad * a);
  H += omega_e * see;
  H += g * (ad * se + a * se.adjoint());
  H.require_hermitian(1e-12, "association Hamiltonian");
  return H;
}

Model scenario_assoc_dissoc(AssocKind kind, const ScenarioConfig& cfg) {
  ScenarioConfig c = cfg;
  c.id = kind == AssocKind::association ? "assoc" : "dissoc";
  Model m;
  fill_defaults(m, c);
  m.space = assoc_dissoc_space();
  const auto& S = m.space;
  m.H = assoc_dissoc_hamiltonian(S, param(c, "g"), param(c, "omega"), param(c, "omega_e"),
                                 param(c, "tun"));
  const double gamma = param(c, "gamma");
  const int n0 = static_cast<int>(std::lround(param(c, "photons0")));
  SparseOperator a = photon_op(S, 0, LadderKind::annihilate);
  SparseOperator sn = build_term(S, {act::transition(1, 0, 1)});
  SparseOperator se = sigma_e(S);

  if (kind == AssocKind::association) {
    SparseOperator A = option(c, "assoc_channel") == "printed" ? se * se.adjoint() * a
                                                               : sn * sn.adjoint() * a;
    m.channels.push_back({A, gamma, "A_ass"});
    m.rho0 = pure_density(basis_vector(S, {{n0}, {{0, 0}, {1, 0}}, {}}));
  } else {
    SparseOperator apart = sn.adjoint() * sn;
    SparseOperator p0 = build_term(S, {act::transition(0, 0, 0)});
    SparseOperator p1 = build_term(S, {act::transition(0, 1, 1)});
    m.channels.push_back({a * apart * p0, gamma, "A_diss1"});
    m.channels.push_back({a * apart * p1, gamma, "A_diss2"});
    StateVector v = (basis_vector(S, {{n0}, {{0, 0}, {0, 0}}, {}}) -
                     basis_vector(S, {{n0}, {{1, 0}, {0, 0}}, {}})) /
                    std::sqrt(2.0);
    m.rho0 = pure_density(v);
  }
  AssociationClassifier xi(S, [](const BasisState& s) { return s.atoms[1].level == 0; });
  m.observables.push_back({"a", [xi](const DensityMatrix& r) { return xi(r); }});
  SparseOperator n = number_op(S, 0);
  m.observables.push_back({"photons", [n](const DensityMatrix& r) {
                             return (n.matrix() * r).trace().real();
                           }});
  apply_grid(m, c);
  return m;
}

Model scenario_bottleneck(double gamma_out, double gamma_ex, const ScenarioConfig& cfg) {
  ScenarioConfig c = cfg;
  c.id = "bottleneck";
  c.params.try_emplace("gamma_out", gamma_out);
  c.params.try_emplace("gamma_ex", gamma_ex);
  if (c.params["gamma_out"] < 0.0 || c.params["gamma_ex"] < 0.0)
    throw ScenarioError("rates must be nonnegative");
  Model m;
  fill_defaults(m, c);
  // Atom levels: 0 ground, 1 excited, 2 transformed (absorbing).
  m.space = build_space({{"a", param(c, "omega"), 1}}, {{"atom", 3, {0}, {param(c, "g")}}}, {}, {},
                        [](const BasisState& s) { return s.photons[0] + (s.atoms[0].level == 1); });
  const auto& S = m.space;
  const double g = param(c, "g"), w = param(c, "omega");
  SparseOperator a = photon_op(S, 0, LadderKind::annihilate);
  SparseOperator sm = build_term(S, {act::transition(0, 0, 1)});
  m.H = w * (a.adjoint() * a) + w * (sm.adjoint() * sm) + g * (a.adjoint() * sm + a * sm.adjoint());
  m.channels.push_back({a, param(c, "gamma_out"), "leak"});
  m.channels.push_back({build_term(S, {act::transition(0, 2, 1)}), param(c, "gamma_ex"), "transform"});
  m.rho0 = pure_density(basis_vector(S, {{0}, {{1, 0}}, {}}));
  SparseOperator sink = projector(S, [](const BasisState& s) { return s.atoms[0].level == 2; });
  SparseOperator exc = projector(S, [](const BasisState& s) { return s.atoms[0].level == 1; });
  m.observables.push_back({"p_sink", [sink](const DensityMatrix& r) { return population(r, sink); }});
  m.observables.push_back({"p_excited", [exc](const DensityMatrix& r) { return population(r, exc); }});
  apply_grid(m, c);
  return m;
}

std::vector<SweepPoint> bottleneck_sweep(double ratio_max, std::size_t points, double gamma_ex,
                                         double g, double t_max) {
  if (points < 2) throw ScenarioError("sweep needs at least 2 points");
  if (ratio_max < 0.0 || gamma_ex <= 0.0) throw ScenarioError("invalid sweep range");
  std::vector<std::future<SweepPoint>> jobs;
  for (std::size_t k = 0; k < points; ++k) {
    double ratio = ratio_max * double(k) / double(points - 1);
    jobs.push_back(std::async(std::launch::async, [=] {
      ScenarioConfig c;
      c.params["g"] = g;
      c.t_max = t_max;
      c.samples = 20;
      Model m = scenario_bottleneck(ratio * gamma_ex, gamma_ex, c);
      LindbladOptions o;
      o.t_max = m.t_max;
      o.samples = m.samples;
      o.observables = m.observables;
      Trajectory tr = evolve_lindblad(m.H, m.channels, m.rho0, o);
      return SweepPoint{ratio, transformation_probability(tr, "p_sink")};
    }));
  }
  std::vector<SweepPoint> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

RunResult run_model(const Model& m) {
  RunResult res;
  res.id = m.id;
  res.params = m.params;
  res.options = m.options;
  LindbladOptions o;
  o.t_max = m.t_max;
  o.dt = m.dt;
  o.samples = m.samples;
  o.observables = m.observables;
  Trajectory tr = evolve_lindblad(m.H, m.channels, m.rho0, o);
  res.columns.push_back("t");
  for (const auto& n : tr.names) res.columns.push_back(n);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    std::vector<double> row{tr.times[k]};
    row.insert(row.end(), tr.values[k].begin(), tr.values[k].end());
    res.rows.push_back(std::move(row));
  }
  res.checks.push_back({"hamiltonian_hermiticity", m.H.hermiticity_defect(),
                        1e-12 * std::max(1.0, m.H.max_abs()), true});
  res.checks.push_back({"trace_drift", tr.max_trace_drift, 1e-6, true});
  res.checks.push_back({"positivity_min_eigenvalue", tr.min_eigenvalue, -1e-6, false});
  for (const auto& d : m.dark_states)
    res.checks.push_back({"stationarity_" + d.name,
                          stationarity_residual(m.H, m.channels, pure_density(d.vector)), 1e-8, true});
  return res;
}

RunResult run_scenario(const ScenarioConfig& cfg) {
  const auto& info = scenario_info(cfg.id);
  for (const auto& [k, v] : cfg.params) {
    (void)v;
    if (std::none_of(info.params.begin(), info.params.end(), [&](const ParamInfo& p) { return p.name == k; }))
      throw ScenarioError("scenario " + cfg.id + " has no parameter " + k);
  }
  for (const auto& [k, v] : cfg.options) {
    (void)v;
    if (std::none_of(info.options.begin(), info.options.end(), [&](const OptionInfo& p) { return p.name == k; }))
      throw ScenarioError("scenario " + cfg.id + " has no option " + k);
  }

  if (cfg.id == "assoc") return run_model(scenario_assoc_dissoc(AssocKind::association, cfg));
  if (cfg.id == "dissoc") return run_model(scenario_assoc_dissoc(AssocKind::dissociation, cfg));
  if (cfg.id == "bottleneck") return run_model(scenario_bottleneck(param(cfg, "gamma_out"), param(cfg, "gamma_ex"), cfg));
  if (cfg.id == "lambda") return run_model(scenario_lambda(cfg));
  if (cfg.id == "electron-explicit") return run_model(scenario_electron_explicit(cfg));
  if (cfg.id == "optical-interp") return run_model(scenario_optical_interpretation(cfg));
  if (cfg.id == "hybrid-I" || cfg.id == "hybrid-II") {
    HybridSpinModel h = scenario_hybrid(cfg.id == "hybrid-I" ? Experiment::I : Experiment::II, cfg);
    RunResult res = run_hybrid(h, h.t_max, h.samples, h.dt);
    res.id = cfg.id;
    return res;
  }
  if (cfg.id == "bottleneck-sweep") {
    double points = param(cfg, "points");
    if (points < 2 || points != std::floor(points)) throw ScenarioError("points must be an integer >= 2");
    auto pts = bottleneck_sweep(param(cfg, "ratio_max"), static_cast<std::size_t>(points),
                                param(cfg, "gamma_ex"), param(cfg, "g"), cfg.t_max.value_or(info.t_max));
    RunResult res;
    res.id = cfg.id;
    for (const auto& p : info.params) res.params[p.name] = param(cfg, p.name);
    res.columns = {"ratio", "p_transform"};
    for (const auto& p : pts) res.rows.push_back({p.ratio, p.probability});
    return res;
  }
  throw ScenarioError("unknown scenario: " + cfg.id);
}

}  // namespace tchm
