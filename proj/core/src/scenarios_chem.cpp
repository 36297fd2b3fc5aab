#include <cmath>
#include <set>

#include "tchm/scenarios.hpp"

namespace tchm {

namespace {

void setup(Model& m, ScenarioConfig& c, const char* id) {
  c.id = id;
  const auto& info = scenario_info(id);
  m.id = id;
  m.t_max = info.t_max;
  m.samples = info.samples;
  for (const auto& p : info.params) m.params[p.name] = param(c, p.name);
  for (const auto& o : info.options) m.options[o.name] = option(c, o.name);
}

void finish(Model& m, const ScenarioConfig& c) {
  if (c.t_max) m.t_max = *c.t_max;
  if (c.dt) m.dt = *c.dt;
  if (c.samples) m.samples = *c.samples;
  if (!c.initial.empty()) m.rho0 = pure_density(literal_state(m.space, c.initial));
}

// Copies of psi (supported on vacuum photon registers) with every photon configuration that keeps
// all components inside the basis.
std::vector<StateVector> dressed_copies(const StateSpace& S, const StateVector& psi) {
  std::set<std::vector<int>> configs;
  for (const auto& s : S.basis()) configs.insert(s.photons);
  std::vector<StateVector> out;
  for (const auto& ph : configs) {
    StateVector v = StateVector::Zero(S.dimension());
    bool ok = true;
    for (Eigen::Index i = 0; i < psi.size() && ok; ++i) {
      if (psi(i) == cplx(0.0)) continue;
      BasisState s = S.state(i);
      s.photons = ph;
      auto j = S.find(s);
      if (!j) ok = false;
      else v(*j) = psi(i);
    }
    if (ok) out.push_back(std::move(v));
  }
  return out;
}

Observable dressed_overlap(const std::string& name, const StateSpace& S, const StateVector& psi) {
  auto copies = dressed_copies(S, psi);
  return {name, [copies](const DensityMatrix& r) {
            double w = 0.0;
            for (const auto& v : copies) w += overlap(r, v);
            return w;
          }};
}

Observable diag_observable(const std::string& name, const StateSpace& S,
                           const std::function<double(const BasisState&)>& f) {
  std::vector<double> d;
  for (const auto& s : S.basis()) d.push_back(f(s));
  return {name, [d](const DensityMatrix& r) {
            double v = 0.0;
            for (std::size_t i = 0; i < d.size(); ++i) v += d[i] * r(i, i).real();
            return v;
          }};
}

int total_photons(const BasisState& s) {
  int n = 0;
  for (int p : s.photons) n += p;
  return n;
}

}  // namespace

// Sites: ob0@0, ob1@0, ob0@1, ob1@1, tp. Atom state = 2*ob0 + ob1.
Model scenario_electron_explicit(const ScenarioConfig& cfg) {
  ScenarioConfig c = cfg;
  Model m;
  setup(m, c, "electron-explicit");
  const double w01 = param(c, "w01"), w12 = param(c, "w12"), w23 = param(c, "w23");
  const int tp_cap = static_cast<int>(std::lround(param(c, "tp_cap")));
  if (tp_cap < 1) throw ScenarioError("tp_cap must be >= 1");
  const int cap = 2;
  auto state = [](const BasisState& s, int a) { return 2 * s.sites[2 * a] + s.sites[2 * a + 1]; };
  // Photons minus orbital depth is conserved by every transfer term; leakage only lowers it.
  auto quanta = [state](const BasisState& s) { return total_photons(s) - state(s, 0) - state(s, 1); };
  m.space = build_space({{"w01", w01, cap}, {"w12", w12, cap}, {"w23", w23, cap}}, {},
                        {{"ob0@0", 1}, {"ob1@0", 1}, {"ob0@1", 1}, {"ob1@1", 1}, {"tp", tp_cap}},
                        {[](const BasisState& s) {
                           int n = 0;
                           for (int x : s.sites) n += x;
                           return n == 2;
                         },
                         [quanta](const BasisState& s) { return quanta(s) <= -2; }},
                        [](const BasisState& s) { return total_photons(s); });
  const auto& S = m.space;
  const int TP = 4;

  const double P[4] = {0.0, -w01, -w01 - w12, -w01 - w12 - w23};
  m.H = diagonal_operator(S, [&](const BasisState& s) {
    return P[state(s, 0)] + P[state(s, 1)] + w01 * s.photons[0] + w12 * s.photons[1] + w23 * s.photons[2];
  });
  const double g01 = param(c, "g01"), g12 = param(c, "g12"), g23 = param(c, "g23");
  for (int a = 0; a < 2; ++a) {
    const int ob0 = 2 * a, ob1 = 2 * a + 1;
    auto in_state = [state, a](int k) { return act::when([=](const BasisState& s) { return state(s, a) == k; }); };
    SparseOperator x01 = build_term(S, {act::photon_raise(0, cap), act::site_transfer(ob1, TP, 1), in_state(0)});
    SparseOperator x12 = build_term(S, {act::photon_raise(1, cap), act::site_transfer(ob0, ob1, 1), in_state(1)});
    SparseOperator x23 = build_term(S, {act::photon_raise(2, cap), act::site_transfer(ob1, TP, 1), in_state(2)});
    m.H += g01 * (x01 + x01.adjoint());
    m.H += g12 * (x12 + x12.adjoint());
    m.H += g23 * (x23 + x23.adjoint());
  }
  m.H.require_hermitian(1e-12, "electron-explicit Hamiltonian");

  const double gamma = param(c, "gamma");
  const char* names[3] = {"a01", "a12", "a23"};
  for (int k = 0; k < 3; ++k) m.channels.push_back({photon_op(S, k, LadderKind::annihilate), gamma, names[k]});

  auto sites_for = [](int s0, int s1) {
    std::vector<int> v;
    for (int a : {s0, s1}) {
      v.push_back(a >> 1);
      v.push_back(a & 1);
    }
    v.push_back(0);
    return v;
  };
  BasisState s12{{0, 0, 0}, {}, sites_for(1, 2)};
  BasisState s21{{0, 0, 0}, {}, sites_for(2, 1)};
  StateVector psi = (basis_vector(S, s12) - basis_vector(S, s21)) / std::sqrt(2.0);
  m.dark_states.push_back({"Psi", psi});

  const std::string init = option(c, "initial");
  if (init == "dark") {
    m.rho0 = pure_density(psi);
  } else if (init == "dressed") {
    BasisState d12 = s12, d21 = s21;
    d12.photons[1] = d21.photons[1] = 1;
    m.rho0 = pure_density((basis_vector(S, d12) - basis_vector(S, d21)) / std::sqrt(2.0));
  } else {
    // atom 0 in |2>, atom 1 empty, one electron on the transport level
    m.rho0 = pure_density(basis_vector(S, {{0, 0, 0}, {}, {1, 0, 0, 0, 1}}));
  }

  for (auto [k0, k1, name] : {std::tuple{1, 2, "p12"}, {2, 1, "p21"}, {1, 1, "p11"}, {2, 2, "p22"}}) {
    m.observables.push_back(diag_observable(name, S, [=](const BasisState& s) {
      return (state(s, 0) == k0 && state(s, 1) == k1) ? 1.0 : 0.0;
    }));
  }
  m.observables.push_back(dressed_overlap("dark", S, psi));
  m.observables.push_back(diag_observable("photons", S, [](const BasisState& s) { return double(total_photons(s)); }));
  m.observables.push_back(diag_observable("transport", S, [](const BasisState& s) { return double(s.sites[4]); }));
  finish(m, c);
  return m;
}

// Atom levels: 0 anode, 1, 2. Modes: w01, w12, b0, b1 (transfer photons, one per cavity).
Model scenario_optical_interpretation(const ScenarioConfig& cfg) {
  ScenarioConfig c = cfg;
  Model m;
  setup(m, c, "optical-interp");
  const double w01 = param(c, "w01"), w12 = param(c, "w12"), wb = param(c, "wb");
  const int cap = 2;
  auto quanta = [](const BasisState& s) {
    int n = total_photons(s);
    for (const auto& a : s.atoms) n -= (a.level == 2);
    return n;
  };
  m.space = build_space({{"w01", w01, cap}, {"w12", w12, cap}, {"b0", wb, cap}, {"b1", wb, cap}},
                        {{"at0", 3, {0}, {param(c, "g01")}}, {"at1", 3, {1}, {param(c, "g01")}}}, {},
                        {[quanta](const BasisState& s) { return quanta(s) <= 0; }},
                        [](const BasisState& s) { return total_photons(s); });
  const auto& S = m.space;

  const double E[3] = {0.0, wb - w01, wb - w01 - w12};
  m.H = diagonal_operator(S, [&](const BasisState& s) {
    return E[s.atoms[0].level] + E[s.atoms[1].level] + w01 * s.photons[0] + w12 * s.photons[1] +
           wb * (s.photons[2] + s.photons[3]);
  });
  const double g01 = param(c, "g01"), g12 = param(c, "g12"), mu = param(c, "mu");
  for (int a = 0; a < 2; ++a) {
    const int b = 2 + a;
    SparseOperator x01 = build_term(S, {act::photon_raise(0, cap), act::photon_lower(b), act::transition(a, 1, 0)});
    SparseOperator x12 = build_term(S, {act::photon_raise(1, cap), act::transition(a, 2, 1)});
    m.H += g01 * (x01 + x01.adjoint());
    m.H += g12 * (x12 + x12.adjoint());
  }
  SparseOperator hop = build_term(S, {act::photon_raise(2, cap), act::photon_lower(3)});
  m.H += mu * (hop + hop.adjoint());
  m.H.require_hermitian(1e-12, "optical Hamiltonian");

  const double gamma = param(c, "gamma");
  const char* names[4] = {"a01", "a12", "b0", "b1"};
  for (int k = 0; k < 4; ++k) m.channels.push_back({photon_op(S, k, LadderKind::annihilate), gamma, names[k]});

  BasisState s12{{0, 0, 0, 0}, {{1, 0}, {2, 1}}, {}};
  BasisState s21{{0, 0, 0, 0}, {{2, 0}, {1, 1}}, {}};
  StateVector psi = (basis_vector(S, s12) - basis_vector(S, s21)) / std::sqrt(2.0);
  m.dark_states.push_back({"Psi", psi});

  const std::string init = option(c, "initial");
  if (init == "dark") {
    m.rho0 = pure_density(psi);
  } else if (init == "dressed") {
    BasisState d12 = s12, d21 = s21;
    d12.photons[1] = d21.photons[1] = 1;
    m.rho0 = pure_density((basis_vector(S, d12) - basis_vector(S, d21)) / std::sqrt(2.0));
  } else {
    // atom 0 in |2>, atom 1 on its anode level, the transferred charge as a photon in cavity 1
    m.rho0 = pure_density(basis_vector(S, {{0, 0, 0, 1}, {{2, 0}, {0, 1}}, {}}));
  }

  for (auto [k0, k1, name] : {std::tuple{1, 2, "p12"}, {2, 1, "p21"}, {1, 1, "p11"}, {2, 2, "p22"}}) {
    m.observables.push_back(diag_observable(name, S, [=](const BasisState& s) {
      return (s.atoms[0].level == k0 && s.atoms[1].level == k1) ? 1.0 : 0.0;
    }));
  }
  m.observables.push_back(dressed_overlap("dark", S, psi));
  m.observables.push_back(diag_observable("photons", S, [](const BasisState& s) { return double(total_photons(s)); }));
  m.observables.push_back(diag_observable("anode", S, [](const BasisState& s) {
    return double((s.atoms[0].level == 0) + (s.atoms[1].level == 0));
  }));
  finish(m, c);
  return m;
}

// Sites per spin (up then down): o@a for o = 0,1,2 and a = 1,2, then tp. Modes: W, w, sinkW, sinkw.
Model scenario_lambda(const ScenarioConfig& cfg) {
  ScenarioConfig c = cfg;
  Model m;
  setup(m, c, "lambda");
  const double W = param(c, "W"), w = param(c, "w");
  auto site = [](int spin, int o, int a) { return 7 * spin + 3 * (a - 1) + o; };
  auto tp = [](int spin) { return 7 * spin + 6; };
  auto count_level = [site](const BasisState& s, int o) {
    int n = 0;
    for (int sp = 0; sp < 2; ++sp)
      for (int a = 1; a <= 2; ++a) n += s.sites[site(sp, o, a)];
    return n;
  };
  auto countW = [count_level](const BasisState& s) { return s.photons[0] + s.photons[2] + count_level(s, 0); };
  auto countw = [count_level, tp](const BasisState& s) {
    return s.photons[1] + s.photons[3] + count_level(s, 1) + s.sites[tp(0)] + s.sites[tp(1)];
  };
  std::vector<SiteSpec> sites;
  for (const char* sp : {"up", "dn"}) {
    for (int a = 1; a <= 2; ++a)
      for (int o = 0; o < 3; ++o)
        sites.push_back({std::string(sp) + ":" + std::to_string(o) + "@" + std::to_string(a), 1});
    sites.push_back({std::string(sp) + ":tp", 1});
  }
  m.space = build_space({{"W", W, 1}, {"w", w, 1}, {"sinkW", 0.0, 1}, {"sinkw", 0.0, 1}}, {}, sites,
                        {[](const BasisState& s) {
                           int up = 0, dn = 0;
                           for (int k = 0; k < 7; ++k) {
                             up += s.sites[k];
                             dn += s.sites[7 + k];
                           }
                           return up == 1 && dn == 1;
                         },
                         [countW](const BasisState& s) { return countW(s) <= 1; },
                         [countw](const BasisState& s) { return countw(s) <= 1; }},
                        [countW, countw](const BasisState& s) { return countW(s) + countw(s); });
  const auto& S = m.space;

  // Level 2 is the shared lower level; transport sits at zero energy.
  const double E[3] = {W - w, 0.0, -w};
  m.H = diagonal_operator(S, [&](const BasisState& s) {
    double e = W * s.photons[0] + w * s.photons[1];
    for (int sp = 0; sp < 2; ++sp)
      for (int a = 1; a <= 2; ++a)
        for (int o = 0; o < 3; ++o) e += E[o] * s.sites[site(sp, o, a)];
    return e;
  });
  const double gW = param(c, "g_W"), gw = param(c, "g_w"), gt = param(c, "g_tun");
  for (int sp = 0; sp < 2; ++sp)
    for (int a = 1; a <= 2; ++a) {
      SparseOperator xW = build_term(S, {act::photon_raise(0, 1), act::site_transfer(site(sp, 2, a), site(sp, 0, a), 1)});
      SparseOperator xw = build_term(S, {act::photon_raise(1, 1), act::site_transfer(site(sp, 2, a), site(sp, 1, a), 1)});
      SparseOperator xt = build_term(S, {act::photon_raise(1, 1), act::site_transfer(site(sp, 2, a), tp(sp), 1)});
      m.H += gW * (xW + xW.adjoint());
      m.H += gw * (xw + xw.adjoint());
      m.H += gt * (xt + xt.adjoint());
    }
  m.H.require_hermitian(1e-12, "lambda Hamiltonian");
  m.channels.push_back({build_term(S, {act::photon_raise(2, 1), act::photon_lower(0)}), param(c, "gamma_W"), "leak_W"});
  m.channels.push_back({build_term(S, {act::photon_raise(3, 1), act::photon_lower(1)}), param(c, "gamma_w"), "leak_w"});

  auto config = [&](int o_up, int a_up, int o_dn, int a_dn, int nW, int nw) {
    BasisState s{{nW, nw, 0, 0}, {}, std::vector<int>(14, 0)};
    s.sites[site(0, o_up, a_up)] = 1;
    s.sites[site(1, o_dn, a_dn)] = 1;
    return basis_vector(S, s);
  };
  const double r = 1.0 / std::sqrt(2.0);
  StateVector d1 = r * (config(0, 1, 2, 2, 0, 0) - config(2, 1, 0, 2, 0, 0));
  StateVector d2 = r * (config(1, 1, 2, 2, 0, 0) - config(2, 1, 1, 2, 0, 0));
  StateVector d3 = r * (config(2, 1, 2, 1, 0, 0) - config(2, 2, 2, 2, 0, 0));
  m.dark_states = {{"D1", d1}, {"D2", d2}, {"D3", d3}};

  const std::string seed = option(c, "seed");
  const int nW = (seed == "both" || seed == "W") ? 1 : 0;
  const int nw = (seed == "both" || seed == "w") ? 1 : 0;
  m.rho0 = pure_density(config(2, 1, 2, 1, nW, nw));

  m.observables.push_back(diag_observable("sink_W", S, [](const BasisState& s) { return double(s.photons[2]); }));
  m.observables.push_back(diag_observable("sink_w", S, [](const BasisState& s) { return double(s.photons[3]); }));
  m.observables.push_back(diag_observable("sink_sum", S, [](const BasisState& s) { return double(s.photons[2] + s.photons[3]); }));
  m.observables.push_back(dressed_overlap("D1", S, d1));
  m.observables.push_back(dressed_overlap("D2", S, d2));
  m.observables.push_back(dressed_overlap("D3", S, d3));
  finish(m, c);
  return m;
}

}  // namespace tchm
