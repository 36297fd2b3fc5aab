#include <cmath>

#include "tchm/scenarios.hpp"

namespace tchm {

namespace {

constexpr int kWCap = 1;
constexpr int kwCap = 2;  // tunneling adds a w photon on top of the seeded one

struct SpinLayout {
  int W;
  int w;
  int site0;  // o1@1, o2@1, o1@2, o2@2
  int o1(int a) const { return site0 + 2 * (a - 1); }
  int o2(int a) const { return site0 + 2 * (a - 1) + 1; }
};

// Hamiltonian of one spin in the frame rotating at W (that part is conserved).
SparseOperator spin_hamiltonian(const StateSpace& S, const SpinLayout& L, double w, double g, double g_tun) {
  const int p1 = L.o2(1), p2 = L.o2(2);
  SparseOperator H = diagonal_operator(S, [&](const BasisState& s) { return w * s.photons[L.w]; });
  // Projector on the antisymmetric upper-orbit state, and |sym><anti|.
  SparseOperator stay1 = projector(S, [p1](const BasisState& s) { return s.sites[p1] == 1; });
  SparseOperator stay2 = projector(S, [p2](const BasisState& s) { return s.sites[p2] == 1; });
  SparseOperator hop12 = build_term(S, {act::site_transfer(p1, p2, 1)});
  SparseOperator hop21 = build_term(S, {act::site_transfer(p2, p1, 1)});
  SparseOperator P_anti = 0.5 * (stay1 - hop12 - hop21 + stay2);
  SparseOperator s_tun = 0.5 * (stay1 - hop12 + hop21 - stay2);
  H += w * P_anti;
  for (int a = 1; a <= 2; ++a) {
    SparseOperator x = build_term(S, {act::photon_raise(L.W, kWCap), act::site_transfer(L.o1(a), L.o2(a), 1)});
    H += g * (x + x.adjoint());
  }
  SparseOperator t = photon_op(S, L.w, LadderKind::create) * s_tun;
  H += g_tun * (t + t.adjoint());
  return H;
}

bool spin_admissible(const BasisState& s, const SpinLayout& L) {
  int n = 0;
  for (int k = 0; k < 4; ++k) n += s.sites[L.site0 + k];
  return n == 1 && s.photons[L.W] + s.sites[L.o2(1)] + s.sites[L.o2(2)] <= 1;
}

// Per-spin initial term for atom a.
BasisState spin_term(Experiment e, const SpinLayout& L, int a, BasisState s) {
  if (e == Experiment::I) {
    s.photons[L.W] = 1;
    s.photons[L.w] = 1;
    s.sites[L.o1(a)] = 1;
  } else {
    s.sites[L.o2(a)] = 1;
  }
  return s;
}

void read_params(std::map<std::string, double>& out, ScenarioConfig& c, Experiment e) {
  c.id = e == Experiment::I ? "hybrid-I" : "hybrid-II";
  for (const auto& p : scenario_info(c.id).params) out[p.name] = param(c, p.name);
}

cplx ctrace_of(const Eigen::MatrixXcd& x, const std::vector<double>& mask) {
  cplx t = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) t += mask[i] * x(i, i);
  return t;
}

}  // namespace

HybridSpinModel scenario_hybrid(Experiment e, const ScenarioConfig& cfg) {
  ScenarioConfig c = cfg;
  HybridSpinModel m;
  read_params(m.params, c, e);
  const SpinLayout L{0, 1, 0};
  m.space = build_space({{"W", 0.0, kWCap}, {"w", m.params["w"], kwCap}}, {},
                        {{"o1@1", 1}, {"o2@1", 1}, {"o1@2", 1}, {"o2@2", 1}},
                        {[L](const BasisState& s) { return spin_admissible(s, L); }},
                        [](const BasisState& s) { return s.photons[0] + s.photons[1]; });
  m.H = spin_hamiltonian(m.space, L, m.params["w"], m.params["g"], m.params["g_tun"]);
  m.H.require_hermitian(1e-12 * std::max(1.0, m.H.max_abs()), "hybrid spin Hamiltonian");
  m.channels = {{photon_op(m.space, L.W, LadderKind::annihilate), m.params["gamma_W"], "W"},
                {photon_op(m.space, L.w, LadderKind::annihilate), m.params["gamma_w"], "w"}};
  const double r = 1.0 / std::sqrt(2.0);
  m.alpha = {r, -r};
  BasisState empty{{0, 0}, {}, {0, 0, 0, 0}};
  for (int a = 1; a <= 2; ++a) m.spin_terms.push_back(basis_vector(m.space, spin_term(e, L, a, empty)));
  const auto& info = scenario_info(c.id);
  m.t_max = c.t_max.value_or(info.t_max);
  m.samples = c.samples.value_or(info.samples);
  m.dt = c.dt.value_or(0.0);
  return m;
}

Model hybrid_full_model(Experiment e, const ScenarioConfig& cfg) {
  ScenarioConfig c = cfg;
  Model m;
  read_params(m.params, c, e);
  m.id = c.id;
  const SpinLayout up{0, 1, 0}, dn{2, 3, 4};
  const double w = m.params["w"];
  std::vector<SiteSpec> sites;
  for (const char* sp : {"up", "dn"})
    for (const char* s : {"o1@1", "o2@1", "o1@2", "o2@2"}) sites.push_back({std::string(sp) + ":" + s, 1});
  m.space = build_space({{"W_up", 0.0, kWCap}, {"w_up", w, kwCap}, {"W_dn", 0.0, kWCap}, {"w_dn", w, kwCap}}, {},
                        sites,
                        {[up, dn](const BasisState& s) { return spin_admissible(s, up) && spin_admissible(s, dn); }},
                        [](const BasisState& s) { return s.photons[0] + s.photons[1] + s.photons[2] + s.photons[3]; });
  const auto& S = m.space;
  m.H = spin_hamiltonian(S, up, w, m.params["g"], m.params["g_tun"]) +
        spin_hamiltonian(S, dn, w, m.params["g"], m.params["g_tun"]);
  m.channels = {{photon_op(S, up.W, LadderKind::annihilate), m.params["gamma_W"], "W_up"},
                {photon_op(S, up.w, LadderKind::annihilate), m.params["gamma_w"], "w_up"},
                {photon_op(S, dn.W, LadderKind::annihilate), m.params["gamma_W"], "W_dn"},
                {photon_op(S, dn.w, LadderKind::annihilate), m.params["gamma_w"], "w_dn"}};
  BasisState empty{{0, 0, 0, 0}, {}, std::vector<int>(8, 0)};
  StateVector psi = StateVector::Zero(S.dimension());
  const double r = 1.0 / std::sqrt(2.0);
  for (int a = 1; a <= 2; ++a) {
    BasisState s = spin_term(e, dn, a, spin_term(e, up, a, empty));
    psi += (a == 1 ? r : -r) * basis_vector(S, s);
  }
  m.rho0 = pure_density(psi);
  std::vector<double> same(S.dimension());
  for (std::size_t i = 0; i < S.dimension(); ++i) {
    const auto& s = S.state(i);
    bool at1 = s.sites[0] + s.sites[1] == 1 && s.sites[4] + s.sites[5] == 1;
    bool at2 = s.sites[2] + s.sites[3] == 1 && s.sites[6] + s.sites[7] == 1;
    same[i] = (at1 || at2) ? 1.0 : 0.0;
  }
  m.observables.push_back({"a", [same](const DensityMatrix& rho) {
                             double v = 0.0;
                             for (std::size_t i = 0; i < same.size(); ++i) v += same[i] * rho(i, i).real();
                             return v;
                           }});
  const auto& info = scenario_info(c.id);
  m.t_max = c.t_max.value_or(info.t_max);
  m.samples = c.samples.value_or(info.samples);
  m.dt = c.dt.value_or(0.0);
  return m;
}

RunResult run_hybrid(const HybridSpinModel& m, double t_max, std::size_t samples, double dt) {
  if (t_max <= 0.0 || samples == 0) throw IntegrationError("empty time grid");
  const std::size_t D = m.space.dimension();
  const std::size_t K = m.alpha.size();
  if (m.spin_terms.size() != K) throw ScenarioError("hybrid model: amplitudes and terms disagree");

  const double limit = stability_limit(m.H, m.channels);
  if (dt <= 0.0) dt = limit;
  if (dt > limit * (1.0 + 1e-12))
    throw StabilityError("time step exceeds stability limit; use dt <= " + std::to_string(limit), limit);
  const double interval = t_max / double(samples);
  std::size_t per_sample = std::max<std::size_t>(1, std::ceil(interval / dt * (1.0 - 1e-12)));
  dt = interval / double(per_sample);

  LindbladGenerator L(m.H, m.channels);
  const Eigen::MatrixXcd map = Rk4Propagator(L, dt).power(per_sample);

  std::vector<double> on1(D), on2(D), nW(D), nw(D), ones(D, 1.0);
  for (std::size_t i = 0; i < D; ++i) {
    const auto& s = m.space.state(i);
    on1[i] = s.sites[0] + s.sites[1];
    on2[i] = s.sites[2] + s.sites[3];
    nW[i] = s.photons[0];
    nw[i] = s.photons[1];
  }

  std::vector<Eigen::VectorXcd> X(K * K);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t l = 0; l < K; ++l) {
      Eigen::MatrixXcd x = m.spin_terms[k] * m.spin_terms[l].adjoint();
      X[k * K + l] = Eigen::Map<Eigen::VectorXcd>(x.data(), x.size());
    }
  auto mat = [D](const Eigen::VectorXcd& v) { return Eigen::Map<const Eigen::MatrixXcd>(v.data(), D, D); };

  auto full_rho = [&]() {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(D * D, D * D);
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t l = 0; l < K; ++l) {
        Eigen::MatrixXcd x = mat(X[k * K + l]);
        const cplx c = m.alpha[k] * std::conj(m.alpha[l]);
        for (Eigen::Index i = 0; i < x.rows(); ++i)
          for (Eigen::Index j = 0; j < x.cols(); ++j)
            if (x(i, j) != cplx(0.0)) rho.block(i * D, j * D, D, D) += c * x(i, j) * x;
      }
    return rho;
  };

  RunResult res;
  res.id = "hybrid";
  res.params = m.params;
  res.columns = {"t", "a", "photons_W", "photons_w", "trace"};
  double drift = 0.0, min_eig = 0.0;
  const std::size_t check_every = std::max<std::size_t>(1, samples / 10);

  auto record = [&](double t) {
    cplx a = 0.0, tr = 0.0, pW = 0.0, pw = 0.0;
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t l = 0; l < K; ++l) {
        const cplx c = m.alpha[k] * std::conj(m.alpha[l]);
        Eigen::MatrixXcd x = mat(X[k * K + l]);
        const cplx p1 = ctrace_of(x, on1), p2 = ctrace_of(x, on2), t1 = ctrace_of(x, ones);
        a += c * (p1 * p1 + p2 * p2);
        tr += c * t1 * t1;
        pW += 2.0 * c * ctrace_of(x, nW) * t1;
        pw += 2.0 * c * ctrace_of(x, nw) * t1;
      }
    drift = std::max(drift, std::abs(tr - 1.0));
    res.rows.push_back({t, a.real(), pW.real(), pw.real(), tr.real()});
  };

  min_eig = min_eigenvalue(full_rho());
  record(0.0);
  for (std::size_t s = 1; s <= samples; ++s) {
    for (auto& v : X) v = map * v;
    for (const auto& v : X)
      if (!v.allFinite()) throw IntegrationError("non-finite state at t = " + std::to_string(s * interval));
    record(s * interval);
    if (s % check_every == 0 || s == samples) min_eig = std::min(min_eig, min_eigenvalue(full_rho()));
  }
  res.checks.push_back({"hamiltonian_hermiticity", m.H.hermiticity_defect(), 1e-12 * std::max(1.0, m.H.max_abs()), true});
  res.checks.push_back({"trace_drift", drift, 1e-6, true});
  res.checks.push_back({"positivity_min_eigenvalue", min_eig, -1e-6, false});
  return res;
}

}  // namespace tchm
