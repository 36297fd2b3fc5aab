#include <cmath>
#include <numbers>

#include <Eigen/QR>

#include "tchm/darkstates.hpp"
#include "tchm_cli/cli.hpp"

namespace tchm::cli {

namespace {

Eigen::MatrixXcd orthonormal_span(const std::vector<Eigen::VectorXcd>& vs) {
  Eigen::MatrixXcd m(vs.front().size(), static_cast<Eigen::Index>(vs.size()));
  for (std::size_t k = 0; k < vs.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = vs[k];
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU);
  const int r = numerical_rank(vs);
  return svd.matrixU().leftCols(r);
}

CavityGraph six_cycle() {
  // 3x2 grid, cells numbered row-wise; ring 1-2-4-6-5-3-1 (zero-based here).
  CavityGraph g;
  g.cavities = {0, 1, 2, 3, 4, 5};
  const int ring[6] = {0, 1, 3, 5, 4, 2};
  for (int k = 0; k < 6; ++k) g.photon_edges.push_back({ring[k], ring[(k + 1) % 6], 1.0});
  return g;
}

}  // namespace

std::vector<Check> verify_darkstates() {
  std::vector<Check> out;
  for (int n : {2, 4, 6}) {
    StateSpace S = atom_register(n);
    DarkBasis b = dark_basis_exact(collective_lowering(S, {}));
    out.push_back({"darkstates.dimension_n" + std::to_string(n),
                   std::abs(double(b.dimension() - dark_dimension(n))), 0.0, true});
  }
  {
    StateSpace S = atom_register(4);
    DarkBasis b = dark_basis_exact(collective_lowering(S, {}));
    auto singlets = singlet_product_basis(4);
    Eigen::MatrixXcd span = orthonormal_span(singlets);
    double r = 0.0;
    for (Eigen::Index k = 0; k < b.vectors.cols(); ++k) r = std::max(r, projection_residual(span, b.vectors.col(k)));
    for (const auto& v : singlets) r = std::max(r, projection_residual(b.vectors, v));
    out.push_back({"darkstates.singlet_span_n4", r, 1e-10, true});
  }
  {
    StateSpace S = atom_register(2, 2, {1.0, 1.1});
    out.push_back({"darkstates.unequal_couplings_dimension",
                   double(dark_basis_exact(collective_lowering(S, {})).dimension()), 0.0, true});
  }
  for (auto [name, graph] : {std::pair{"two_cavity", path_graph(2)}, {"six_cycle", six_cycle()}}) {
    BlackState bs = black_state(graph);
    BlackResiduals r = black_residuals(bs, with_bridges(graph));
    out.push_back({std::string("darkstates.black_") + name + "_hopping", r.hopping, 1e-10, true});
    out.push_back({std::string("darkstates.black_") + name + "_emission", r.emission, 1e-10, true});
  }
  double refused = 0.0;
  try {
    black_state(ring_graph(3));
  } catch (const DarkStateError&) {
    refused = 1.0;
  }
  out.push_back({"darkstates.triangle_refused", refused, 1.0, false});
  return out;
}

std::vector<Check> verify_dynamics() {
  std::vector<Check> out;
  {
    const double omega = 1.0, g = 0.3;
    StateSpace S = build_space({{"a", omega, 1}}, {{"atom", 2, {0}, {g}}});
    SparseOperator H = build_tc(S, {0, 0, omega, {}}, true);
    const std::size_t dark = S.index_of({{0}, {{1, 0}}, {}});
    const std::size_t bright = S.index_of({{1}, {{0, 0}}, {}});
    StateVector psi0 = StateVector::Zero(S.dimension());
    psi0(dark) = 1.0;
    std::vector<double> times;
    const double span = 3.0 * 2.0 * std::numbers::pi / (2.0 * g);
    for (int k = 0; k < 100; ++k) times.push_back(span * k / 99.0);
    Trajectory tr = evolve_unitary(H, psi0, times);
    double err = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      RabiAmplitudes ref = rabi_reference(omega, g, times[k]);
      err = std::max({err, std::abs(tr.states[k](dark) - ref.dark), std::abs(tr.states[k](bright) - ref.bright)});
    }
    out.push_back({"dynamics.rabi_amplitude_error", err, 1e-8, true});
  }
  {
    StateSpace S = build_space({{"a", 1.0, 1}}, {});
    SparseOperator H = number_op(S, 0);
    std::vector<LindbladChannel> ch{{photon_op(S, 0, LadderKind::annihilate), 1.0, "leak"}};
    StateVector psi = StateVector::Zero(S.dimension());
    psi(S.index_of({{1}, {}, {}})) = 1.0;
    LindbladOptions o;
    o.t_max = 5.0;
    o.samples = 100;
    const std::size_t one = S.index_of({{1}, {}, {}});
    o.observables = {{"n", [one](const DensityMatrix& r) { return r(one, one).real(); }}};
    Trajectory tr = evolve_lindblad(H, ch, pure_density(psi), o);
    double err = 0.0;
    for (std::size_t k = 0; k < tr.times.size(); ++k) err = std::max(err, std::abs(tr.values[k][0] - std::exp(-tr.times[k])));
    out.push_back({"dynamics.damped_cavity_error", err, 1e-5, true});
    out.push_back({"dynamics.damped_cavity_trace_drift", tr.max_trace_drift, 1e-6, true});
  }
  for (const char* id : {"assoc", "bottleneck"}) {
    ScenarioConfig c;
    c.id = id;
    c.t_max = 10.0;
    c.samples = 50;
    for (const auto& k : run_scenario(c).checks) {
      Check q = k;
      q.name = std::string("dynamics.") + id + "." + k.name;
      out.push_back(q);
    }
  }
  return out;
}

}  // namespace tchm::cli
