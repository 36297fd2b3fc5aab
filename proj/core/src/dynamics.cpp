#include "tchm/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>

namespace tchm {

std::vector<double> Trajectory::column(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::out_of_range("no observable named " + name);
  std::size_t j = static_cast<std::size_t>(it - names.begin());
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& row : values) out.push_back(row[j]);
  return out;
}

UnitaryPropagator::UnitaryPropagator(const SparseOperator& H) {
  H.require_hermitian(1e-12 * std::max(1.0, H.max_abs()), "Hamiltonian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.dense());
  if (es.info() != Eigen::Success) throw IntegrationError("eigensolver failed");
  e_ = es.eigenvalues();
  v_ = es.eigenvectors();
}

StateVector UnitaryPropagator::apply(const StateVector& psi, double t) const {
  Eigen::VectorXcd c = v_.adjoint() * psi;
  for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::exp(cplx(0.0, -e_(k) * t));
  return v_ * c;
}

Trajectory evolve_unitary(const SparseOperator& H, const StateVector& psi0,
                          const std::vector<double>& times) {
  if (static_cast<std::size_t>(psi0.size()) != H.dimension())
    throw IntegrationError("state dimension does not match the Hamiltonian");
  if (H.dimension() > 4096) throw IntegrationError("full diagonalization limited to D <= 4096");
  UnitaryPropagator U(H);
  Trajectory tr;
  tr.times = times;
  for (double t : times) tr.states.push_back(U.apply(psi0, t));
  return tr;
}

double stability_limit(const SparseOperator& H, const std::vector<LindbladChannel>& channels) {
  double s = H.max_row_sum();
  for (const auto& c : channels) {
    if (c.rate == 0.0) continue;
    s += c.rate * (c.op.adjoint() * c.op).max_row_sum();
  }
  return s > 0.0 ? 0.05 / s : 1.0;
}

LindbladGenerator::LindbladGenerator(const SparseOperator& H,
                                     const std::vector<LindbladChannel>& channels) {
  SpMat heff = H.matrix();
  for (const auto& c : channels) {
    if (c.rate < 0.0) throw IntegrationError("negative rate on channel " + c.label);
    if (c.op.dimension() != H.dimension()) throw IntegrationError("channel dimension mismatch");
    if (c.rate == 0.0) continue;
    SpMat a = c.op.matrix() * std::sqrt(c.rate);
    SpMat ad = a.adjoint();
    heff -= cplx(0.0, 0.5) * SpMat(ad * a);
    jumps_.emplace_back(a);
  }
  heff_ = heff;
  heff_.makeCompressed();
}

Eigen::MatrixXcd LindbladGenerator::operator()(const Eigen::MatrixXcd& rho) const {
  const cplx mi(0.0, -1.0);
  // Only sparse * dense products: X A^dag = (A X^dag)^dag.
  Eigen::MatrixXcd hr = heff_ * rho;
  Eigen::MatrixXcd rh = heff_ * rho.adjoint();
  Eigen::MatrixXcd out = mi * hr - mi * rh.adjoint();
  for (const auto& a : jumps_) {
    Eigen::MatrixXcd ar = a * rho;
    Eigen::MatrixXcd ara = a * ar.adjoint();
    out += ara.adjoint();
  }
  return out;
}

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

}  // namespace

Eigen::MatrixXcd LindbladGenerator::superoperator() const {
  const Eigen::Index d = heff_.rows();
  Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);
  Eigen::MatrixXcd he(heff_);
  const cplx mi(0.0, -1.0);
  Eigen::MatrixXcd L = mi * (kron(I, he) - kron(he.conjugate(), I));
  for (const auto& a : jumps_) {
    Eigen::MatrixXcd ad_(a);
    L += kron(ad_.conjugate(), ad_);
  }
  return L;
}

Eigen::MatrixXcd rk4_step(const LindbladGenerator& L, const Eigen::MatrixXcd& rho, double dt) {
  Eigen::MatrixXcd k1 = L(rho);
  Eigen::MatrixXcd k2 = L(rho + (0.5 * dt) * k1);
  Eigen::MatrixXcd k3 = L(rho + (0.5 * dt) * k2);
  Eigen::MatrixXcd k4 = L(rho + dt * k3);
  return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Rk4Propagator::Rk4Propagator(const LindbladGenerator& L, double dt)
    : d_(static_cast<Eigen::Index>(L.dimension())) {
  Eigen::MatrixXcd hL = dt * L.superoperator();
  const Eigen::Index n = hL.rows();
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
  step_ = term;
  for (int k = 1; k <= 4; ++k) {
    term = (hL * term) / double(k);
    step_ += term;
  }
}

Eigen::MatrixXcd Rk4Propagator::power(std::size_t steps) const {
  const Eigen::Index n = step_.rows();
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd base = step_;
  for (std::size_t k = steps; k; k >>= 1) {
    if (k & 1) result = result * base;
    if (k > 1) base = base * base;
  }
  return result;
}

Eigen::MatrixXcd Rk4Propagator::advance(const Eigen::MatrixXcd& x, std::size_t steps) const {
  Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(x.data(), x.size());
  Eigen::VectorXcd w = power(steps) * v;
  return Eigen::Map<Eigen::MatrixXcd>(w.data(), d_, d_);
}

namespace {

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) i = parent[i] = parent[parent[i]];
  return i;
}

}  // namespace

std::optional<BlockLindblad> BlockLindblad::build(const SparseOperator& H,
                                                  const std::vector<LindbladChannel>& channels,
                                                  const DensityMatrix& rho0) {
  const Eigen::Index D = static_cast<Eigen::Index>(H.dimension());
  SpMat heff = H.matrix();
  std::vector<SpMat> ops;
  for (const auto& c : channels) {
    if (c.rate == 0.0) continue;
    SpMat a = c.op.matrix() * std::sqrt(c.rate);
    heff -= cplx(0.0, 0.5) * SpMat(a.adjoint() * a);
    ops.push_back(std::move(a));
  }
  std::vector<int> parent(D);
  for (Eigen::Index i = 0; i < D; ++i) parent[i] = static_cast<int>(i);
  for (Eigen::Index k = 0; k < heff.outerSize(); ++k)
    for (SpMat::InnerIterator it(heff, k); it; ++it) {
      int a = find_root(parent, static_cast<int>(it.row())), b = find_root(parent, static_cast<int>(it.col()));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  // Coarsen until every jump sends each component into a single component.
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& a : ops) {
      std::vector<int> target(D, -1);
      for (Eigen::Index k = 0; k < a.outerSize(); ++k)
        for (SpMat::InnerIterator it(a, k); it; ++it) {
          int from = find_root(parent, static_cast<int>(it.col()));
          int to = find_root(parent, static_cast<int>(it.row()));
          if (target[from] < 0) {
            target[from] = to;
            continue;
          }
          const int t0 = find_root(parent, target[from]);
          if (t0 != to) {
            parent[std::max(t0, to)] = std::min(t0, to);
            changed = true;
          }
        }
    }
  }

  BlockLindblad bl;
  bl.dim_ = D;
  std::vector<int> comp_of(D, -1), local(D);
  std::vector<int> root_comp(D, -1);
  for (Eigen::Index i = 0; i < D; ++i) {
    int r = find_root(parent, static_cast<int>(i));
    if (root_comp[r] < 0) {
      root_comp[r] = static_cast<int>(bl.comps_.size());
      bl.comps_.emplace_back();
    }
    comp_of[i] = root_comp[r];
    local[i] = static_cast<int>(bl.comps_[comp_of[i]].size());
    bl.comps_[comp_of[i]].push_back(i);
  }
  const int C = static_cast<int>(bl.comps_.size());
  if (C == 1) return std::nullopt;

  for (int c = 0; c < C; ++c) {
    const auto n = static_cast<Eigen::Index>(bl.comps_[c].size());
    bl.heff_.push_back(Eigen::MatrixXcd::Zero(n, n));
  }
  for (Eigen::Index k = 0; k < heff.outerSize(); ++k)
    for (SpMat::InnerIterator it(heff, k); it; ++it)
      bl.heff_[comp_of[it.row()]](local[it.row()], local[it.col()]) += it.value();

  std::vector<Jump> flat;
  std::vector<std::vector<int>> jump_from;  // per channel: component -> flat index
  for (const auto& a : ops) {
    std::vector<int> target(C, -1);
    for (Eigen::Index k = 0; k < a.outerSize(); ++k)
      for (SpMat::InnerIterator it(a, k); it; ++it) {
        int from = comp_of[it.col()], to = comp_of[it.row()];
        if (target[from] >= 0 && target[from] != to) return std::nullopt;
        target[from] = to;
      }
    std::vector<int> idx(C, -1);
    for (int c = 0; c < C; ++c)
      if (target[c] >= 0) {
        idx[c] = static_cast<int>(flat.size());
        flat.push_back({c, target[c],
                        Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(bl.comps_[target[c]].size()),
                                               static_cast<Eigen::Index>(bl.comps_[c].size()))});
      }
    for (Eigen::Index k = 0; k < a.outerSize(); ++k)
      for (SpMat::InnerIterator it(a, k); it; ++it)
        flat[idx[comp_of[it.col()]]].a(local[it.row()], local[it.col()]) += it.value();
    jump_from.push_back(std::move(idx));
  }

  std::map<std::pair<int, int>, int> index;
  std::vector<std::pair<int, int>> queue;
  auto add = [&](int c, int d) {
    if (index.emplace(std::pair{c, d}, static_cast<int>(bl.pairs_.size())).second) {
      bl.pairs_.push_back({c, d});
      queue.push_back({c, d});
    }
  };
  for (Eigen::Index j = 0; j < D; ++j)
    for (Eigen::Index i = 0; i < D; ++i)
      if (rho0(i, j) != cplx(0.0)) {
        add(comp_of[i], comp_of[j]);
        add(comp_of[j], comp_of[i]);
      }
  while (!queue.empty()) {
    auto [c, d] = queue.back();
    queue.pop_back();
    for (const auto& idx : jump_from)
      if (idx[c] >= 0 && idx[d] >= 0) add(flat[idx[c]].to, flat[idx[d]].to);
  }

  const std::size_t P = bl.pairs_.size();
  bl.feeds_.resize(P);
  bl.mirror_.resize(P);
  for (std::size_t p = 0; p < P; ++p) {
    auto [c, d] = bl.pairs_[p];
    bl.mirror_[p] = index.at({d, c});
    for (const auto& idx : jump_from)
      if (idx[c] >= 0 && idx[d] >= 0) {
        auto q = index.at({c, d});
        bl.feeds_[index.at({flat[idx[c]].to, flat[idx[d]].to})].push_back({q, idx[c], idx[d]});
      }
  }
  bl.jumps_ = {std::move(flat)};
  bl.x_.resize(P);
  for (std::size_t p = 0; p < P; ++p) {
    const auto& rows = bl.comps_[bl.pairs_[p].first];
    const auto& cols = bl.comps_[bl.pairs_[p].second];
    Eigen::MatrixXcd x(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) x(i, j) = rho0(rows[i], cols[j]);
    bl.x_[p] = std::move(x);
  }
  return bl;
}

BlockLindblad::Blocks BlockLindblad::rhs(const Blocks& x) const {
  const cplx mi(0.0, -1.0);
  const auto& flat = jumps_.front();
  Blocks out(x.size());
  for (std::size_t p = 0; p < x.size(); ++p) {
    auto [c, d] = pairs_[p];
    out[p].noalias() = mi * (heff_[c] * x[p]);
    out[p].noalias() -= mi * (x[p] * heff_[d].adjoint());
    for (const auto& [q, l, r] : feeds_[p]) out[p].noalias() += flat[l].a * x[q] * flat[r].a.adjoint();
  }
  return out;
}

std::size_t BlockLindblad::largest_component() const {
  std::size_t n = 0;
  for (const auto& c : comps_) n = std::max(n, c.size());
  return n;
}

void BlockLindblad::step(double dt) {
  auto axpy = [](const Blocks& a, double h, const Blocks& b) {
    Blocks r(a.size());
    for (std::size_t p = 0; p < a.size(); ++p) r[p] = a[p] + h * b[p];
    return r;
  };
  Blocks k1 = rhs(x_);
  Blocks k2 = rhs(axpy(x_, 0.5 * dt, k1));
  Blocks k3 = rhs(axpy(x_, 0.5 * dt, k2));
  Blocks k4 = rhs(axpy(x_, dt, k3));
  for (std::size_t p = 0; p < x_.size(); ++p) x_[p] += (dt / 6.0) * (k1[p] + 2.0 * k2[p] + 2.0 * k3[p] + k4[p]);
}

double BlockLindblad::hermitian_repair() {
  double defect = 0.0;
  for (std::size_t p = 0; p < x_.size(); ++p) {
    const std::size_t m = static_cast<std::size_t>(mirror_[p]);
    if (m < p) continue;
    Eigen::MatrixXcd avg = 0.5 * (x_[p] + x_[m].adjoint());
    if (x_[p].size()) defect = std::max(defect, (x_[p] - x_[m].adjoint()).cwiseAbs().maxCoeff());
    x_[p] = avg;
    if (m != p) x_[m] = avg.adjoint();
  }
  return defect;
}

DensityMatrix BlockLindblad::density() const {
  DensityMatrix rho = DensityMatrix::Zero(dim_, dim_);
  for (std::size_t p = 0; p < x_.size(); ++p) {
    const auto& rows = comps_[pairs_[p].first];
    const auto& cols = comps_[pairs_[p].second];
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) rho(rows[i], cols[j]) = x_[p](i, j);
  }
  return rho;
}

DensityMatrix pure_density(const StateVector& psi) { return psi * psi.adjoint(); }

double min_eigenvalue(const DensityMatrix& rho) {
  Eigen::MatrixXcd h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

namespace {

void record(Trajectory& tr, double t, const DensityMatrix& rho, const LindbladOptions& opt) {
  tr.times.push_back(t);
  std::vector<double> row;
  row.reserve(opt.observables.size());
  for (const auto& o : opt.observables) row.push_back(o.fn(rho));
  tr.values.push_back(std::move(row));
  if (opt.keep_states) tr.densities.push_back(rho);
  tr.max_trace_drift = std::max(tr.max_trace_drift, std::abs(rho.trace() - cplx(1.0)));
}

bool finite(const Eigen::MatrixXcd& m) { return m.allFinite(); }

}  // namespace

Trajectory evolve_lindblad(const SparseOperator& H, const std::vector<LindbladChannel>& channels,
                           const DensityMatrix& rho0, const LindbladOptions& opt) {
  const std::size_t D = H.dimension();
  if (static_cast<std::size_t>(rho0.rows()) != D || static_cast<std::size_t>(rho0.cols()) != D)
    throw IntegrationError("initial density matrix has the wrong dimension");
  if (opt.t_max <= 0.0 || opt.samples == 0) throw IntegrationError("empty time grid");
  H.require_hermitian(1e-12 * std::max(1.0, H.max_abs()), "Hamiltonian");

  const double limit = stability_limit(H, channels);
  double dt = opt.dt > 0.0 ? opt.dt : limit;
  if (opt.enforce_stability && dt > limit * (1.0 + 1e-12))
    throw StabilityError("time step " + std::to_string(dt) + " exceeds stability limit; use dt <= " +
                             std::to_string(limit),
                         limit);
  const double interval = opt.t_max / double(opt.samples);
  std::size_t per_sample = static_cast<std::size_t>(std::ceil(interval / dt * (1.0 - 1e-12)));
  per_sample = std::max<std::size_t>(per_sample, 1);
  dt = interval / double(per_sample);

  Trajectory tr;
  tr.dt = dt;
  tr.steps = per_sample * opt.samples;
  for (const auto& o : opt.observables) tr.names.push_back(o.name);
  tr.min_eigenvalue = min_eigenvalue(rho0);

  LindbladGenerator L(H, channels);
  DensityMatrix rho = rho0;
  record(tr, 0.0, rho, opt);

  const std::size_t check_every = std::max<std::size_t>(1, opt.samples / std::max<std::size_t>(1, opt.positivity_checks));
  const bool small = D <= 16;
  Eigen::MatrixXcd sample_map;
  if (small) sample_map = Rk4Propagator(L, dt).power(per_sample);
  std::optional<BlockLindblad> blocked;
  if (!small) blocked = BlockLindblad::build(H, channels, rho0);
  // dense blocks lose to the sparse generator once components get large
  if (blocked && blocked->largest_component() > 64) blocked.reset();

  for (std::size_t s = 1; s <= opt.samples; ++s) {
    if (small) {
      Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
      Eigen::VectorXcd w = sample_map * v;
      rho = Eigen::Map<Eigen::MatrixXcd>(w.data(), D, D);
      tr.max_hermiticity_drift =
          std::max(tr.max_hermiticity_drift, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
      if (opt.hermitian_repair) rho = 0.5 * (rho + rho.adjoint()).eval();
    } else if (blocked) {
      for (std::size_t k = 0; k < per_sample; ++k) {
        blocked->step(dt);
        if (opt.hermitian_repair)
          tr.max_hermiticity_drift = std::max(tr.max_hermiticity_drift, blocked->hermitian_repair());
      }
      rho = blocked->density();
    } else {
      for (std::size_t k = 0; k < per_sample; ++k) {
        rho = rk4_step(L, rho, dt);
        if (opt.hermitian_repair) {
          tr.max_hermiticity_drift =
              std::max(tr.max_hermiticity_drift, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
          rho = 0.5 * (rho + rho.adjoint()).eval();
        }
      }
    }
    if (!finite(rho)) throw IntegrationError("non-finite density matrix at t = " + std::to_string(s * interval));
    record(tr, s * interval, rho, opt);
    if (s % check_every == 0 || s == opt.samples)
      tr.min_eigenvalue = std::min(tr.min_eigenvalue, min_eigenvalue(rho));
  }
  return tr;
}

double stationarity_residual(const SparseOperator& H, const std::vector<LindbladChannel>& channels,
                             const DensityMatrix& rho) {
  LindbladGenerator L(H, channels);
  return L(rho).cwiseAbs().maxCoeff();
}

}  // namespace tchm
