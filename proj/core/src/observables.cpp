#include "tchm/observables.hpp"

#include <cmath>
#include <numeric>

namespace tchm {

AssociationClassifier::AssociationClassifier(const StateSpace& space,
                                             std::function<bool(const BasisState&)> xi) {
  mask_.reserve(space.dimension());
  for (const auto& s : space.basis()) mask_.push_back(xi(s) ? 1.0 : 0.0);
}

double AssociationClassifier::operator()(const DensityMatrix& rho) const {
  if (static_cast<std::size_t>(rho.rows()) != mask_.size())
    throw ObservableError("classifier and density matrix disagree on dimension");
  double a = 0.0;
  for (std::size_t i = 0; i < mask_.size(); ++i) a += mask_[i] * rho(i, i).real();
  return a;
}

double association_degree(const DensityMatrix& rho, const AssociationClassifier& xi) {
  return xi(rho);
}

double population(const DensityMatrix& rho, const SparseOperator& P) {
  if (P.dimension() != static_cast<std::size_t>(rho.rows()))
    throw ObservableError("projector dimension mismatch");
  if (!P.is_hermitian(1e-10)) throw ObservableError("projector is not Hermitian");
  SpMat d = P.matrix() * P.matrix() - P.matrix();
  for (Eigen::Index k = 0; k < d.outerSize(); ++k)
    for (SpMat::InnerIterator it(d, k); it; ++it)
      if (std::abs(it.value()) > 1e-10) throw ObservableError("projector is not idempotent");
  Eigen::MatrixXcd pr = P.matrix() * rho;
  return pr.trace().real();
}

double overlap(const DensityMatrix& rho, const StateVector& psi) {
  return (psi.adjoint() * rho * psi)(0, 0).real();
}

RabiAmplitudes rabi_reference(double omega, double g, double t) {
  const std::complex<double> phase = std::exp(std::complex<double>(0.0, -omega * t));
  return {phase * std::cos(g * t), std::complex<double>(0.0, -1.0) * phase * std::sin(g * t)};
}

JumpClass jump_commensurability_rational(long long p, long long q) {
  if (p <= 0 || q <= 0) throw ObservableError("ratio must be positive");
  long long d = std::gcd(p, q);
  p /= d;
  q /= d;
  JumpClass c;
  if (p % 2 == 1 && q % 2 == 0) {
    // (1+2l)/(2m) with l = (p-1)/2, m = q/2
    c = {true, 1, (p - 1) / 2, q / 2};
  } else if (p % 2 == 0 && q % 2 == 1) {
    // 2l/(1+2m); q = 1 needs the scaled representation 3p/3
    if (q >= 3)
      c = {true, 2, p / 2, (q - 1) / 2};
    else
      c = {true, 2, 3 * p / 2, 1};
  }
  return c;
}

JumpClass jump_commensurability(double ratio, long long max_den, double rel_tol) {
  if (!(ratio > 0.0)) throw ObservableError("ratio must be positive");
  // Continued-fraction convergents.
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double x = ratio;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(x);
    if (a > 9e15) break;
    long long ai = static_cast<long long>(a);
    long long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (std::abs(double(h1) / double(k1) - ratio) <= rel_tol * ratio) return jump_commensurability_rational(h1, k1);
    double frac = x - a;
    if (frac <= 0.0) break;
    x = 1.0 / frac;
  }
  return {};
}

double transformation_probability(const Trajectory& tr, const std::string& sink, double tol) {
  std::vector<double> p;
  try {
    p = tr.column(sink);
  } catch (const std::out_of_range&) {
    throw ObservableError("trajectory has no sink observable '" + sink + "'");
  }
  if (p.empty()) throw ObservableError("empty trajectory");
  for (std::size_t k = 1; k < p.size(); ++k)
    if (p[k] < p[k - 1] - tol) throw ObservableError("sink population decreased along the trajectory");
  return p.back();
}

}  // namespace tchm
