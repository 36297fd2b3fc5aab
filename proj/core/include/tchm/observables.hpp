// Scalar diagnostics over density matrices and trajectories.
#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "tchm/dynamics.hpp"
#include "tchm/statespace.hpp"

namespace tchm {

class AssociationClassifier {
 public:
  AssociationClassifier(const StateSpace& space, std::function<bool(const BasisState&)> xi);
  double operator()(const DensityMatrix& rho) const;
  const std::vector<double>& mask() const { return mask_; }

 private:
  std::vector<double> mask_;
};

double association_degree(const DensityMatrix& rho, const AssociationClassifier& xi);

class ObservableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// tr(P rho); P must be a Hermitian idempotent.
double population(const DensityMatrix& rho, const SparseOperator& projector);
double overlap(const DensityMatrix& rho, const StateVector& psi);

struct RabiAmplitudes {
  std::complex<double> dark;    // |0>_ph |Phi_1>
  std::complex<double> bright;  // |1>_ph |Phi_0>
};
RabiAmplitudes rabi_reference(double omega, double g, double t);

struct JumpClass {
  bool exact = false;
  int form = 0;  // 1: (1+2l)/(2m), 2: 2l/(1+2m), 0: none
  long long l = -1;
  long long m = -1;
};
// Rational ratio p/q.
JumpClass jump_commensurability_rational(long long p, long long q);
// Real ratio: recognized as a rational with denominator <= max_den within rel_tol, else approximate.
JumpClass jump_commensurability(double ratio, long long max_den = 1000000, double rel_tol = 1e-12);

// Final value of a sink population column; throws when absent or when it decreases by more than tol.
double transformation_probability(const Trajectory& tr, const std::string& sink = "p_sink",
                                  double tol = 1e-9);

}  // namespace tchm
