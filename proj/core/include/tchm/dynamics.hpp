// Unitary propagation and fixed-step RK4 integration of the Lindblad master equation.
#pragma once

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tchm/operators.hpp"

namespace tchm {

using StateVector = Eigen::VectorXcd;
using DensityMatrix = Eigen::MatrixXcd;

struct LindbladChannel {
  SparseOperator op;
  double rate = 0.0;
  std::string label;
};

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StabilityError : public IntegrationError {
 public:
  StabilityError(const std::string& msg, double suggested)
      : IntegrationError(msg), suggested_dt(suggested) {}
  double suggested_dt;
};

struct Observable {
  std::string name;
  std::function<double(const DensityMatrix&)> fn;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;        // unitary runs, or when requested
  std::vector<DensityMatrix> densities;   // Lindblad runs with keep_states
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;  // values[k][j]: observable j at times[k]
  double dt = 0.0;
  std::size_t steps = 0;
  double max_trace_drift = 0.0;
  double max_hermiticity_drift = 0.0;  // before each repair
  double min_eigenvalue = 0.0;         // over positivity samples

  std::vector<double> column(const std::string& name) const;
};

Trajectory evolve_unitary(const SparseOperator& H, const StateVector& psi0,
                          const std::vector<double>& times);
// Unitary propagator exp(-iHt) via full diagonalization.
class UnitaryPropagator {
 public:
  explicit UnitaryPropagator(const SparseOperator& H);
  StateVector apply(const StateVector& psi, double t) const;
  const Eigen::VectorXd& energies() const { return e_; }

 private:
  Eigen::VectorXd e_;
  Eigen::MatrixXcd v_;
};

// 0.05 / (||H||_rowsum + sum_i gamma_i ||A_i^dag A_i||_rowsum).
double stability_limit(const SparseOperator& H, const std::vector<LindbladChannel>& channels);

struct LindbladOptions {
  double t_max = 1.0;
  double dt = 0.0;           // 0: use the stability limit
  std::size_t samples = 100; // sample intervals; samples + 1 recorded points
  std::vector<Observable> observables;
  bool keep_states = false;
  bool enforce_stability = true;
  bool hermitian_repair = true;
  std::size_t positivity_checks = 10;
};

// Generator -i(H_eff rho - rho H_eff^dag) + sum gamma A rho A^dag with H_eff = H - i/2 sum gamma A^dag A.
class LindbladGenerator {
 public:
  LindbladGenerator(const SparseOperator& H, const std::vector<LindbladChannel>& channels);
  Eigen::MatrixXcd operator()(const Eigen::MatrixXcd& rho) const;
  std::size_t dimension() const { return static_cast<std::size_t>(heff_.rows()); }
  // Dense superoperator on column-stacked matrices.
  Eigen::MatrixXcd superoperator() const;

 private:
  // Row-major storage: sparse * dense is several times faster this way.
  using RowSpMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
  RowSpMat heff_;
  std::vector<RowSpMat> jumps_;  // sqrt(gamma) A
};

Eigen::MatrixXcd rk4_step(const LindbladGenerator& L, const Eigen::MatrixXcd& rho, double dt);

// Exact RK4 one-step map as a D^2 x D^2 matrix, powered by squaring; for small D.
class Rk4Propagator {
 public:
  Rk4Propagator(const LindbladGenerator& L, double dt);
  Eigen::MatrixXcd power(std::size_t steps) const;
  Eigen::MatrixXcd advance(const Eigen::MatrixXcd& x, std::size_t steps) const;
  const Eigen::MatrixXcd& step_map() const { return step_; }

 private:
  Eigen::MatrixXcd step_;
  Eigen::Index d_;
};

// RK4 on the block structure of a Lindblad problem: basis components connected by H_eff, with every
// jump mapping a component into a single component. Only blocks reachable from rho0 are stored.
class BlockLindblad {
 public:
  // Empty when H_eff is connected or some jump splits a component.
  static std::optional<BlockLindblad> build(const SparseOperator& H,
                                            const std::vector<LindbladChannel>& channels,
                                            const DensityMatrix& rho0);
  std::size_t components() const { return comps_.size(); }
  std::size_t blocks() const { return pairs_.size(); }
  std::size_t largest_component() const;
  void step(double dt);
  // Symmetrizes mirrored blocks; returns the largest defect found.
  double hermitian_repair();
  DensityMatrix density() const;

 private:
  struct Jump {
    int from;
    int to;
    Eigen::MatrixXcd a;  // sqrt(gamma) A restricted to from -> to
  };
  using Blocks = std::vector<Eigen::MatrixXcd>;
  Blocks rhs(const Blocks& x) const;

  Eigen::Index dim_ = 0;
  std::vector<std::vector<Eigen::Index>> comps_;
  std::vector<Eigen::MatrixXcd> heff_;
  std::vector<std::vector<Jump>> jumps_;  // per channel
  std::vector<std::pair<int, int>> pairs_;
  std::vector<int> mirror_;
  // per block: (channel jump source block, jump index on left, jump index on right)
  std::vector<std::vector<std::array<int, 3>>> feeds_;
  Blocks x_;
};

Trajectory evolve_lindblad(const SparseOperator& H, const std::vector<LindbladChannel>& channels,
                           const DensityMatrix& rho0, const LindbladOptions& opt);

double stationarity_residual(const SparseOperator& H, const std::vector<LindbladChannel>& channels,
                             const DensityMatrix& rho);

DensityMatrix pure_density(const StateVector& psi);
double min_eigenvalue(const DensityMatrix& rho);

}  // namespace tchm
