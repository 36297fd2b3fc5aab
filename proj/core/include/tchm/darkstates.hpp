// Dark subspaces, singlet bases and black states on cavity graphs.
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tchm/operators.hpp"
#include "tchm/statespace.hpp"

namespace tchm {

class DarkStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DarkBasis {
  Eigen::MatrixXcd vectors;  // orthonormal columns
  std::string model_kind;    // "rwa", "exact" or "kernel"
  double tolerance = 1e-9;
  bool ambiguous = false;    // a singular value sits within 10x of the threshold
  std::vector<double> singular_values;

  int dimension() const { return static_cast<int>(vectors.cols()); }
};

// C(n, n/2) - C(n, n/2 + 1) for even n, 0 for odd n.
long long dark_dimension(int n);

// Orthonormal null space of a dense matrix; singular values below rel_tol * sigma_max count as zero.
DarkBasis null_space(const Eigen::MatrixXcd& m, double rel_tol = 1e-9);
DarkBasis dark_basis_numeric(const SparseOperator& op, double rel_tol = 1e-9);

// Stationary dark subspace of the exact model: vectors annihilated by sigma_bar + sigma_bar^dag
// inside every excitation sector, i.e. Ker(sigma_bar) intersected with Ker(sigma_bar^dag).
DarkBasis dark_basis_exact(const SparseOperator& sigma_bar, double rel_tol = 1e-9);
// RWA dark subspace Ker(sigma_bar).
DarkBasis dark_basis_rwa(const SparseOperator& sigma_bar, double rel_tol = 1e-9);

// n fixed d-level atoms in one cavity, no photons; atom 0 is the most significant digit.
StateSpace atom_register(int n, int d = 2, const std::vector<double>& g = {});

// Non-crossing perfect matchings of 0..n-1.
std::vector<std::vector<std::pair<int, int>>> noncrossing_pairings(int n);
std::vector<Eigen::VectorXcd> singlet_product_basis(int n);
Eigen::VectorXcd multi_singlet(int d);

// Projection residual of v onto the column span of b (b orthonormal).
double projection_residual(const Eigen::MatrixXcd& b, const Eigen::VectorXcd& v);
int numerical_rank(const std::vector<Eigen::VectorXcd>& vs, double rel_tol = 1e-9);

bool is_even_graph(const CavityGraph& graph);

struct BlackState {
  StateSpace space;  // two two-level atoms, positions over every cavity
  Eigen::VectorXcd vector;
  std::vector<int> signs;           // per cavity, in graph.cavities order
  int sign_solution_dimension = 0;  // null-space dimension of the sign system
};

// The diatomic state annihilated by hopping and by per-cavity emission.
BlackState black_state(const CavityGraph& graph, double g = 1.0);
// Graph with atom bridges copied from photon edges when it has none.
CavityGraph with_bridges(const CavityGraph& graph);
StateSpace diatomic_space(const CavityGraph& graph, double g = 1.0);
Eigen::VectorXcd cavity_singlet(const StateSpace& space, int cavity);

struct BlackResiduals {
  double hopping = 0.0;
  double emission = 0.0;  // max over cavities
};
BlackResiduals black_residuals(const BlackState& b, const CavityGraph& graph);

}  // namespace tchm
