// Sparse operators over a StateSpace and the generic cavity Hamiltonians.
#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "tchm/statespace.hpp"

namespace tchm {

using cplx = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cplx>;
using Triplet = Eigen::Triplet<cplx>;

class OperatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Entry {
  std::size_t row;
  std::size_t col;
  cplx value;
};

class SparseOperator {
 public:
  SparseOperator() = default;
  explicit SparseOperator(std::size_t dim);
  explicit SparseOperator(SpMat m);

  // Duplicates are summed; explicit zeros are dropped.
  static SparseOperator from_triplets(std::size_t dim, const std::vector<Triplet>& t);
  static SparseOperator identity(std::size_t dim);
  static SparseOperator diagonal(const Eigen::VectorXcd& d);

  std::size_t dimension() const { return static_cast<std::size_t>(m_.rows()); }
  const SpMat& matrix() const { return m_; }
  std::size_t nonzeros() const { return static_cast<std::size_t>(m_.nonZeros()); }
  std::vector<Entry> entries() const;
  cplx coeff(std::size_t r, std::size_t c) const;

  SparseOperator adjoint() const;
  double max_abs() const;
  double max_row_sum() const;
  double hermiticity_defect() const;
  bool is_hermitian(double tol = 1e-12) const;
  // Throws OperatorError when ||A - A^dag||_max > tol.
  const SparseOperator& require_hermitian(double tol = 1e-12, const std::string& what = "operator") const;

  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(m_); }
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const { return m_ * v; }

  SparseOperator& operator+=(const SparseOperator& o);
  SparseOperator& operator-=(const SparseOperator& o);
  SparseOperator& operator*=(cplx s);

 private:
  SpMat m_;
};

SparseOperator operator+(SparseOperator a, const SparseOperator& b);
SparseOperator operator-(SparseOperator a, const SparseOperator& b);
SparseOperator operator*(const SparseOperator& a, const SparseOperator& b);
SparseOperator operator*(cplx s, SparseOperator a);
SparseOperator commutator(const SparseOperator& a, const SparseOperator& b);

// Elementary action on a basis state: mutates it and multiplies amp, or returns false (annihilated).
using Action = std::function<bool(BasisState&, cplx&)>;

namespace act {
Action photon_lower(int mode);
Action photon_raise(int mode, int cap);
Action transition(int atom, int to, int from);  // |to><from| on the level register
Action move(int atom, int to, int from);        // position register
Action at_position(int atom, int pos);
Action site_lower(int site);
Action site_raise(int site, int cap);
Action site_transfer(int to, int from, int cap_to);
Action when(std::function<bool(const BasisState&)> pred);
}  // namespace act

// Product factors[0] * factors[1] * ... (rightmost acts first). Intermediate states are not required
// to lie in the space; only the final image is.
SparseOperator build_term(const StateSpace& space, const std::vector<Action>& factors,
                          cplx coeff = 1.0);
SparseOperator diagonal_operator(const StateSpace& space,
                                 const std::function<double(const BasisState&)>& f);
SparseOperator projector(const StateSpace& space,
                         const std::function<bool(const BasisState&)>& pred);

enum class LadderKind { create, annihilate };
enum class SigmaKind { raise, lower };

SparseOperator photon_op(const StateSpace& space, const std::string& mode, LadderKind kind);
SparseOperator photon_op(const StateSpace& space, int mode, LadderKind kind);
SparseOperator number_op(const StateSpace& space, int mode);
SparseOperator atom_sigma(const StateSpace& space, const std::string& atom, int upper, int lower,
                          SigmaKind kind);
SparseOperator atom_sigma(const StateSpace& space, int atom, int upper, int lower, SigmaKind kind);
SparseOperator excitation_number(const StateSpace& space);

struct PhotonEdge {
  int i;
  int j;
  double mu;
};

struct AtomBridge {
  int j;
  int q;
  std::vector<double> r;  // per atom; a single entry applies to every atom
};

struct CavityGraph {
  std::vector<int> cavities;
  std::vector<PhotonEdge> photon_edges;
  std::vector<AtomBridge> atom_bridges;

  bool has_cavity(int c) const;
  // Union of photon edges and atom bridges, as undirected pairs.
  std::vector<std::pair<int, int>> edges() const;
};

CavityGraph ring_graph(int n);
CavityGraph path_graph(int n);

struct CavityParams {
  int cavity = 0;
  int mode = 0;
  double omega = 1.0;
  std::vector<double> g;  // per atom; empty means the atoms' own first coupling
};

// Sum over atoms located in `p.cavity`: w a^dag a + w sum sigma^dag sigma + interaction.
SparseOperator build_tc(const StateSpace& space, const CavityParams& p, bool rwa);
SparseOperator build_tch(const StateSpace& space, const CavityGraph& graph,
                         const std::vector<CavityParams>& cavities, bool rwa);
SparseOperator atom_hopping(const StateSpace& space, const CavityGraph& graph);
// sum_j g_j sigma_j over two-level atoms located at `cavity` (any position when cavity < 0).
SparseOperator collective_lowering(const StateSpace& space, const std::vector<double>& g,
                                   int cavity = -1);

}  // namespace tchm
