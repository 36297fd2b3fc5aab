#include "tchm/darkstates.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace tchm {

namespace {

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::map<int, std::vector<int>> adjacency(const CavityGraph& graph) {
  std::map<int, std::vector<int>> adj;
  for (int c : graph.cavities) adj[c];
  for (auto [a, b] : graph.edges()) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return adj;
}

std::vector<std::vector<int>> components(const CavityGraph& graph) {
  auto adj = adjacency(graph);
  std::set<int> seen;
  std::vector<std::vector<int>> out;
  for (int c : graph.cavities) {
    if (seen.count(c)) continue;
    std::vector<int> comp;
    std::queue<int> q;
    q.push(c);
    seen.insert(c);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      comp.push_back(u);
      for (int v : adj[u])
        if (seen.insert(v).second) q.push(v);
    }
    out.push_back(comp);
  }
  return out;
}

}  // namespace

long long dark_dimension(int n) {
  if (n < 1) throw DarkStateError("dark_dimension needs n >= 1");
  if (n % 2) return 0;
  return binom(n, n / 2) - binom(n, n / 2 + 1);
}

DarkBasis null_space(const Eigen::MatrixXcd& m, double rel_tol) {
  DarkBasis out;
  out.model_kind = "kernel";
  out.tolerance = rel_tol;
  const Eigen::Index n = m.cols();
  if (n == 0) return out;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0.0;
  double thr = rel_tol * smax;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    out.singular_values.push_back(s(i));
    if (s(i) > thr) ++rank;
    if (smax > 0.0 && s(i) > thr / 10.0 && s(i) < thr * 10.0) out.ambiguous = true;
  }
  if (smax == 0.0) rank = 0;
  out.vectors = svd.matrixV().rightCols(n - rank);
  return out;
}

DarkBasis dark_basis_numeric(const SparseOperator& op, double rel_tol) {
  return null_space(op.dense(), rel_tol);
}

DarkBasis dark_basis_exact(const SparseOperator& sigma_bar, double rel_tol) {
  const Eigen::Index d = sigma_bar.dimension();
  Eigen::MatrixXcd stacked(2 * d, d);
  stacked.topRows(d) = sigma_bar.dense();
  stacked.bottomRows(d) = sigma_bar.adjoint().dense();
  DarkBasis b = null_space(stacked, rel_tol);
  b.model_kind = "exact";
  return b;
}

DarkBasis dark_basis_rwa(const SparseOperator& sigma_bar, double rel_tol) {
  DarkBasis b = null_space(sigma_bar.dense(), rel_tol);
  b.model_kind = "rwa";
  return b;
}

StateSpace atom_register(int n, int d, const std::vector<double>& g) {
  if (n < 1 || d < 2) throw DarkStateError("atom_register needs n >= 1 and d >= 2");
  std::vector<AtomSpec> atoms;
  for (int j = 0; j < n; ++j) {
    double gj = g.empty() ? 1.0 : g[std::min<std::size_t>(j, g.size() - 1)];
    atoms.push_back({"a" + std::to_string(j), d, {0}, {gj}});
  }
  return build_space({}, std::move(atoms));
}

std::vector<std::vector<std::pair<int, int>>> noncrossing_pairings(int n) {
  if (n < 0 || n % 2) throw DarkStateError("pairings need an even count");
  if (n == 0) return {{}};
  std::vector<std::vector<std::pair<int, int>>> out;
  // 0 pairs with an odd-distance partner k; inside (1..k-1) and outside (k+1..n-1) pair independently.
  for (int k = 1; k < n; k += 2) {
    auto inner = noncrossing_pairings(k - 1);
    auto outer = noncrossing_pairings(n - k - 1);
    for (const auto& a : inner)
      for (const auto& b : outer) {
        std::vector<std::pair<int, int>> p{{0, k}};
        for (auto [x, y] : a) p.push_back({x + 1, y + 1});
        for (auto [x, y] : b) p.push_back({x + k + 1, y + k + 1});
        out.push_back(std::move(p));
      }
  }
  return out;
}

std::vector<Eigen::VectorXcd> singlet_product_basis(int n) {
  if (n < 2 || n % 2) throw DarkStateError("singlet products need an even n >= 2");
  if (n > 20) throw DarkStateError("n too large for dense enumeration");
  const long long dim = 1LL << n;
  const int pairs = n / 2;
  const double amp = std::pow(2.0, -0.5 * pairs);
  std::vector<Eigen::VectorXcd> out;
  for (const auto& pairing : noncrossing_pairings(n)) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    for (int mask = 0; mask < (1 << pairs); ++mask) {
      long long idx = 0;
      int sign = 1;
      for (int p = 0; p < pairs; ++p) {
        auto [i, j] = pairing[p];
        int excited = (mask >> p) & 1 ? i : j;
        if (excited == i) sign = -sign;
        idx |= 1LL << (n - 1 - excited);
      }
      v(idx) += amp * sign;
    }
    out.push_back(std::move(v));
  }
  return out;
}

Eigen::VectorXcd multi_singlet(int d) {
  if (d < 2) throw DarkStateError("multi-singlet needs d >= 2");
  if (d > 6) throw DarkStateError("multi-singlet limited to d <= 6 (d^d basis)");
  long long dim = 1;
  for (int i = 0; i < d; ++i) dim *= d;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  double fact = 1.0;
  for (int i = 2; i <= d; ++i) fact *= i;
  const double amp = 1.0 / std::sqrt(fact);
  do {
    int inversions = 0;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        if (perm[i] > perm[j]) ++inversions;
    long long idx = 0;
    for (int k = 0; k < d; ++k) idx = idx * d + perm[k];
    v(idx) = (inversions % 2 ? -amp : amp);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return v;
}

double projection_residual(const Eigen::MatrixXcd& b, const Eigen::VectorXcd& v) {
  if (b.cols() == 0) return v.norm();
  return (v - b * (b.adjoint() * v)).norm();
}

int numerical_rank(const std::vector<Eigen::VectorXcd>& vs, double rel_tol) {
  if (vs.empty()) return 0;
  Eigen::MatrixXcd m(vs.front().size(), vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) m.col(i) = vs[i];
  return static_cast<int>(m.cols()) - null_space(m, rel_tol).dimension();
}

bool is_even_graph(const CavityGraph& graph) {
  auto adj = adjacency(graph);
  std::map<int, int> color;
  for (const auto& [start, _] : adj) {
    if (color.count(start)) continue;
    color[start] = 0;
    std::queue<int> q;
    q.push(start);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj[u]) {
        if (v == u) return false;
        auto it = color.find(v);
        if (it == color.end()) {
          color[v] = 1 - color[u];
          q.push(v);
        } else if (it->second == color[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

CavityGraph with_bridges(const CavityGraph& graph) {
  CavityGraph g = graph;
  if (g.atom_bridges.empty())
    for (const auto& e : g.photon_edges) g.atom_bridges.push_back({e.i, e.j, {1.0}});
  return g;
}

StateSpace diatomic_space(const CavityGraph& graph, double g) {
  if (graph.cavities.empty()) throw DarkStateError("graph has no cavities");
  return build_space({}, {{"A", 2, graph.cavities, {g}}, {"B", 2, graph.cavities, {g}}});
}

Eigen::VectorXcd cavity_singlet(const StateSpace& space, int cavity) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space.dimension());
  BasisState s;
  s.atoms = {{0, cavity}, {1, cavity}};
  v(space.index_of(s)) = 1.0 / std::sqrt(2.0);
  s.atoms = {{1, cavity}, {0, cavity}};
  v(space.index_of(s)) = -1.0 / std::sqrt(2.0);
  return v;
}

BlackState black_state(const CavityGraph& graph, double g) {
  if (!is_even_graph(graph))
    throw DarkStateError("black diatomic states can only exist for even graphs");
  CavityGraph gb = with_bridges(graph);
  BlackState out{diatomic_space(graph, g), {}, {}, 0};
  const auto& space = out.space;
  SparseOperator hop = atom_hopping(space, gb);

  const std::size_t m = graph.cavities.size();
  std::map<int, std::size_t> col_of;
  for (std::size_t c = 0; c < m; ++c) col_of[graph.cavities[c]] = c;
  std::vector<Eigen::VectorXcd> singlets;
  for (int c : graph.cavities) singlets.push_back(cavity_singlet(space, c));

  Eigen::MatrixXcd sys(space.dimension(), m);
  for (std::size_t c = 0; c < m; ++c) sys.col(c) = hop.apply(singlets[c]);
  out.sign_solution_dimension = null_space(sys, 1e-9).dimension();

  // One gauge per connected component, eps = +1 on its first cavity.
  std::vector<double> eps(m, 0.0);
  for (const auto& comp : components(gb)) {
    Eigen::MatrixXcd sub(space.dimension(), comp.size());
    for (std::size_t k = 0; k < comp.size(); ++k) sub.col(k) = sys.col(col_of[comp[k]]);
    DarkBasis ns = null_space(sub, 1e-9);
    if (ns.dimension() != 1)
      throw DarkStateError("sign system has no unique solution on a component");
    Eigen::VectorXcd x = ns.vectors.col(0);
    x /= x(0);
    for (std::size_t k = 0; k < comp.size(); ++k) {
      double r = x(k).real();
      if (std::abs(std::abs(r) - 1.0) > 1e-8 || std::abs(x(k).imag()) > 1e-8)
        throw DarkStateError("sign system solution is not a +-1 pattern");
      eps[col_of[comp[k]]] = r > 0 ? 1.0 : -1.0;
    }
  }

  out.vector = Eigen::VectorXcd::Zero(space.dimension());
  for (std::size_t c = 0; c < m; ++c) {
    out.vector += eps[c] * singlets[c];
    out.signs.push_back(static_cast<int>(eps[c]));
  }
  out.vector.normalize();
  return out;
}

BlackResiduals black_residuals(const BlackState& b, const CavityGraph& graph) {
  BlackResiduals r;
  SparseOperator hop = atom_hopping(b.space, with_bridges(graph));
  r.hopping = hop.apply(b.vector).norm();
  for (int c : graph.cavities) {
    SparseOperator s = collective_lowering(b.space, {}, c);
    SparseOperator e = s + s.adjoint();
    r.emission = std::max(r.emission, e.apply(b.vector).norm());
  }
  return r;
}

}  // namespace tchm
