#include "tchm/operators.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace tchm {

SparseOperator::SparseOperator(std::size_t dim) : m_(dim, dim) {}

SparseOperator::SparseOperator(SpMat m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw OperatorError("operator must be square");
  m_.prune(cplx(0.0));
  m_.makeCompressed();
}

SparseOperator SparseOperator::from_triplets(std::size_t dim, const std::vector<Triplet>& t) {
  SpMat m(dim, dim);
  for (const auto& e : t)
    if (static_cast<std::size_t>(e.row()) >= dim || static_cast<std::size_t>(e.col()) >= dim)
      throw OperatorError("triplet index out of range");
  m.setFromTriplets(t.begin(), t.end());
  return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::identity(std::size_t dim) {
  SpMat m(dim, dim);
  m.setIdentity();
  return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::diagonal(const Eigen::VectorXcd& d) {
  std::vector<Triplet> t;
  for (Eigen::Index i = 0; i < d.size(); ++i) t.emplace_back(i, i, d[i]);
  return from_triplets(d.size(), t);
}

std::vector<Entry> SparseOperator::entries() const {
  std::vector<Entry> out;
  out.reserve(m_.nonZeros());
  for (Eigen::Index k = 0; k < m_.outerSize(); ++k)
    for (SpMat::InnerIterator it(m_, k); it; ++it)
      out.push_back({static_cast<std::size_t>(it.row()), static_cast<std::size_t>(it.col()), it.value()});
  std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  return out;
}

cplx SparseOperator::coeff(std::size_t r, std::size_t c) const { return m_.coeff(r, c); }

SparseOperator SparseOperator::adjoint() const { return SparseOperator(SpMat(m_.adjoint())); }

double SparseOperator::max_abs() const {
  double m = 0.0;
  for (Eigen::Index k = 0; k < m_.outerSize(); ++k)
    for (SpMat::InnerIterator it(m_, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

double SparseOperator::max_row_sum() const {
  std::vector<double> rows(m_.rows(), 0.0);
  for (Eigen::Index k = 0; k < m_.outerSize(); ++k)
    for (SpMat::InnerIterator it(m_, k); it; ++it) rows[it.row()] += std::abs(it.value());
  return rows.empty() ? 0.0 : *std::max_element(rows.begin(), rows.end());
}

double SparseOperator::hermiticity_defect() const {
  SpMat d = m_ - SpMat(m_.adjoint());
  double m = 0.0;
  for (Eigen::Index k = 0; k < d.outerSize(); ++k)
    for (SpMat::InnerIterator it(d, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

bool SparseOperator::is_hermitian(double tol) const { return hermiticity_defect() <= tol; }

const SparseOperator& SparseOperator::require_hermitian(double tol, const std::string& what) const {
  double d = hermiticity_defect();
  if (d > tol)
    throw OperatorError(what + " is not Hermitian (defect " + std::to_string(d) + ")");
  return *this;
}

SparseOperator& SparseOperator::operator+=(const SparseOperator& o) {
  if (m_.rows() == 0) {
    m_ = o.m_;
    return *this;
  }
  if (o.dimension() != dimension()) throw OperatorError("dimension mismatch");
  m_ += o.m_;
  m_.prune(cplx(0.0));
  return *this;
}

SparseOperator& SparseOperator::operator-=(const SparseOperator& o) {
  if (m_.rows() == 0) m_ = SpMat(o.m_.rows(), o.m_.cols());
  if (o.dimension() != dimension()) throw OperatorError("dimension mismatch");
  m_ -= o.m_;
  m_.prune(cplx(0.0));
  return *this;
}

SparseOperator& SparseOperator::operator*=(cplx s) {
  m_ *= s;
  m_.prune(cplx(0.0));
  return *this;
}

SparseOperator operator+(SparseOperator a, const SparseOperator& b) { return a += b; }
SparseOperator operator-(SparseOperator a, const SparseOperator& b) { return a -= b; }
SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
  if (a.dimension() != b.dimension()) throw OperatorError("dimension mismatch");
  return SparseOperator(SpMat(a.matrix() * b.matrix()));
}
SparseOperator operator*(cplx s, SparseOperator a) { return a *= s; }
SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) {
  return a * b - b * a;
}

namespace act {

Action photon_lower(int mode) {
  return [mode](BasisState& s, cplx& amp) {
    int& n = s.photons.at(mode);
    if (n <= 0) return false;
    amp *= std::sqrt(static_cast<double>(n));
    --n;
    return true;
  };
}

Action photon_raise(int mode, int cap) {
  return [mode, cap](BasisState& s, cplx& amp) {
    int& n = s.photons.at(mode);
    if (n >= cap) return false;
    ++n;
    amp *= std::sqrt(static_cast<double>(n));
    return true;
  };
}

Action transition(int atom, int to, int from) {
  return [=](BasisState& s, cplx&) {
    auto& a = s.atoms.at(atom);
    if (a.level != from) return false;
    a.level = to;
    return true;
  };
}

Action move(int atom, int to, int from) {
  return [=](BasisState& s, cplx&) {
    auto& a = s.atoms.at(atom);
    if (a.position != from) return false;
    a.position = to;
    return true;
  };
}

Action at_position(int atom, int pos) {
  return [=](BasisState& s, cplx&) { return s.atoms.at(atom).position == pos; };
}

Action site_lower(int site) {
  return [site](BasisState& s, cplx&) {
    int& n = s.sites.at(site);
    if (n <= 0) return false;
    --n;
    return true;
  };
}

Action site_raise(int site, int cap) {
  return [site, cap](BasisState& s, cplx&) {
    int& n = s.sites.at(site);
    if (n >= cap) return false;
    ++n;
    return true;
  };
}

Action site_transfer(int to, int from, int cap_to) {
  return [=](BasisState& s, cplx&) {
    if (s.sites.at(from) <= 0 || s.sites.at(to) >= cap_to) return false;
    --s.sites[from];
    ++s.sites[to];
    return true;
  };
}

Action when(std::function<bool(const BasisState&)> pred) {
  return [pred = std::move(pred)](BasisState& s, cplx&) { return pred(s); };
}

}  // namespace act

SparseOperator build_term(const StateSpace& space, const std::vector<Action>& factors, cplx coeff) {
  std::vector<Triplet> t;
  const auto& basis = space.basis();
  for (std::size_t j = 0; j < basis.size(); ++j) {
    BasisState s = basis[j];
    cplx amp = coeff;
    bool alive = true;
    for (auto f = factors.rbegin(); f != factors.rend() && alive; ++f) alive = (*f)(s, amp);
    if (!alive) continue;
    if (auto i = space.find(s)) t.emplace_back(*i, j, amp);
  }
  return SparseOperator::from_triplets(space.dimension(), t);
}

SparseOperator diagonal_operator(const StateSpace& space,
                                 const std::function<double(const BasisState&)>& f) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    double v = f(space.state(i));
    if (v != 0.0) t.emplace_back(i, i, v);
  }
  return SparseOperator::from_triplets(space.dimension(), t);
}

SparseOperator projector(const StateSpace& space,
                         const std::function<bool(const BasisState&)>& pred) {
  return diagonal_operator(space, [&](const BasisState& s) { return pred(s) ? 1.0 : 0.0; });
}

SparseOperator photon_op(const StateSpace& space, int mode, LadderKind kind) {
  if (mode < 0 || mode >= static_cast<int>(space.modes().size()))
    throw OperatorError("unknown mode index " + std::to_string(mode));
  if (kind == LadderKind::annihilate) return build_term(space, {act::photon_lower(mode)});
  return build_term(space, {act::photon_raise(mode, space.modes()[mode].max_occupancy)});
}

SparseOperator photon_op(const StateSpace& space, const std::string& mode, LadderKind kind) {
  int m;
  try {
    m = space.mode_index(mode);
  } catch (const NotFound& e) {
    throw OperatorError(e.what());
  }
  return photon_op(space, m, kind);
}

SparseOperator number_op(const StateSpace& space, int mode) {
  return diagonal_operator(space, [mode](const BasisState& s) { return double(s.photons.at(mode)); });
}

SparseOperator atom_sigma(const StateSpace& space, int atom, int upper, int lower, SigmaKind kind) {
  if (atom < 0 || atom >= static_cast<int>(space.atoms().size()))
    throw OperatorError("unknown atom index " + std::to_string(atom));
  int d = space.atoms()[atom].num_levels;
  if (upper < 0 || lower < 0 || upper >= d || lower >= d || upper == lower)
    throw OperatorError("invalid level pair for atom " + space.atoms()[atom].label);
  if (kind == SigmaKind::raise) return build_term(space, {act::transition(atom, upper, lower)});
  return build_term(space, {act::transition(atom, lower, upper)});
}

SparseOperator atom_sigma(const StateSpace& space, const std::string& atom, int upper, int lower,
                          SigmaKind kind) {
  int a;
  try {
    a = space.atom_index(atom);
  } catch (const NotFound& e) {
    throw OperatorError(e.what());
  }
  return atom_sigma(space, a, upper, lower, kind);
}

SparseOperator excitation_number(const StateSpace& space) {
  return diagonal_operator(space, [&](const BasisState& s) { return double(space.excitation(s)); });
}

bool CavityGraph::has_cavity(int c) const {
  return std::find(cavities.begin(), cavities.end(), c) != cavities.end();
}

std::vector<std::pair<int, int>> CavityGraph::edges() const {
  std::set<std::pair<int, int>> e;
  for (const auto& p : photon_edges) e.insert(std::minmax(p.i, p.j));
  for (const auto& b : atom_bridges) e.insert(std::minmax(b.j, b.q));
  return {e.begin(), e.end()};
}

CavityGraph ring_graph(int n) {
  CavityGraph g;
  for (int i = 0; i < n; ++i) g.cavities.push_back(i);
  for (int i = 0; i < n; ++i) {
    g.photon_edges.push_back({i, (i + 1) % n, 1.0});
    g.atom_bridges.push_back({i, (i + 1) % n, {1.0}});
  }
  return g;
}

CavityGraph path_graph(int n) {
  CavityGraph g;
  for (int i = 0; i < n; ++i) g.cavities.push_back(i);
  for (int i = 0; i + 1 < n; ++i) {
    g.photon_edges.push_back({i, i + 1, 1.0});
    g.atom_bridges.push_back({i, i + 1, {1.0}});
  }
  return g;
}

namespace {

double atom_g(const StateSpace& space, const std::vector<double>& g, std::size_t j) {
  if (!g.empty()) return j < g.size() ? g[j] : g.back();
  const auto& c = space.atoms()[j].coupling;
  return c.empty() ? 1.0 : c.front();
}

}  // namespace

SparseOperator collective_lowering(const StateSpace& space, const std::vector<double>& g, int cavity) {
  SparseOperator out(space.dimension());
  for (std::size_t j = 0; j < space.atoms().size(); ++j) {
    if (space.atoms()[j].num_levels != 2) continue;
    std::vector<Action> f{act::transition(static_cast<int>(j), 0, 1)};
    if (cavity >= 0) f.push_back(act::at_position(static_cast<int>(j), cavity));
    out += build_term(space, f, atom_g(space, g, j));
  }
  return out;
}

SparseOperator build_tc(const StateSpace& space, const CavityParams& p, bool rwa) {
  if (p.mode < 0 || p.mode >= static_cast<int>(space.modes().size()))
    throw OperatorError("unknown mode index " + std::to_string(p.mode));
  for (const auto& a : space.atoms())
    if (a.num_levels != 2) throw OperatorError("TC Hamiltonian needs two-level atoms: " + a.label);

  const int cap = space.modes()[p.mode].max_occupancy;
  SparseOperator H = p.omega * number_op(space, p.mode);
  H += diagonal_operator(space, [&](const BasisState& s) {
    double e = 0.0;
    for (const auto& a : s.atoms)
      if (a.position == p.cavity) e += a.level;
    return p.omega * e;
  });

  for (std::size_t j = 0; j < space.atoms().size(); ++j) {
    const int jj = static_cast<int>(j);
    const double g = atom_g(space, p.g, j);
    if (g == 0.0) continue;
    auto here = act::at_position(jj, p.cavity);
    auto lo = act::photon_lower(p.mode);
    auto up = act::photon_raise(p.mode, cap);
    auto sm = act::transition(jj, 0, 1);
    auto sp = act::transition(jj, 1, 0);
    H += build_term(space, {lo, sp, here}, g);
    H += build_term(space, {up, sm, here}, g);
    if (!rwa) {
      H += build_term(space, {lo, sm, here}, g);
      H += build_term(space, {up, sp, here}, g);
    }
  }
  H.require_hermitian(1e-12, "TC Hamiltonian");
  return H;
}

SparseOperator build_tch(const StateSpace& space, const CavityGraph& graph,
                         const std::vector<CavityParams>& cavities, bool rwa) {
  SparseOperator H(space.dimension());
  std::vector<int> mode_of_cavity;
  for (const auto& c : cavities) {
    if (!graph.has_cavity(c.cavity))
      throw OperatorError("cavity " + std::to_string(c.cavity) + " not in graph");
    H += build_tc(space, c, rwa);
  }
  auto mode_for = [&](int cav) {
    for (const auto& c : cavities)
      if (c.cavity == cav) return c.mode;
    throw OperatorError("edge to unknown cavity " + std::to_string(cav));
  };
  for (const auto& e : graph.photon_edges) {
    if (!graph.has_cavity(e.i) || !graph.has_cavity(e.j))
      throw OperatorError("edge to unknown cavity");
    if (e.i == e.j) throw OperatorError("self-loop in cavity graph");
    int mi = mode_for(e.i), mj = mode_for(e.j);
    int ci = space.modes()[mi].max_occupancy, cj = space.modes()[mj].max_occupancy;
    H += build_term(space, {act::photon_raise(mi, ci), act::photon_lower(mj)}, e.mu);
    H += build_term(space, {act::photon_raise(mj, cj), act::photon_lower(mi)}, e.mu);
  }
  H.require_hermitian(1e-12, "TCH Hamiltonian");
  return H;
}

SparseOperator atom_hopping(const StateSpace& space, const CavityGraph& graph) {
  SparseOperator H(space.dimension());
  for (const auto& b : graph.atom_bridges) {
    if (b.j == b.q) throw OperatorError("self-loop bridge");
    if (!graph.has_cavity(b.j) || !graph.has_cavity(b.q))
      throw OperatorError("bridge to unknown cavity");
    for (std::size_t i = 0; i < space.atoms().size(); ++i) {
      const auto& a = space.atoms()[i];
      double r = b.r.empty() ? 1.0 : (i < b.r.size() ? b.r[i] : b.r.back());
      if (r == 0.0) continue;
      auto allowed = [&](int c) {
        return std::find(a.positions.begin(), a.positions.end(), c) != a.positions.end();
      };
      if (!allowed(b.j) || !allowed(b.q))
        throw OperatorError("bridge " + std::to_string(b.j) + "-" + std::to_string(b.q) +
                            " not allowed for atom " + a.label);
      const int ii = static_cast<int>(i);
      H += build_term(space, {act::move(ii, b.j, b.q)}, r);
      H += build_term(space, {act::move(ii, b.q, b.j)}, r);
    }
  }
  H.require_hermitian(1e-12, "atom hopping");
  return H;
}

}  // namespace tchm
