#include "tchm/statespace.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace tchm {

namespace {

constexpr std::size_t kMaxProduct = 50'000'000;

template <class T>
void check_unique(const std::vector<T>& items, const char* what) {
  std::set<std::string> seen;
  for (const auto& it : items) {
    if (!seen.insert(it.label).second)
      throw SpaceError(std::string("duplicate ") + what + " label: " + it.label);
  }
}

}  // namespace

std::string to_string(const BasisState& s) {
  std::ostringstream os;
  os << "ph[";
  for (std::size_t i = 0; i < s.photons.size(); ++i) os << (i ? "," : "") << s.photons[i];
  os << "] at[";
  for (std::size_t i = 0; i < s.atoms.size(); ++i)
    os << (i ? "," : "") << s.atoms[i].level << "@" << s.atoms[i].position;
  os << "] el[";
  for (std::size_t i = 0; i < s.sites.size(); ++i) os << (i ? "," : "") << s.sites[i];
  os << "]";
  return os.str();
}

StateSpace::StateSpace(SpaceSpec spec) : spec_(std::move(spec)) {
  if (spec_.modes.empty() && spec_.atoms.empty() && spec_.sites.empty())
    throw SpaceError("no subsystem declared");
  check_unique(spec_.modes, "mode");
  check_unique(spec_.atoms, "atom");
  check_unique(spec_.sites, "site");
  for (const auto& m : spec_.modes)
    if (m.max_occupancy < 0) throw SpaceError("negative photon cap on mode " + m.label);
  for (auto& a : spec_.atoms) {
    if (a.num_levels < 2) throw SpaceError("atom " + a.label + " needs at least 2 levels");
    if (a.positions.empty()) throw SpaceError("atom " + a.label + " has no allowed position");
    std::sort(a.positions.begin(), a.positions.end());
    a.positions.erase(std::unique(a.positions.begin(), a.positions.end()), a.positions.end());
  }
  for (const auto& s : spec_.sites)
    if (s.capacity < 0) throw SpaceError("negative capacity on site " + s.label);

  // Registers in canonical order; the last one varies fastest.
  std::vector<std::vector<int>> values;
  for (const auto& m : spec_.modes) {
    std::vector<int> v(m.max_occupancy + 1);
    for (int k = 0; k <= m.max_occupancy; ++k) v[k] = k;
    values.push_back(v);
  }
  for (const auto& a : spec_.atoms) {
    std::vector<int> lv(a.num_levels);
    for (int k = 0; k < a.num_levels; ++k) lv[k] = k;
    values.push_back(lv);
    values.push_back(a.positions);
  }
  for (const auto& s : spec_.sites) {
    std::vector<int> v(s.capacity + 1);
    for (int k = 0; k <= s.capacity; ++k) v[k] = k;
    values.push_back(v);
  }

  std::size_t total = 1;
  for (const auto& v : values) {
    total *= v.size();
    if (total > kMaxProduct) throw SpaceError("configuration product too large");
  }

  const std::size_t nm = spec_.modes.size(), na = spec_.atoms.size(), ns = spec_.sites.size();
  std::vector<std::size_t> digit(values.size(), 0);
  BasisState s;
  s.photons.resize(nm);
  s.atoms.resize(na);
  s.sites.resize(ns);
  for (std::size_t count = 0; count < total; ++count) {
    std::size_t r = 0;
    for (std::size_t i = 0; i < nm; ++i) s.photons[i] = values[r++][digit[i]];
    for (std::size_t i = 0; i < na; ++i) {
      s.atoms[i].level = values[r][digit[r]];
      ++r;
      s.atoms[i].position = values[r][digit[r]];
      ++r;
    }
    for (std::size_t i = 0; i < ns; ++i, ++r) s.sites[i] = values[r][digit[r]];

    bool ok = true;
    for (const auto& c : spec_.constraints)
      if (!c(s)) {
        ok = false;
        break;
      }
    if (ok) basis_.push_back(s);

    for (std::size_t k = values.size(); k-- > 0;) {
      if (++digit[k] < values[k].size()) break;
      digit[k] = 0;
    }
  }
  if (basis_.empty()) throw SpaceError("constraints leave an empty basis");
}

bool StateSpace::compatible(const BasisState& s) const {
  return s.photons.size() == spec_.modes.size() && s.atoms.size() == spec_.atoms.size() &&
         s.sites.size() == spec_.sites.size();
}

bool StateSpace::admits(const BasisState& s) const {
  if (!compatible(s)) return false;
  for (std::size_t i = 0; i < s.photons.size(); ++i)
    if (s.photons[i] < 0 || s.photons[i] > spec_.modes[i].max_occupancy) return false;
  for (std::size_t i = 0; i < s.atoms.size(); ++i) {
    const auto& a = spec_.atoms[i];
    if (s.atoms[i].level < 0 || s.atoms[i].level >= a.num_levels) return false;
    if (!std::binary_search(a.positions.begin(), a.positions.end(), s.atoms[i].position))
      return false;
  }
  for (std::size_t i = 0; i < s.sites.size(); ++i)
    if (s.sites[i] < 0 || s.sites[i] > spec_.sites[i].capacity) return false;
  for (const auto& c : spec_.constraints)
    if (!c(s)) return false;
  return true;
}

std::optional<std::size_t> StateSpace::find(const BasisState& s) const {
  auto it = std::lower_bound(basis_.begin(), basis_.end(), s);
  if (it == basis_.end() || *it != s) return std::nullopt;
  return static_cast<std::size_t>(it - basis_.begin());
}

std::size_t StateSpace::index_of(const BasisState& s) const {
  if (!compatible(s)) throw NotFound("state has the wrong register layout: " + to_string(s));
  auto i = find(s);
  if (!i) throw NotFound("state not in basis: " + to_string(s));
  return *i;
}

int StateSpace::excitation(const BasisState& s) const {
  if (spec_.excitation) return spec_.excitation(s);
  int n = 0;
  for (int p : s.photons) n += p;
  for (const auto& a : s.atoms) n += a.level;
  return n;
}

std::vector<std::size_t> StateSpace::excitation_sector(int n) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < basis_.size(); ++i)
    if (excitation(basis_[i]) == n) out.push_back(i);
  return out;
}

namespace {
template <class T>
int find_label(const std::vector<T>& v, const std::string& label, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i].label == label) return static_cast<int>(i);
  throw NotFound(std::string("unknown ") + what + ": " + label);
}
}  // namespace

int StateSpace::mode_index(const std::string& label) const {
  return find_label(spec_.modes, label, "mode");
}
int StateSpace::atom_index(const std::string& label) const {
  return find_label(spec_.atoms, label, "atom");
}
int StateSpace::site_index(const std::string& label) const {
  return find_label(spec_.sites, label, "site");
}

StateSpace build_space(std::vector<ModeSpec> modes, std::vector<AtomSpec> atoms,
                       std::vector<SiteSpec> sites, std::vector<Constraint> constraints,
                       Grading excitation) {
  SpaceSpec spec;
  spec.modes = std::move(modes);
  spec.atoms = std::move(atoms);
  spec.sites = std::move(sites);
  spec.constraints = std::move(constraints);
  spec.excitation = std::move(excitation);
  return StateSpace(std::move(spec));
}

std::size_t index_of(const StateSpace& space, const BasisState& s) { return space.index_of(s); }

std::vector<std::size_t> excitation_sector(const StateSpace& space, int n) {
  return space.excitation_sector(n);
}

}  // namespace tchm
