// Composite basis: photons (x) atoms (level, position) (x) electron sites.
#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tchm {

struct ModeSpec {
  std::string label;
  double frequency = 0.0;  // angular, hbar = 1
  int max_occupancy = 1;
};

struct AtomSpec {
  std::string label;
  int num_levels = 2;
  std::vector<int> positions{0};  // cavity ids
  std::vector<double> coupling{1.0};
};

// An electron site (orbit or transport level) holding up to `capacity` electrons.
struct SiteSpec {
  std::string label;
  int capacity = 1;
};

struct AtomConfig {
  int level = 0;
  int position = 0;
  auto operator<=>(const AtomConfig&) const = default;
};

struct BasisState {
  std::vector<int> photons;
  std::vector<AtomConfig> atoms;
  std::vector<int> sites;
  auto operator<=>(const BasisState&) const = default;
};

std::string to_string(const BasisState& s);

using Constraint = std::function<bool(const BasisState&)>;
using Grading = std::function<int(const BasisState&)>;

struct SpaceSpec {
  std::vector<ModeSpec> modes;
  std::vector<AtomSpec> atoms;
  std::vector<SiteSpec> sites;
  std::vector<Constraint> constraints;
  // Total excitation number. Default: photons plus atomic level indices.
  Grading excitation;
};

class SpaceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFound : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class StateSpace {
 public:
  StateSpace() = default;
  explicit StateSpace(SpaceSpec spec);

  std::size_t dimension() const { return basis_.size(); }
  const std::vector<BasisState>& basis() const { return basis_; }
  const BasisState& state(std::size_t i) const { return basis_.at(i); }

  std::optional<std::size_t> find(const BasisState& s) const;
  std::size_t index_of(const BasisState& s) const;

  int excitation(const BasisState& s) const;
  int excitation(std::size_t i) const { return excitation(basis_.at(i)); }
  std::vector<std::size_t> excitation_sector(int n) const;

  const std::vector<ModeSpec>& modes() const { return spec_.modes; }
  const std::vector<AtomSpec>& atoms() const { return spec_.atoms; }
  const std::vector<SiteSpec>& sites() const { return spec_.sites; }

  int mode_index(const std::string& label) const;
  int atom_index(const std::string& label) const;
  int site_index(const std::string& label) const;

  // Structural membership: caps, level ranges, allowed positions, constraints.
  bool admits(const BasisState& s) const;
  bool compatible(const BasisState& s) const;

 private:
  SpaceSpec spec_;
  std::vector<BasisState> basis_;
};

StateSpace build_space(std::vector<ModeSpec> modes, std::vector<AtomSpec> atoms,
                       std::vector<SiteSpec> sites = {},
                       std::vector<Constraint> constraints = {},
                       Grading excitation = {});

std::size_t index_of(const StateSpace& space, const BasisState& s);
std::vector<std::size_t> excitation_sector(const StateSpace& space, int n);

}  // namespace tchm
