// Turnkey model instances with their parameters, channels, initial states and observables.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tchm/dynamics.hpp"
#include "tchm/observables.hpp"
#include "tchm/operators.hpp"
#include "tchm/statespace.hpp"

namespace tchm {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParamInfo {
  std::string name;
  double value;
  std::string help;
};

struct OptionInfo {
  std::string name;
  std::string value;
  std::vector<std::string> choices;
};

struct ScenarioInfo {
  std::string id;
  std::string summary;
  std::vector<ParamInfo> params;
  std::vector<OptionInfo> options;
  double t_max = 1.0;
  std::size_t samples = 200;
};

const std::vector<ScenarioInfo>& scenario_catalog();
const ScenarioInfo& scenario_info(const std::string& id);

// A superposition term of an initial-state literal: amplitude and flattened register tuple
// (photons, then level/position per atom, then electron sites).
struct StateTerm {
  cplx amplitude;
  std::vector<int> registers;
};

struct ScenarioConfig {
  std::string id;
  std::map<std::string, double> params;
  std::map<std::string, std::string> options;
  std::optional<double> t_max;
  std::optional<double> dt;
  std::optional<std::size_t> samples;
  std::vector<StateTerm> initial;
};

struct NamedState {
  std::string name;
  StateVector vector;
};

struct Model {
  std::string id;
  StateSpace space;
  SparseOperator H;
  std::vector<LindbladChannel> channels;
  DensityMatrix rho0;
  std::vector<Observable> observables;
  std::vector<NamedState> dark_states;
  double t_max = 1.0;
  double dt = 0.0;
  std::size_t samples = 200;
  std::map<std::string, double> params;
  std::map<std::string, std::string> options;
};

struct Check {
  std::string name;
  double value;
  double threshold;
  bool upper;  // pass iff value <= threshold (else >=)
  bool pass() const { return upper ? value <= threshold : value >= threshold; }
};

struct RunResult {
  std::string id;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<Check> checks;
  std::map<std::string, double> params;
  std::map<std::string, std::string> options;
  bool all_pass() const;
  std::vector<double> column(const std::string& name) const;
};

// Helpers shared by the builders.
BasisState unflatten(const StateSpace& space, const std::vector<int>& regs);
StateVector literal_state(const StateSpace& space, const std::vector<StateTerm>& terms);
StateVector basis_vector(const StateSpace& space, const BasisState& s);

Model scenario_electron_explicit(const ScenarioConfig& cfg = {});
Model scenario_optical_interpretation(const ScenarioConfig& cfg = {});

enum class AssocKind { association, dissociation };
SparseOperator assoc_dissoc_hamiltonian(const StateSpace& space, double g, double omega,
                                        double omega_e, double tun);
StateSpace assoc_dissoc_space();
Model scenario_assoc_dissoc(AssocKind kind, const ScenarioConfig& cfg = {});

Model scenario_bottleneck(double gamma_out, double gamma_ex, const ScenarioConfig& cfg = {});
struct SweepPoint {
  double ratio;
  double probability;
};
std::vector<SweepPoint> bottleneck_sweep(double ratio_max, std::size_t points, double gamma_ex = 1.0,
                                         double g = 1.0, double t_max = 60.0);

Model scenario_lambda(const ScenarioConfig& cfg = {});

// Two-spin hybrid model. Both spins see identical, independent dynamics, so the density matrix
// factorizes over the matrix units of the initial superposition.
enum class Experiment { I, II };
struct HybridSpinModel {
  StateSpace space;  // one spin: modes (W, w), sites o1@1, o2@1, o1@2, o2@2
  SparseOperator H;
  std::vector<LindbladChannel> channels;
  std::vector<cplx> alpha;            // amplitudes of the initial superposition
  std::vector<StateVector> spin_terms;  // per-term single-spin state, shared by both spins
  double t_max = 1e-5;
  std::size_t samples = 200;
  double dt = 0.0;
  std::map<std::string, double> params;
};
HybridSpinModel scenario_hybrid(Experiment e, const ScenarioConfig& cfg = {});
// The same model on the full two-spin space, for cross-checks on short windows.
Model hybrid_full_model(Experiment e, const ScenarioConfig& cfg = {});
RunResult run_hybrid(const HybridSpinModel& m, double t_max, std::size_t samples, double dt);

RunResult run_model(const Model& m);
RunResult run_scenario(const ScenarioConfig& cfg);

// Applies config overrides and rejects unknown names.
double param(const ScenarioConfig& cfg, const std::string& name);
std::string option(const ScenarioConfig& cfg, const std::string& name);

}  // namespace tchm
