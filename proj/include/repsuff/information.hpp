#pragma once

#include "repsuff/mdp.hpp"
#include "repsuff/representation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace repsuff {

struct Axis {
  std::string name;
  int size = 0;
};

/// Dense joint probability table over named finite variables. The
/// computational substrate for all exact information quantities here;
/// alphabets are tiny, so no sparse machinery.
class JointTable {
 public:
  explicit JointTable(std::vector<Axis> axes);

  const std::vector<Axis>& axes() const { return axes_; }
  int axis(const std::string& name) const;  // throws std::invalid_argument
  bool has_axis(const std::string& name) const;
  long long size() const { return probs_.size(); }

  double& at(const std::vector<int>& index) { return probs_[flat_index(index)]; }
  double at(const std::vector<int>& index) const { return probs_[flat_index(index)]; }
  VectorXd& data() { return probs_; }
  const VectorXd& data() const { return probs_; }

  double mass() const { return probs_.sum(); }

  /// Sums out every axis not named in keep. Axis order of the result follows
  /// this table's order, not the request order.
  JointTable marginal(const std::vector<std::string>& keep) const;

  long long flat_index(const std::vector<int>& index) const;

 private:
  std::vector<Axis> axes_;
  std::vector<long long> strides_;
  VectorXd probs_;
};

/// Shannon entropy in bits of vars conditioned on given, with 0 log 0 = 0.
/// Overlapping vars/given are allowed (H(X|X) = 0).
double entropy(const JointTable& joint, const std::vector<std::string>& vars,
               const std::vector<std::string>& given = {});

/// I(x; y | given) = H(x | given) - H(x | y, given), in bits, clamped to 0
/// when within -1e-12 of zero. x, y, given must be disjoint.
double mutual_information(const JointTable& joint, const std::vector<std::string>& x,
                          const std::vector<std::string>& y,
                          const std::vector<std::string>& given = {});

inline constexpr const char* kAxisStateNow = "S_t";
inline constexpr const char* kAxisSymbolNow = "Z_t";
inline constexpr const char* kAxisAction = "A_t";
inline constexpr const char* kAxisReward = "R_t";
inline constexpr const char* kAxisSymbolNext = "Z_t+k";

enum class Objective {
  Forward,            // I(Z_{t+1}; Z_t, A_t), k forced to 1
  StateOnly,          // I(Z_{t+k}; Z_t)
  Inverse,            // I(A_t; Z_{t+k} | Z_t)
  InversePlusReward,  // inverse + I(R_t; Z_t)
  SymbolStateInfo,    // I(Z_t; S_t)
};
constexpr int kNumObjectives = 5;

std::string objective_name(Objective objective);
std::optional<Objective> parse_objective(const std::string& name);

/// p_k(s_{t+k} | s_t, a_t) per action: the first action is held fixed and
/// intermediate actions are marginalized under the policy, so
/// p_1 = T and p_k = T (P_pi)^(k-1).
std::vector<MatrixXd> k_step_kernel(const TabularMDP& mdp, const Policy& policy, int k);

/// Assembles exact joints of the form
///   mu(s_t) pi(a|s_t) p_k(s_{t+k}|s_t,a) phi(z_t|s_t) phi(z_{t+k}|s_{t+k})
/// with R_t the deterministic reward of s_t, marginalized to the requested
/// axes. Symbols at t and t+k are drawn independently given their states.
/// Precomputes the occupancy and k-step kernel once so many representations
/// can be evaluated against the same MDP cheaply.
class JointBuilder {
 public:
  JointBuilder(const TabularMDP& mdp, const Policy& policy, int k);
  JointBuilder(const TabularMDP& mdp, const Policy& policy, int k, Occupancy occupancy);

  JointTable build(const Representation& rep,
                   const std::vector<std::string>& include) const;

  const Occupancy& occupancy() const { return occupancy_; }
  int k() const { return k_; }

 private:
  TabularMDP mdp_;
  Policy policy_;
  int k_;
  Occupancy occupancy_;
  std::vector<MatrixXd> kernel_;
  std::vector<int> reward_symbol_;  // state -> index into reward_alphabet_
  std::vector<double> reward_alphabet_;
};

JointTable build_joint(const TabularMDP& mdp, const Policy& policy,
                       const Representation& rep, int k,
                       const std::vector<std::string>& include);

struct ObjectiveValue {
  Objective tag;
  int k = 1;
  double bits = 0.0;
};

ObjectiveValue objective_value(const TabularMDP& mdp, const Policy& policy,
                               const Representation& rep, Objective objective,
                               int k = 1);

struct ObjectiveValues {
  double forward = 0.0;
  double state_only = 0.0;
  double inverse = 0.0;
  double inverse_plus_reward = 0.0;
  double symbol_state_info = 0.0;
  double get(Objective objective) const;
};

/// All five values for one representation. step1 must be a k=1 builder (the
/// forward objective is defined at k=1); stepk carries the sweep's k.
ObjectiveValues all_objective_values(const JointBuilder& step1, const JointBuilder& stepk,
                                     const Representation& rep);

}  // namespace repsuff
