#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace repsuff {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kDefaultGamma = 0.9;
constexpr double kDefaultTol = 1e-10;
constexpr double kStochasticRowTol = 1e-12;
constexpr int kDefaultMaxIters = 200000;

/// Finite MDP with a state-dependent reward r(s) and discount in [0, 1).
/// transitions[a] is the |S| x |S| row-stochastic matrix with entry
/// (s, s') = T(s' | s, a).
struct TabularMDP {
  std::vector<std::string> state_names;
  std::vector<std::string> action_names;
  std::vector<MatrixXd> transitions;
  VectorXd rewards;
  double discount = kDefaultGamma;

  int num_states() const { return static_cast<int>(state_names.size()); }
  int num_actions() const { return static_cast<int>(action_names.size()); }
  int state_index(const std::string& name) const;   // -1 if unknown
  int action_index(const std::string& name) const;  // -1 if unknown
};

/// Row-stochastic |S| x |A| table pi(a | s).
struct Policy {
  MatrixXd probs;
  bool full_support() const { return probs.size() > 0 && probs.minCoeff() > 0.0; }
};

/// Distribution over states.
struct Occupancy {
  VectorXd probs;
};

struct QTable {
  MatrixXd values;  // |S| x |A|
  double bellman_residual = 0.0;
};

struct Violation {
  std::string message;
  int state = -1;
  int action = -1;
};

struct ValidationResult {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& what, double residual_)
      : std::runtime_error(what), residual(residual_) {}
  double residual;
};

/// Structural validation: row-stochastic transitions, one reward per state,
/// discount in [0, 1). Returns all violations, each naming the offending
/// state/action index.
ValidationResult validate_mdp(const TabularMDP& mdp);

Policy uniform_policy(const TabularMDP& mdp);
Occupancy uniform_occupancy(int n_states);

/// P_pi(s, s') = sum_a pi(a|s) T(s'|s,a).
MatrixXd policy_transition_matrix(const TabularMDP& mdp, const Policy& policy);

/// Long-run (Cesaro) state occupancy of the chain induced by a full-support
/// policy. Power iteration on averages of consecutive iterates: the pair
/// window cancels the rotating component of periodic chains, so the averaged
/// sequence converges for any finite unichain. Stops once successive averages
/// differ by less than tol in max norm.
Occupancy stationary_occupancy(const TabularMDP& mdp, const Policy& policy,
                               const Occupancy& init, double tol = kDefaultTol,
                               int max_iters = kDefaultMaxIters);
Occupancy stationary_occupancy(const TabularMDP& mdp, const Policy& policy);

/// Optimal Q by value iteration: Q(s,a) = r(s) + gamma sum_s' T(s'|s,a) max_a' Q(s',a').
/// Iterates until the max-norm Bellman residual is below tol; the returned
/// table records the measured residual.
QTable q_star(const TabularMDP& mdp, double tol = kDefaultTol);

/// Per-state set of optimal actions: {a : Q(s,a) >= max_a' Q(s,a') - tie_tol}.
std::vector<std::vector<int>> greedy_policy_sets(const QTable& q, double tie_tol = 1e-9);

/// Exact policy evaluation, V = r + gamma P_pi V, solved to residual < tol.
VectorXd evaluate_policy(const TabularMDP& mdp, const Policy& policy,
                         double tol = kDefaultTol);

/// Expected discounted return of the policy from the start distribution.
double policy_return(const TabularMDP& mdp, const Policy& policy,
                     const Occupancy& start, double tol = kDefaultTol);

VectorXd optimal_values(const QTable& q);

}  // namespace repsuff
