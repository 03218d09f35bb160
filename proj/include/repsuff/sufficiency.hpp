#pragma once

#include "repsuff/information.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace repsuff {

enum class WitnessKind { QValueMismatch, DisjointArgmax };

struct Witness {
  WitnessKind kind;
  int s1 = -1;
  int s2 = -1;
  int action = -1;    // Q witnesses only
  double delta = 0.0; // max |Q(s1,a) - Q(s2,a)| for Q witnesses
  std::string detail;
};

struct SufficiencyVerdict {
  bool pi_sufficient = true;
  bool q_sufficient = true;
  std::vector<Witness> witnesses;
};

/// Q*-sufficiency: every aliased pair has equal Q* rows within tol.
SufficiencyVerdict check_q_sufficiency(const TabularMDP& mdp, const Representation& rep,
                                       double tol = 1e-9, double alias_tol = 1e-9);

/// pi*-sufficiency: for every aliased pair the greedy argmax sets intersect,
/// i.e. some optimal policy assigns both states a common action choice.
SufficiencyVerdict check_pi_sufficiency(const TabularMDP& mdp, const Representation& rep,
                                        double tie_tol = 1e-9, double alias_tol = 1e-9);

/// Both checks against one value-iteration solve.
SufficiencyVerdict check_sufficiency(const TabularMDP& mdp, const Representation& rep,
                                     double q_tol = 1e-9, double tie_tol = 1e-9,
                                     double alias_tol = 1e-9);
SufficiencyVerdict check_sufficiency(const TabularMDP& mdp, const Representation& rep,
                                     const QTable& q, double q_tol, double tie_tol,
                                     double alias_tol);

struct MaximizerSet {
  std::vector<long long> ids;
  std::vector<BlockPartition> partitions;
  double max_bits = 0.0;
  std::vector<double> bits;  // value per member
  bool contains(const BlockPartition& partition) const;
};

/// Evaluates the objective over every block partition of the state set and
/// returns all partitions within eps bits of the maximum. Ties are first
/// class; the identity partition always attains the maximum for Forward,
/// StateOnly and SymbolStateInfo.
MaximizerSet maximizer_set(const TabularMDP& mdp, const Policy& policy,
                           Objective objective, int k = 1, double eps = 1e-9);

/// Return of the lifted greedy policy, normalized by the optimal return.
/// Both returns are measured from the step after the start state (the
/// immediate start reward is policy-independent), which makes the ratio
/// invariant to the discount and to the start distribution for block-
/// structured ties.
struct NormalizedReturn {
  double lifted_return = 0.0;          // full discounted return of the lifted policy
  double optimal_return = 0.0;         // full discounted optimal return
  double immediate_start_reward = 0.0; // start-weighted r(s), shared by all policies
  std::optional<double> normalized;    // empty when the optimal continuation is ~0
  bool degenerate() const { return !normalized.has_value(); }
};

/// Aggregates the MDP under the partition, solves the aggregate by value
/// iteration, extracts a greedy symbol policy (ties realized as the uniform
/// mixture so evaluation is deterministic), lifts it to states and evaluates.
NormalizedReturn aliased_policy_return(const TabularMDP& mdp, const BlockPartition& partition,
                                       const Policy& policy, const Occupancy& start,
                                       double tie_tol = 1e-9, double tol = kDefaultTol);

struct TrajectoryGuardError : std::runtime_error {
  TrajectoryGuardError(const std::string& what, long long count_)
      : std::runtime_error(what), count(count_) {}
  long long count;
};

/// Exact distribution of the H-step discounted return
/// sum_{i=1..H} gamma^i r(s_{t+i}) from (s, a), by enumerating trajectories
/// under T and pi. Support values within 1e-12 are merged.
struct ReturnDistribution {
  VectorXd support;
  VectorXd probs;
  int horizon = 0;
  double discount = 0.0;
};

ReturnDistribution return_distribution(const TabularMDP& mdp, const Policy& policy,
                                       int state, int action, int horizon);

/// Checks E_{p(z|s)} p(Rbar | z, a) = p(Rbar | s, a) at finite horizon:
/// p(Rbar|z,a) is mixed with the stationary posterior p(s|z) and compared in
/// total variation against p(Rbar|s,a) for every (s,a) with phi(z|s) > 0.
struct ReturnIdentityDeviation {
  int symbol = -1;
  int state = -1;
  int action = -1;
  double tv = 0.0;
};

struct ReturnIdentityReport {
  bool pass = true;
  double max_deviation = 0.0;
  double tol = 0.0;
  std::vector<ReturnIdentityDeviation> deviations;
};

ReturnIdentityReport check_return_identity(const TabularMDP& mdp, const Representation& rep,
                                           const Policy& policy, int horizon = 4,
                                           double tol = 1e-9);

/// Per-partition record produced by a sweep.
struct ObjectiveReport {
  long long partition_id = -1;
  BlockPartition partition;
  ObjectiveValues values;
  NormalizedReturn ret;
  SufficiencyVerdict verdict;
  std::array<bool, kNumObjectives> in_maximizer_set{};
  bool maximizes(Objective objective) const {
    return in_maximizer_set[static_cast<int>(objective)];
  }
};

struct SweepConfig {
  int k = 1;
  double eps = 1e-9;       // maximizer tie width, bits
  double q_tol = 1e-9;     // Q-row equality for sufficiency
  double tie_tol = 1e-9;   // greedy argmax ties
  double solve_tol = kDefaultTol;
  double alias_tol = 1e-9;
  int threads = 1;
};

/// Full report for every partition, in enumeration (id) order. Partitions are
/// evaluated independently, so results do not depend on thread count.
std::vector<ObjectiveReport> run_sweep(const TabularMDP& mdp, const Policy& policy,
                                       const Occupancy& start, const SweepConfig& config = {});

struct ObjectiveSufficiencyResult {
  bool sufficient = true;  // false iff ANY maximizer fails Q*-sufficiency
  std::vector<ObjectiveReport> maximizers;
};

ObjectiveSufficiencyResult objective_sufficiency(const TabularMDP& mdp, const Policy& policy,
                                                 Objective objective, int k = 1,
                                                 double eps = 1e-9, double q_tol = 1e-9);

}  // namespace repsuff
