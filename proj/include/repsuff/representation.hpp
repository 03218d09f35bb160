#pragma once

#include "repsuff/mdp.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace repsuff {

/// Bell(13) ~ 2.8e7 partitions; anything larger is refused.
constexpr int kMaxEnumerationStates = 13;

/// Row-stochastic |S| x |Z| table phi(z | s). Deterministic block partitions
/// are the one-hot special case.
struct Representation {
  MatrixXd probs;
  int num_states() const { return static_cast<int>(probs.rows()); }
  int num_symbols() const { return static_cast<int>(probs.cols()); }
};

/// Partition of {0..n-1} into disjoint blocks, kept in canonical form:
/// blocks ordered by smallest member, members ascending.
struct BlockPartition {
  std::vector<std::vector<int>> blocks;
  std::vector<int> block_of;
  int num_states() const { return static_cast<int>(block_of.size()); }
  int num_blocks() const { return static_cast<int>(blocks.size()); }
  bool operator==(const BlockPartition&) const = default;
};

struct EnumerationGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Canonicalizes an arbitrary block assignment (first-appearance relabeling).
BlockPartition partition_from_block_of(const std::vector<int>& block_of);
BlockPartition identity_partition(int n_states);
BlockPartition single_block_partition(int n_states);

/// Streams every set partition of {0..n-1} exactly once, in restricted
/// growth string lexicographic order. Ids are positions in this order and
/// are stable across runs.
class PartitionEnumerator {
 public:
  explicit PartitionEnumerator(int n_states);
  std::optional<BlockPartition> next();
  long long current_id() const { return id_; }

 private:
  int n_;
  std::vector<int> rgs_;
  bool first_ = true;
  bool done_ = false;
  long long id_ = -1;
};

std::vector<BlockPartition> enumerate_partitions(int n_states);

/// Exact Bell number via the Bell triangle (n <= 25 fits in 64 bits).
unsigned long long bell_number(int n);
double bell_number_estimate(int n);

Representation partition_to_representation(const BlockPartition& partition);
ValidationResult validate_representation(const Representation& rep);

/// True iff the representation assigns the same distribution over symbols to
/// both states (max-norm distance below tol).
bool aliases(const Representation& rep, int s1, int s2, double tol = 1e-9);
std::vector<std::pair<int, int>> aliased_pairs(const Representation& rep,
                                               double tol = 1e-9);

/// MDP induced on the representation alphabet by occupancy-weighted
/// averaging. state_given_symbol is the Bayes posterior p(s | z) of the
/// construction occupancy, kept for auditability.
struct AggregateMDP {
  TabularMDP mdp;
  MatrixXd state_given_symbol;  // |Z| x |S|
  Occupancy construction_occupancy;
};

/// Weighting uses the stationary occupancy of the (full-support) policy:
/// p(s|z) prop. mu(s) phi(z|s), Tbar(z'|z,a) = sum_s p(s|z) sum_s' T(s'|s,a) phi(z'|s'),
/// rbar(z) = sum_s p(s|z) r(s). Throws if a symbol has zero posterior mass.
AggregateMDP aggregate_mdp(const TabularMDP& mdp, const Representation& rep,
                           const Policy& policy);
AggregateMDP aggregate_with_occupancy(const TabularMDP& mdp, const Representation& rep,
                                      const Occupancy& occupancy);

/// pi(a|s) = sum_z phi(z|s) z_policy(a|z). Aliased states receive identical rows.
Policy lift_policy(const Representation& rep, const Policy& z_policy);

/// Block literal syntax: `{s0,s3|s1|s2}` -- blocks separated by `|`, members
/// by `,`, using state names. Output is canonical.
std::string partition_literal(const BlockPartition& partition,
                              const std::vector<std::string>& state_names);
BlockPartition parse_partition_literal(const std::string& text,
                                       const std::vector<std::string>& state_names);

}  // namespace repsuff
