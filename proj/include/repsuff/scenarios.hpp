#pragma once

#include "repsuff/information.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace repsuff {

/// Properties a scenario's designated partition is expected to exhibit.
/// The test suites check every entry mechanically.
struct ExpectedProperties {
  std::vector<Objective> maximizes;
  std::vector<Objective> does_not_maximize;
  std::optional<double> normalized_return;
  std::optional<bool> q_sufficient;
  std::optional<bool> pi_sufficient;
};

struct ScenarioSpec {
  std::string name;
  TabularMDP mdp;
  BlockPartition designated;
  ExpectedProperties expected;
};

/// 4-state, 2-action deterministic MDP whose only rewarding state s2 is
/// reached from s0 and s3 by different actions, while s0 and s3 share the
/// same next-state marginal under the uniform policy. Aliasing {s0,s3} keeps
/// the state-only transition objective maximal but loses the optimal policy.
ScenarioSpec jstate_counterexample();

/// 6-state, 2-action deterministic MDP where s0 and s1 need different
/// actions to reach their rewarding leaves, yet the actions stay perfectly
/// identifiable when {s0,s1} are aliased, so the inverse objective (and its
/// reward-augmented variant, since r(s0) = r(s1)) is still maximized.
ScenarioSpec jinv_counterexample();

/// Augments the base state with an independent fair coin resampled every
/// step. The coin-merging partition is a nontrivial maximizer of the forward
/// objective and remains Q*-sufficient.
ScenarioSpec noise_mdp(const ScenarioSpec& base);

std::vector<std::string> scenario_names();
ScenarioSpec scenario_by_name(const std::string& name);

/// Seeded random MDP: transition rows drawn uniformly from the probability
/// simplex (spacings of sorted SplitMix64 uniforms, so results are identical
/// across platforms), rewards uniform on [0,1), discount 0.9.
TabularMDP random_mdp(std::uint64_t seed, int n_states, int n_actions);
VectorXd random_reward(std::uint64_t seed, int n_states);

}  // namespace repsuff
