#include "repsuff/scenarios.hpp"

#include <algorithm>
#include <cmath>

namespace repsuff {

namespace {

// SplitMix64: fixed generator so seeded results reproduce across platforms.
struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Uniform draw from the probability simplex: spacings of sorted uniforms.
// Pure arithmetic and sorting, so the result is bit-identical everywhere.
VectorXd simplex_row(SplitMix64& rng, int n) {
  if (n == 1) return VectorXd::Ones(1);
  std::vector<double> cuts(n - 1);
  for (double& c : cuts) c = rng.next_unit();
  std::sort(cuts.begin(), cuts.end());
  VectorXd row(n);
  double prev = 0.0;
  for (int i = 0; i < n - 1; ++i) {
    row[i] = cuts[i] - prev;
    prev = cuts[i];
  }
  row[n - 1] = 1.0 - prev;
  return row;
}

std::vector<std::string> default_names(const char* prefix, int n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (int i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
  return names;
}

MatrixXd deterministic_rows(int n, const std::vector<int>& targets) {
  MatrixXd m = MatrixXd::Zero(n, n);
  for (int s = 0; s < n; ++s) m(s, targets[s]) = 1.0;
  return m;
}

}  // namespace

ScenarioSpec jstate_counterexample() {
  ScenarioSpec scenario;
  scenario.name = "jstate";
  TabularMDP& mdp = scenario.mdp;
  mdp.state_names = default_names("s", 4);
  mdp.action_names = default_names("a", 2);
  // s0: a0->s1, a1->s2; s1: a0->s0, a1->s3; s2: a0->s0, a1->s3; s3: a0->s2, a1->s1.
  mdp.transitions = {deterministic_rows(4, {1, 0, 0, 2}),
                     deterministic_rows(4, {2, 3, 3, 1})};
  mdp.rewards = VectorXd::Zero(4);
  mdp.rewards[2] = 1.0;
  mdp.discount = kDefaultGamma;

  scenario.designated = partition_from_block_of({0, 1, 2, 0});  // {s0,s3 | s1 | s2}
  scenario.expected.maximizes = {Objective::StateOnly};
  scenario.expected.does_not_maximize = {Objective::Forward};
  scenario.expected.normalized_return = 0.5;
  scenario.expected.q_sufficient = false;
  scenario.expected.pi_sufficient = false;
  return scenario;
}

ScenarioSpec jinv_counterexample() {
  ScenarioSpec scenario;
  scenario.name = "jinv";
  TabularMDP& mdp = scenario.mdp;
  mdp.state_names = default_names("s", 6);
  mdp.action_names = default_names("a", 2);
  // s0: a0->s2, a1->s3; s1: a0->s4, a1->s5; every leaf returns to {s0,s1}
  // uniformly under both actions, which keeps the chain ergodic.
  MatrixXd a0 = MatrixXd::Zero(6, 6);
  MatrixXd a1 = MatrixXd::Zero(6, 6);
  a0(0, 2) = 1.0;
  a1(0, 3) = 1.0;
  a0(1, 4) = 1.0;
  a1(1, 5) = 1.0;
  for (int leaf = 2; leaf <= 5; ++leaf) {
    a0(leaf, 0) = a0(leaf, 1) = 0.5;
    a1(leaf, 0) = a1(leaf, 1) = 0.5;
  }
  mdp.transitions = {std::move(a0), std::move(a1)};
  mdp.rewards = VectorXd::Zero(6);
  mdp.rewards[2] = 1.0;
  mdp.rewards[5] = 1.0;
  mdp.discount = kDefaultGamma;

  scenario.designated = partition_from_block_of({0, 0, 1, 2, 3, 4});  // {s0,s1 | ...}
  scenario.expected.maximizes = {Objective::Inverse, Objective::InversePlusReward};
  scenario.expected.normalized_return = 0.5;
  scenario.expected.q_sufficient = false;
  scenario.expected.pi_sufficient = false;
  return scenario;
}

ScenarioSpec noise_mdp(const ScenarioSpec& base) {
  ScenarioSpec scenario;
  scenario.name = base.name + "_noise";
  const TabularMDP& b = base.mdp;
  const int S = b.num_states();
  TabularMDP& mdp = scenario.mdp;
  mdp.action_names = b.action_names;
  mdp.discount = b.discount;
  mdp.state_names.reserve(2 * S);
  for (int s = 0; s < S; ++s) {
    mdp.state_names.push_back(b.state_names[s] + "_h");
    mdp.state_names.push_back(b.state_names[s] + "_t");
  }
  mdp.rewards = VectorXd::Zero(2 * S);
  for (int s = 0; s < S; ++s) {
    mdp.rewards[2 * s] = b.rewards[s];
    mdp.rewards[2 * s + 1] = b.rewards[s];
  }
  // The coin is resampled independently every step.
  for (int a = 0; a < b.num_actions(); ++a) {
    MatrixXd t = MatrixXd::Zero(2 * S, 2 * S);
    for (int s = 0; s < S; ++s) {
      for (int s2 = 0; s2 < S; ++s2) {
        const double p = b.transitions[a](s, s2);
        if (p == 0.0) continue;
        for (int c = 0; c < 2; ++c) {
          t(2 * s + c, 2 * s2) = 0.5 * p;
          t(2 * s + c, 2 * s2 + 1) = 0.5 * p;
        }
      }
    }
    mdp.transitions.push_back(std::move(t));
  }

  std::vector<int> merge_coins(2 * S);
  for (int s = 0; s < S; ++s) merge_coins[2 * s] = merge_coins[2 * s + 1] = s;
  scenario.designated = partition_from_block_of(merge_coins);
  scenario.expected.maximizes = {Objective::Forward};
  scenario.expected.normalized_return = 1.0;
  scenario.expected.q_sufficient = true;
  scenario.expected.pi_sufficient = true;
  return scenario;
}

std::vector<std::string> scenario_names() { return {"jstate", "jinv", "noise"}; }

ScenarioSpec scenario_by_name(const std::string& name) {
  if (name == "jstate") return jstate_counterexample();
  if (name == "jinv") return jinv_counterexample();
  if (name == "noise") {
    ScenarioSpec s = noise_mdp(jstate_counterexample());
    s.name = "noise";
    return s;
  }
  throw std::invalid_argument("unknown scenario '" + name +
                              "'; available: jstate, jinv, noise");
}

TabularMDP random_mdp(std::uint64_t seed, int n_states, int n_actions) {
  if (n_states < 1 || n_states > 64 || n_actions < 1 || n_actions > 16) {
    throw std::invalid_argument("random_mdp: size out of range");
  }
  SplitMix64 rng{seed};
  TabularMDP mdp;
  mdp.state_names = default_names("s", n_states);
  mdp.action_names = default_names("a", n_actions);
  mdp.discount = kDefaultGamma;
  for (int a = 0; a < n_actions; ++a) {
    MatrixXd t(n_states, n_states);
    for (int s = 0; s < n_states; ++s) t.row(s) = simplex_row(rng, n_states).transpose();
    mdp.transitions.push_back(std::move(t));
  }
  mdp.rewards = VectorXd(n_states);
  for (int s = 0; s < n_states; ++s) mdp.rewards[s] = rng.next_unit();
  return mdp;
}

VectorXd random_reward(std::uint64_t seed, int n_states) {
  SplitMix64 rng{seed};
  VectorXd r(n_states);
  for (int s = 0; s < n_states; ++s) r[s] = rng.next_unit();
  return r;
}

}  // namespace repsuff
