#include "repsuff/verify.hpp"

#include <cmath>
#include <sstream>

namespace repsuff {

namespace {

struct SeedMixer {
  std::uint64_t state;
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
};

std::string ratio_line(const char* scenario, double ratio) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s lifted-policy return ratio: %.6f", scenario, ratio);
  return buf;
}

}  // namespace

VerifyReport verify_forward_sufficiency(const ForwardSuiteConfig& config) {
  VerifyReport report;
  int maximizers_checked = 0;
  int failures = 0;

  for (int i = 0; i < config.cases; ++i) {
    SeedMixer mixer{config.base_seed + static_cast<std::uint64_t>(i)};
    const int span = std::max(1, config.max_states - 1);
    const int n_states = 2 + static_cast<int>(mixer.next() % span);
    const int n_actions = 2 + static_cast<int>(mixer.next() % 2);
    const std::uint64_t mdp_seed = mixer.next();

    TabularMDP mdp = random_mdp(mdp_seed, n_states, n_actions);
    const Policy policy = uniform_policy(mdp);
    const MaximizerSet maximizers =
        maximizer_set(mdp, policy, Objective::Forward, 1, config.eps);

    std::vector<VectorXd> reward_sets{mdp.rewards};
    for (int r = 1; r < config.rewards_per_mdp; ++r) {
      reward_sets.push_back(random_reward(mixer.next(), n_states));
    }

    for (const BlockPartition& partition : maximizers.partitions) {
      const Representation rep = partition_to_representation(partition);
      for (const VectorXd& rewards : reward_sets) {
        TabularMDP variant = mdp;
        variant.rewards = rewards;
        const SufficiencyVerdict verdict =
            check_q_sufficiency(variant, rep, config.q_tol);
        ++maximizers_checked;
        if (!verdict.q_sufficient) {
          ++failures;
          std::ostringstream os;
          os << "FAIL: case " << i << " (seed " << mdp_seed << ", " << n_states << " states, "
             << n_actions << " actions): forward-objective maximizer "
             << partition_literal(partition, mdp.state_names) << " is not Q*-sufficient";
          report.lines.push_back(os.str());
        }
      }
    }
  }

  std::ostringstream os;
  os << (failures == 0 ? "PASS" : "FAIL") << ": " << config.cases << " random MDPs, "
     << maximizers_checked << " (maximizer, reward) checks, " << failures
     << " Q*-sufficiency failures among forward-objective maximizers";
  report.lines.push_back(os.str());
  report.pass = failures == 0;
  return report;
}

VerifyReport verify_state_only_counterexample() {
  VerifyReport report;
  const ScenarioSpec scenario = jstate_counterexample();
  const Policy policy = uniform_policy(scenario.mdp);
  const Occupancy start = uniform_occupancy(scenario.mdp.num_states());

  const MaximizerSet maximizers = maximizer_set(scenario.mdp, policy, Objective::StateOnly);
  const bool designated_maximizes = maximizers.contains(scenario.designated);
  report.lines.push_back(designated_maximizes
                             ? "designated partition maximizes the state-only objective"
                             : "FAIL: designated partition does not maximize the state-only objective");

  const ObjectiveSufficiencyResult osr =
      objective_sufficiency(scenario.mdp, policy, Objective::StateOnly);
  report.lines.push_back(osr.sufficient
                             ? "FAIL: state-only objective came out sufficient on the jstate scenario"
                             : "state-only objective is insufficient on the jstate scenario "
                               "(a maximizer fails Q*-sufficiency)");

  const NormalizedReturn ret =
      aliased_policy_return(scenario.mdp, scenario.designated, policy, start);
  const double ratio = ret.normalized.value_or(std::nan(""));
  const bool ratio_ok = std::abs(ratio - 0.5) <= 1e-6;
  report.lines.push_back(ratio_line("jstate", ratio));
  if (!ratio_ok) report.lines.push_back("FAIL: expected return ratio 0.5");

  report.pass = designated_maximizes && !osr.sufficient && ratio_ok;
  report.lines.push_back(std::string(report.pass ? "PASS" : "FAIL") +
                         ": state-only objective counterexample");
  return report;
}

VerifyReport verify_inverse_counterexample() {
  VerifyReport report;
  const ScenarioSpec scenario = jinv_counterexample();
  const Policy policy = uniform_policy(scenario.mdp);
  const Occupancy start = uniform_occupancy(scenario.mdp.num_states());

  const MaximizerSet inv_max = maximizer_set(scenario.mdp, policy, Objective::Inverse);
  const MaximizerSet invr_max =
      maximizer_set(scenario.mdp, policy, Objective::InversePlusReward);
  const bool maximizes_inv = inv_max.contains(scenario.designated);
  const bool maximizes_invr = invr_max.contains(scenario.designated);
  report.lines.push_back(maximizes_inv
                             ? "designated partition maximizes the inverse objective"
                             : "FAIL: designated partition does not maximize the inverse objective");
  report.lines.push_back(maximizes_invr
                             ? "designated partition also maximizes inverse + reward information"
                             : "FAIL: designated partition does not maximize the reward-augmented variant");

  const Representation rep = partition_to_representation(scenario.designated);
  const SufficiencyVerdict verdict = check_pi_sufficiency(scenario.mdp, rep);
  report.lines.push_back(!verdict.pi_sufficient
                             ? "designated partition fails pi*-sufficiency (disjoint optimal action sets)"
                             : "FAIL: designated partition unexpectedly pi*-sufficient");

  const ObjectiveSufficiencyResult osr =
      objective_sufficiency(scenario.mdp, policy, Objective::Inverse);
  const ObjectiveSufficiencyResult osr_r =
      objective_sufficiency(scenario.mdp, policy, Objective::InversePlusReward);
  report.lines.push_back(!osr.sufficient && !osr_r.sufficient
                             ? "inverse objective is insufficient on the jinv scenario, "
                               "including the inv+r variant"
                             : "FAIL: inverse objective came out sufficient");

  const NormalizedReturn ret =
      aliased_policy_return(scenario.mdp, scenario.designated, policy, start);
  const double ratio = ret.normalized.value_or(std::nan(""));
  const bool ratio_ok = std::abs(ratio - 0.5) <= 1e-6;
  report.lines.push_back(ratio_line("jinv", ratio));
  if (!ratio_ok) report.lines.push_back("FAIL: expected return ratio 0.5");

  report.pass = maximizes_inv && maximizes_invr && !verdict.pi_sufficient &&
                !osr.sufficient && !osr_r.sufficient && ratio_ok;
  report.lines.push_back(std::string(report.pass ? "PASS" : "FAIL") +
                         ": inverse objective counterexample (including inv+r)");
  return report;
}

}  // namespace repsuff
