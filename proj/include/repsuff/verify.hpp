#pragma once

#include "repsuff/scenarios.hpp"
#include "repsuff/sufficiency.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace repsuff {

struct VerifyReport {
  bool pass = false;
  std::vector<std::string> lines;  // human-readable, one observation per line
};

/// Suite 1: over seeded random MDPs, every partition in the forward-objective
/// maximizer set must be Q*-sufficient, for the MDP's own reward and extra
/// random rewards. A failure indicts the implementation, not the claim.
struct ForwardSuiteConfig {
  int cases = 100;
  int max_states = 6;   // per-case sizes drawn in [2, max_states]
  std::uint64_t base_seed = 0;
  double q_tol = 1e-6;
  double eps = 1e-9;
  int rewards_per_mdp = 3;
};
VerifyReport verify_forward_sufficiency(const ForwardSuiteConfig& config = {});

/// Suite 2: the jstate scenario's designated partition maximizes the
/// state-only objective, fails Q*-sufficiency, and its aggregate-VI lifted
/// policy earns half the optimal return.
VerifyReport verify_state_only_counterexample();

/// Suite 3: same structure on the jinv scenario, for the inverse objective
/// and its reward-augmented variant, with a pi*-sufficiency failure.
VerifyReport verify_inverse_counterexample();

}  // namespace repsuff
