// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Criteria mirror the claims documented in the README.

#include "repsuff/mdp_file.hpp"
#include "repsuff/scenarios.hpp"
#include "repsuff/sufficiency.hpp"
#include "repsuff/sweep.hpp"
#include "repsuff/verify.hpp"
#include "test_helpers.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace repsuff;
using namespace repsuff::test;

namespace {

struct Criterion {
  std::string name;
  double time_limit_seconds;
  std::function<bool(std::string&)> body;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool approx(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// ---- criterion 1: state-only counterexample --------------------------------

bool criterion_state_only(std::string& detail) {
  const ScenarioSpec scenario = jstate_counterexample();
  const Policy policy = uniform_policy(scenario.mdp);
  const Occupancy start = uniform_occupancy(4);
  SweepConfig config;
  config.eps = 1e-9;
  const auto reports = run_sweep(scenario.mdp, policy, start, config);

  const ObjectiveReport* designated = nullptr;
  for (const auto& r : reports) {
    if (r.partition == scenario.designated) designated = &r;
  }
  if (designated == nullptr) {
    detail = "designated partition not found in the sweep";
    return false;
  }
  const bool maximizes = designated->maximizes(Objective::StateOnly);
  const bool q_fails = !designated->verdict.q_sufficient;
  const bool ratio_ok = !designated->ret.degenerate() &&
                        approx(*designated->ret.normalized, 0.5, 1e-6);
  std::ostringstream os;
  os << "max(J_state)=" << (maximizes ? "yes" : "NO") << ", Q*-sufficient="
     << (q_fails ? "no" : "YES") << ", normalized return="
     << (designated->ret.degenerate() ? -1.0 : *designated->ret.normalized);
  detail = os.str();
  return maximizes && q_fails && ratio_ok;
}

// ---- criterion 2: inverse counterexample -----------------------------------

bool criterion_inverse(std::string& detail) {
  const ScenarioSpec scenario = jinv_counterexample();
  const Policy policy = uniform_policy(scenario.mdp);
  const Occupancy start = uniform_occupancy(6);
  SweepConfig config;
  config.eps = 1e-9;
  const auto reports = run_sweep(scenario.mdp, policy, start, config);
  if (reports.size() != 203) {
    detail = "expected a 203-partition sweep, got " + std::to_string(reports.size());
    return false;
  }

  const ObjectiveReport* designated = nullptr;
  for (const auto& r : reports) {
    if (r.partition == scenario.designated) designated = &r;
  }
  if (designated == nullptr) {
    detail = "designated partition not found in the sweep";
    return false;
  }
  const bool maximizes_inv = designated->maximizes(Objective::Inverse);
  const bool maximizes_invr = designated->maximizes(Objective::InversePlusReward);
  bool disjoint_argmax = false;
  for (const Witness& w : designated->verdict.witnesses) {
    if (w.kind == WitnessKind::DisjointArgmax && w.s1 == 0 && w.s2 == 1) {
      disjoint_argmax = true;
    }
  }
  const bool pi_fails = !designated->verdict.pi_sufficient && disjoint_argmax;
  const bool ratio_ok = !designated->ret.degenerate() &&
                        approx(*designated->ret.normalized, 0.5, 1e-6);
  std::ostringstream os;
  os << "max(J_inv)=" << (maximizes_inv ? "yes" : "NO") << ", max(J_inv+I(R;Z))="
     << (maximizes_invr ? "yes" : "NO") << ", disjoint argmax at (s0,s1)="
     << (pi_fails ? "yes" : "NO") << ", normalized return="
     << (designated->ret.degenerate() ? -1.0 : *designated->ret.normalized);
  detail = os.str();
  return maximizes_inv && maximizes_invr && pi_fails && ratio_ok;
}

// ---- criterion 3: forward-objective property suite --------------------------

bool criterion_forward_suite(std::string& detail) {
  ForwardSuiteConfig config;
  config.cases = 100;
  config.max_states = 6;
  config.q_tol = 1e-6;
  const VerifyReport report = verify_forward_sufficiency(config);
  detail = report.lines.empty() ? "" : report.lines.back();
  return report.pass;
}

// ---- criterion 4: return-distribution identity ------------------------------

bool criterion_return_identity(std::string& detail) {
  std::ostringstream os;
  bool ok = true;
  for (const std::string& name : scenario_names()) {
    const ScenarioSpec scenario = scenario_by_name(name);
    const Representation identity =
        partition_to_representation(identity_partition(scenario.mdp.num_states()));
    const ReturnIdentityReport r =
        check_return_identity(scenario.mdp, identity, uniform_policy(scenario.mdp), 4, 1e-9);
    ok = ok && r.pass;
    os << name << ":identity tv=" << r.max_deviation << " ";
  }
  const ScenarioSpec noise = scenario_by_name("noise");
  const Representation merged = partition_to_representation(noise.designated);
  for (int horizon = 1; horizon <= 4; ++horizon) {
    const ReturnIdentityReport r =
        check_return_identity(noise.mdp, merged, uniform_policy(noise.mdp), horizon, 1e-9);
    ok = ok && r.pass;
    if (horizon == 4) os << "noise:merged(H=1..4) tv=" << r.max_deviation << " ";
  }
  const ScenarioSpec jinv = jinv_counterexample();
  const ReturnIdentityReport broken = check_return_identity(
      jinv.mdp, partition_to_representation(jinv.designated), uniform_policy(jinv.mdp), 2,
      1e-9);
  ok = ok && !broken.pass && broken.max_deviation > 0.05;
  os << "jinv:alias tv=" << broken.max_deviation << " (must exceed 0.05)";
  detail = os.str();
  return ok;
}

// ---- criterion 5: information-theory property suite -------------------------

bool criterion_information_properties(std::string& detail) {
  int checked = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    TestRng rng{1000 + i};
    const int n = 2 + rng.below(5);
    const int m = 2 + rng.below(2);
    const TabularMDP mdp = random_mdp(rng.next(), n, m);
    const Policy policy = uniform_policy(mdp);
    const BlockPartition coarse = random_partition(rng, n);
    const BlockPartition fine = random_refinement(rng, coarse);
    const Representation coarse_rep = partition_to_representation(coarse);
    const Representation fine_rep = partition_to_representation(fine);
    const Representation identity_rep = partition_to_representation(identity_partition(n));

    const JointBuilder builder(mdp, policy, 1);
    const ObjectiveValues vals = all_objective_values(builder, builder, coarse_rep);
    const ObjectiveValues vals_fine = all_objective_values(builder, builder, fine_rep);
    const ObjectiveValues vals_id = all_objective_values(builder, builder, identity_rep);

    // nonnegativity
    for (double v : {vals.forward, vals.state_only, vals.inverse, vals.inverse_plus_reward,
                     vals.symbol_state_info}) {
      if (!(v >= 0.0)) {
        detail = "negative objective value in case " + std::to_string(i);
        return false;
      }
    }
    // chain rule: I(Z'; Z, A) = I(Z'; Z) + I(A; Z' | Z)
    if (std::abs(vals.forward - (vals.state_only + vals.inverse)) > 1e-9) {
      detail = "chain-rule violation in case " + std::to_string(i);
      return false;
    }
    // data processing: partitions never beat the identity
    if (vals.forward > vals_id.forward + 1e-9 ||
        vals.state_only > vals_id.state_only + 1e-9) {
      detail = "data-processing violation in case " + std::to_string(i);
      return false;
    }
    // refinement monotonicity for fwd, state, I_ZS
    if (vals_fine.forward < vals.forward - 1e-9 ||
        vals_fine.state_only < vals.state_only - 1e-9 ||
        vals_fine.symbol_state_info < vals.symbol_state_info - 1e-9) {
      detail = "refinement monotonicity violation in case " + std::to_string(i);
      return false;
    }
    ++checked;
  }
  detail = std::to_string(checked) + " random (MDP, partition) cases checked";
  return checked == 50;
}

// ---- criterion 6: didactic tie structure ------------------------------------

bool criterion_tie_structure(std::string& detail) {
  const ScenarioSpec scenario = jstate_counterexample();
  const Policy policy = uniform_policy(scenario.mdp);
  const Representation identity = partition_to_representation(identity_partition(4));
  const Representation designated = partition_to_representation(scenario.designated);

  const double state_identity =
      objective_value(scenario.mdp, policy, identity, Objective::StateOnly).bits;
  const double state_designated =
      objective_value(scenario.mdp, policy, designated, Objective::StateOnly).bits;
  const double fwd_identity =
      objective_value(scenario.mdp, policy, identity, Objective::Forward).bits;
  const double fwd_designated =
      objective_value(scenario.mdp, policy, designated, Objective::Forward).bits;

  // cross-check against the independent brute-force joint oracle
  const Occupancy mu = stationary_occupancy(scenario.mdp, policy);
  const BruteJoint oracle_designated =
      brute_mdp_joint(scenario.mdp, policy.probs, designated.probs, mu.probs);
  const double oracle_state = oracle_designated.mi({kBruteZNext}, {kBruteZ});
  const double oracle_fwd = oracle_designated.mi({kBruteZNext}, {kBruteZ, kBruteA});

  std::ostringstream os;
  os << "J_state(designated)=" << state_designated << " vs identity " << state_identity
     << "; J_fwd gap=" << fwd_identity - fwd_designated;
  detail = os.str();
  return approx(state_designated, state_identity, 1e-9) &&
         (fwd_identity - fwd_designated >= 0.5) &&
         approx(state_designated, oracle_state, 1e-9) &&
         approx(fwd_designated, oracle_fwd, 1e-9);
}

// ---- criterion 7: CLI determinism and round-trips ---------------------------

bool criterion_cli_determinism(std::string& detail) {
  const std::string binary = REPSUFF_CLI_PATH;
  const std::filesystem::path data_dir = REPSUFF_DATA_DIR;
  const auto work = std::filesystem::temp_directory_path() / "repsuff_acceptance";
  std::filesystem::create_directories(work);

  for (const std::string& name : scenario_names()) {
    const std::filesystem::path mdp_path = data_dir / (name + ".mdp");
    if (!std::filesystem::exists(mdp_path)) {
      detail = "missing data file " + mdp_path.string();
      return false;
    }
    const std::string first = (work / (name + "_1.csv")).string();
    const std::string second = (work / (name + "_2.csv")).string();
    for (const std::string& out : {first, second}) {
      const std::string cmd =
          binary + " sweep " + mdp_path.string() + " --out " + out + " > /dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) {
        detail = "sweep failed for " + name;
        return false;
      }
    }
    if (read_file(first) != read_file(second) || read_file(first).empty()) {
      detail = "sweep output differs across runs for " + name;
      return false;
    }

    // parse -> export is a byte-level fixed point on the shipped files
    const std::string text = read_file(mdp_path);
    const MdpFileContents parsed = parse_mdp_file(text);
    const std::string exported = export_mdp_file(parsed.mdp, parsed.policy, parsed.start);
    if (exported != text) {
      detail = "parse/export round-trip changed " + name + ".mdp";
      return false;
    }
    const MdpFileContents reparsed = parse_mdp_file(exported);
    if (!mdp_approx_equal(reparsed.mdp, parsed.mdp, 1e-12)) {
      detail = "round-trip changed the MDP for " + name;
      return false;
    }
  }
  detail = "3 scenarios, byte-identical CSVs and idempotent round-trips";
  return true;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"state-only objective counterexample (maximizer, Q*-failure, 0.5 return)", 1.0,
       criterion_state_only},
      {"inverse objective counterexample (inv and inv+r, disjoint argmax, 0.5 return)", 1.0,
       criterion_inverse},
      {"forward objective yields Q*-sufficient maximizers on 100 random MDPs", 120.0,
       criterion_forward_suite},
      {"return-distribution identity holds iff forward information is preserved", 30.0,
       criterion_return_identity},
      {"information-theory properties on 50 random (MDP, partition) pairs", 60.0,
       criterion_information_properties},
      {"didactic tie structure (J_state tie, J_fwd gap >= 0.5 bits)", 10.0,
       criterion_tie_structure},
      {"CLI determinism and file round-trips", 60.0, criterion_cli_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[i].body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > criteria[i].time_limit_seconds) {
      ok = false;
      detail += " [exceeded time limit of " +
                std::to_string(criteria[i].time_limit_seconds) + "s]";
    }
    if (!ok) ++failures;
    std::printf("[%s] %zu. %s: %s (%.2fs)\n", ok ? "PASS" : "FAIL", i + 1,
                criteria[i].name.c_str(), detail.c_str(), seconds);
  }
  if (failures > 0) {
    std::printf("%d of %zu acceptance criteria failed\n", failures, criteria.size());
    return 1;
  }
  std::printf("all %zu acceptance criteria passed\n", criteria.size());
  return 0;
}
