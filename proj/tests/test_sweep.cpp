#include "repsuff/sweep.hpp"
#include "repsuff/scenarios.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <sstream>

using namespace repsuff;
using namespace repsuff::test;

namespace {

std::string sweep_csv(const TabularMDP& mdp, const SweepConfig& config = {},
                      const SweepCsvOptions& csv = {}) {
  const std::vector<ObjectiveReport> reports =
      run_sweep(mdp, uniform_policy(mdp), uniform_occupancy(mdp.num_states()), config);
  std::ostringstream os;
  write_sweep_csv(os, mdp, reports, csv);
  return os.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_SUITE("sweep") {
  TEST_CASE("jstate sweep: 15 rows, designated flags as expected") {
    const ScenarioSpec scenario = jstate_counterexample();
    const std::vector<ObjectiveReport> reports = run_sweep(
        scenario.mdp, uniform_policy(scenario.mdp), uniform_occupancy(4), SweepConfig{});
    CHECK(reports.size() == 15);

    const ObjectiveReport* designated = nullptr;
    const ObjectiveReport* identity = nullptr;
    for (const ObjectiveReport& r : reports) {
      if (r.partition == scenario.designated) designated = &r;
      if (r.partition == identity_partition(4)) identity = &r;
    }
    REQUIRE(designated != nullptr);
    REQUIRE(identity != nullptr);
    CHECK(designated->maximizes(Objective::StateOnly));
    CHECK_FALSE(designated->maximizes(Objective::Forward));
    CHECK_FALSE(designated->verdict.q_sufficient);
    CHECK(identity->maximizes(Objective::Forward));
    CHECK(identity->verdict.q_sufficient);
    REQUIRE_FALSE(designated->ret.degenerate());
    CHECK(std::abs(*designated->ret.normalized - 0.5) < 1e-9);
    REQUIRE_FALSE(identity->ret.degenerate());
    CHECK(std::abs(*identity->ret.normalized - 1.0) < 1e-9);

    for (const ObjectiveReport& r : reports) {
      REQUIRE_FALSE(r.ret.degenerate());
      CHECK(*r.ret.normalized <= *identity->ret.normalized + 1e-9);
    }
  }

  TEST_CASE("csv header, ordering and quoting") {
    const ScenarioSpec scenario = jstate_counterexample();
    const std::string csv = sweep_csv(scenario.mdp);
    const auto lines = lines_of(csv);
    REQUIRE(lines.size() == 16);
    CHECK(lines[0] ==
          "partition_id,blocks,I_ZS,J_fwd,J_state,J_inv,J_inv_plus_R,"
          "pi_sufficient,q_sufficient,normalized_return,"
          "max_J_fwd,max_J_state,max_J_inv,max_J_inv_plus_R");
    // the single-block partition has I_ZS = 0 and sorts first
    CHECK(lines[1].find("\"{s0,s1,s2,s3}\"") != std::string::npos);
    // rows are sorted by I_ZS; ties fall back to the partition id
    double prev = -1.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const std::size_t comma = lines[i].find(",\"");
      const std::size_t close = lines[i].find("\",", comma);
      const double izs = std::stod(lines[i].substr(close + 2));
      CHECK(izs >= prev - 1e-12);
      prev = izs;
    }
    CHECK(csv.back() == '\n');
  }

  TEST_CASE("csv bytes are identical across repeated runs and thread counts") {
    const ScenarioSpec scenario = jinv_counterexample();
    const std::string first = sweep_csv(scenario.mdp);
    const std::string second = sweep_csv(scenario.mdp);
    CHECK(first == second);
    SweepConfig threaded;
    threaded.threads = 3;
    CHECK(sweep_csv(scenario.mdp, threaded) == first);
    CHECK(lines_of(first).size() == 204);  // header + Bell(6)
  }

  TEST_CASE("single-objective selection narrows the columns") {
    const ScenarioSpec scenario = jstate_counterexample();
    SweepCsvOptions csv;
    csv.only = Objective::StateOnly;
    const std::string text = sweep_csv(scenario.mdp, SweepConfig{}, csv);
    const auto lines = lines_of(text);
    CHECK(lines[0] ==
          "partition_id,blocks,I_ZS,J_state,pi_sufficient,q_sufficient,"
          "normalized_return,max_J_state");
  }

  TEST_CASE("a single-state MDP sweeps to one trivial row") {
    TabularMDP mdp;
    mdp.state_names = {"only"};
    mdp.action_names = {"a0"};
    mdp.transitions = {MatrixXd::Ones(1, 1)};
    mdp.rewards = VectorXd::Ones(1);
    mdp.discount = 0.9;
    const std::vector<ObjectiveReport> reports =
        run_sweep(mdp, uniform_policy(mdp), uniform_occupancy(1), SweepConfig{});
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].values.forward == doctest::Approx(0.0));
    CHECK(reports[0].values.state_only == doctest::Approx(0.0));
    CHECK(reports[0].values.inverse == doctest::Approx(0.0));
    CHECK(reports[0].values.symbol_state_info == doctest::Approx(0.0));
    REQUIRE_FALSE(reports[0].ret.degenerate());
    CHECK(*reports[0].ret.normalized == doctest::Approx(1.0));
  }

  TEST_CASE("sweeping with k = 2 changes only the k-dependent objectives") {
    const ScenarioSpec scenario = jstate_counterexample();
    SweepConfig config;
    config.k = 2;
    const std::vector<ObjectiveReport> reports = run_sweep(
        scenario.mdp, uniform_policy(scenario.mdp), uniform_occupancy(4), config);
    const std::vector<ObjectiveReport> base = run_sweep(
        scenario.mdp, uniform_policy(scenario.mdp), uniform_occupancy(4), SweepConfig{});
    for (std::size_t i = 0; i < reports.size(); ++i) {
      CHECK(reports[i].values.forward == doctest::Approx(base[i].values.forward));
      CHECK(reports[i].values.symbol_state_info ==
            doctest::Approx(base[i].values.symbol_state_info));
    }
    // at k = 2 the chain returns to its own half of the period-2 cycle, so
    // the identity partition still attains 2 bits of forward information
    const ObjectiveReport& identity = reports.back();
    CHECK(identity.partition == identity_partition(4));
    CHECK(identity.values.forward == doctest::Approx(2.0));
  }
}
