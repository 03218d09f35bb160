#include "repsuff/cli.hpp"

#include "repsuff/mdp_file.hpp"
#include "repsuff/scenarios.hpp"
#include "repsuff/sweep.hpp"
#include "repsuff/verify.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace repsuff::cli {

namespace {

int sweep_threads_from_env(std::ostream& err) {
  const char* raw = std::getenv("REPSUFF_THREADS");
  if (raw == nullptr || *raw == '\0') return 1;
  char* end = nullptr;
  const long value = std::strtol(raw, &end, 10);
  if (end == nullptr || *end != '\0' || value < 1 || value > 256) {
    err << "REPSUFF_THREADS must be an integer in [1, 256], got '" << raw << "'\n";
    return -1;
  }
  return static_cast<int>(value);
}

struct SweepArgs {
  std::string file;
  std::string objective = "all";
  int k = 1;
  double gamma = -1.0;  // negative means "keep the file's value"
  std::string out_path;
  double eps = 1e-9;
};

struct CheckArgs {
  std::string file;
  std::string partition;
  double tol = 1e-9;
};

struct IdentityArgs {
  std::string file;
  std::string partition;
  int horizon = 4;
};

struct VerifyArgs {
  int prop = 0;
  int seeds = 100;
  int size = 6;
  std::uint64_t seed = 0;
};

struct ExportArgs {
  std::string scenario;
  std::string out_path;
};

int do_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  MdpFileContents contents = load_mdp_file(args.file);
  if (args.gamma >= 0.0) {
    if (args.gamma >= 1.0) {
      err << "--gamma must be in [0, 1)\n";
      return kExitUsage;
    }
    contents.mdp.discount = args.gamma;
  }

  SweepCsvOptions csv;
  if (args.objective != "all") {
    const auto parsed = parse_objective(args.objective);
    if (!parsed || *parsed == Objective::SymbolStateInfo) {
      err << "--objective must be one of all, fwd, state, inv, inv+r\n";
      return kExitUsage;
    }
    csv.only = *parsed;
  }

  SweepConfig config;
  config.k = args.k;
  config.eps = args.eps;
  const int threads = sweep_threads_from_env(err);
  if (threads < 0) return kExitUsage;
  config.threads = threads;

  const std::vector<ObjectiveReport> reports =
      run_sweep(contents.mdp, contents.policy, contents.start, config);

  if (args.out_path.empty()) {
    write_sweep_csv(out, contents.mdp, reports, csv);
  } else {
    std::ofstream file(args.out_path, std::ios::binary);
    if (!file) {
      err << "cannot open output file '" << args.out_path << "'\n";
      return kExitUsage;
    }
    write_sweep_csv(file, contents.mdp, reports, csv);
  }
  return kExitOk;
}

int do_check(const CheckArgs& args, std::ostream& out, std::ostream& err) {
  MdpFileContents contents = load_mdp_file(args.file);
  const BlockPartition partition =
      parse_partition_literal(args.partition, contents.mdp.state_names);
  const Representation rep = partition_to_representation(partition);
  const SufficiencyVerdict verdict =
      check_sufficiency(contents.mdp, rep, args.tol, args.tol);

  out << "partition: " << partition_literal(partition, contents.mdp.state_names) << '\n';
  out << "pi-sufficient: " << (verdict.pi_sufficient ? "yes" : "no") << '\n';
  out << "q-sufficient:  " << (verdict.q_sufficient ? "yes" : "no") << '\n';
  for (const Witness& w : verdict.witnesses) {
    out << "witness: " << w.detail << '\n';
  }
  (void)err;
  return verdict.q_sufficient ? kExitOk : kExitInsufficient;
}

int do_identity(const IdentityArgs& args, std::ostream& out, std::ostream& err) {
  MdpFileContents contents = load_mdp_file(args.file);
  const BlockPartition partition =
      parse_partition_literal(args.partition, contents.mdp.state_names);
  const Representation rep = partition_to_representation(partition);
  const ReturnIdentityReport report =
      check_return_identity(contents.mdp, rep, contents.policy, args.horizon);

  // Worst deviation per (state, action) over the symbols containing it.
  const int A = contents.mdp.num_actions();
  std::vector<double> worst(static_cast<std::size_t>(contents.mdp.num_states()) * A, 0.0);
  for (const ReturnIdentityDeviation& d : report.deviations) {
    double& cell = worst[static_cast<std::size_t>(d.state) * A + d.action];
    cell = std::max(cell, d.tv);
  }
  for (int s = 0; s < contents.mdp.num_states(); ++s) {
    for (int a = 0; a < A; ++a) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", worst[static_cast<std::size_t>(s) * A + a]);
      out << contents.mdp.state_names[s] << ' ' << contents.mdp.action_names[a]
          << " max_tv=" << buf << '\n';
    }
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", report.max_deviation);
  out << (report.pass ? "PASS" : "FAIL") << ": max total-variation deviation " << buf
      << " at horizon " << args.horizon << " (tolerance " << report.tol << ")\n";
  (void)err;
  return report.pass ? kExitOk : kExitInsufficient;
}

int do_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  VerifyReport report;
  switch (args.prop) {
    case 1: {
      ForwardSuiteConfig config;
      config.cases = args.seeds;
      config.max_states = args.size;
      config.base_seed = args.seed;
      report = verify_forward_sufficiency(config);
      break;
    }
    case 2:
      report = verify_state_only_counterexample();
      break;
    case 3:
      report = verify_inverse_counterexample();
      break;
    default:
      err << "--prop must be 1, 2 or 3\n";
      return kExitUsage;
  }
  for (const std::string& line : report.lines) out << line << '\n';
  return report.pass ? kExitOk : kExitInsufficient;
}

int do_export(const ExportArgs& args, std::ostream& out, std::ostream& err) {
  const ScenarioSpec scenario = scenario_by_name(args.scenario);
  const std::string text =
      export_mdp_file(scenario.mdp, uniform_policy(scenario.mdp),
                      uniform_occupancy(scenario.mdp.num_states()));
  if (args.out_path.empty()) {
    out << text;
  } else {
    std::ofstream file(args.out_path, std::ios::binary);
    if (!file) {
      err << "cannot open output file '" << args.out_path << "'\n";
      return kExitUsage;
    }
    file << text;
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact analysis of information-based state representations on tabular MDPs"};
  app.require_subcommand(1);

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "evaluate every block partition of an MDP's states and write a CSV");
  sweep->add_option("mdp-file", sweep_args.file, "MDP file to analyze")->required();
  sweep->add_option("--objective", sweep_args.objective,
                    "all, fwd, state, inv or inv+r (default all)");
  sweep->add_option("--k", sweep_args.k, "step offset for state/inv objectives")
      ->check(CLI::Range(1, 32));
  sweep->add_option("--gamma", sweep_args.gamma, "override the file's discount");
  sweep->add_option("--out", sweep_args.out_path, "CSV output path (default stdout)");
  sweep->add_option("--eps", sweep_args.eps, "maximizer tie width in bits (default 1e-9)");

  CheckArgs check_args;
  CLI::App* check = app.add_subcommand(
      "check", "report pi*/Q*-sufficiency of a partition; exit 2 when not Q*-sufficient");
  check->add_option("mdp-file", check_args.file, "MDP file")->required();
  check->add_option("--partition", check_args.partition,
                    "block literal such as {s0,s3|s1|s2}")
      ->required();
  check->add_option("--tol", check_args.tol, "Q-value equality tolerance (default 1e-9)");

  IdentityArgs identity_args;
  CLI::App* identity = app.add_subcommand(
      "identity", "check the return-distribution identity for a partition");
  identity->add_option("mdp-file", identity_args.file, "MDP file")->required();
  identity->add_option("--partition", identity_args.partition, "block literal")->required();
  identity->add_option("--horizon", identity_args.horizon, "return horizon (default 4)")
      ->check(CLI::Range(1, 32));

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand(
      "verify", "run a built-in verification suite (see README for the claims)");
  verify->add_option("--prop", verify_args.prop,
                     "1: forward objective yields sufficient representations on random MDPs; "
                     "2: state-only counterexample; 3: inverse counterexample")
      ->required();
  verify->add_option("--seeds", verify_args.seeds, "random MDP count for suite 1")
      ->check(CLI::Range(1, 100000));
  verify->add_option("--size", verify_args.size, "max state count for suite 1")
      ->check(CLI::Range(2, 8));
  verify->add_option("--seed", verify_args.seed, "base seed for suite 1");

  ExportArgs export_args;
  CLI::App* exporter =
      app.add_subcommand("export", "write a built-in scenario in the MDP file format");
  exporter->add_option("--scenario", export_args.scenario, "jstate, jinv or noise")
      ->required();
  exporter->add_option("--out", export_args.out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sweep->parsed()) return do_sweep(sweep_args, out, err);
    if (check->parsed()) return do_check(check_args, out, err);
    if (identity->parsed()) return do_identity(identity_args, out, err);
    if (verify->parsed()) return do_verify(verify_args, out, err);
    if (exporter->parsed()) return do_export(export_args, out, err);
  } catch (const EnumerationGuardError& e) {
    err << e.what() << '\n';
    return kExitGuard;
  } catch (const TrajectoryGuardError& e) {
    err << e.what() << '\n';
    return kExitGuard;
  } catch (const ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace repsuff::cli
