#include "repsuff/sufficiency.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

namespace repsuff {

namespace {

std::string action_set_names(const TabularMDP& mdp, const std::vector<int>& set) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i > 0) os << ',';
    os << mdp.action_names[set[i]];
  }
  os << '}';
  return os.str();
}

bool sets_intersect(const std::vector<int>& a, const std::vector<int>& b) {
  for (int x : a) {
    if (std::find(b.begin(), b.end(), x) != b.end()) return true;
  }
  return false;
}

SufficiencyVerdict check_both(const TabularMDP& mdp, const Representation& rep,
                              const QTable& q, const std::vector<std::vector<int>>& greedy,
                              double q_tol, double alias_tol, bool do_q, bool do_pi) {
  SufficiencyVerdict verdict;
  for (const auto& [s1, s2] : aliased_pairs(rep, alias_tol)) {
    if (do_q) {
      int worst_action = -1;
      double worst = 0.0;
      for (int a = 0; a < mdp.num_actions(); ++a) {
        const double d = std::abs(q.values(s1, a) - q.values(s2, a));
        if (d > worst) {
          worst = d;
          worst_action = a;
        }
      }
      if (worst > q_tol) {
        verdict.q_sufficient = false;
        std::ostringstream os;
        os << "Q* rows differ for aliased states " << mdp.state_names[s1] << " and "
           << mdp.state_names[s2] << ": |dQ| = " << worst << " at action "
           << mdp.action_names[worst_action];
        verdict.witnesses.push_back(
            {WitnessKind::QValueMismatch, s1, s2, worst_action, worst, os.str()});
      }
    }
    if (do_pi && !sets_intersect(greedy[s1], greedy[s2])) {
      verdict.pi_sufficient = false;
      std::ostringstream os;
      os << "optimal action sets for aliased states " << mdp.state_names[s1] << " and "
         << mdp.state_names[s2] << " are disjoint: " << action_set_names(mdp, greedy[s1])
         << " vs " << action_set_names(mdp, greedy[s2]);
      verdict.witnesses.push_back({WitnessKind::DisjointArgmax, s1, s2, -1, 0.0, os.str()});
    }
  }
  return verdict;
}

Policy uniform_mixture_policy(const std::vector<std::vector<int>>& greedy, int n_actions) {
  Policy p;
  p.probs = MatrixXd::Zero(static_cast<int>(greedy.size()), n_actions);
  for (std::size_t s = 0; s < greedy.size(); ++s) {
    for (int a : greedy[s]) {
      p.probs(static_cast<int>(s), a) = 1.0 / static_cast<double>(greedy[s].size());
    }
  }
  return p;
}

// Optimal return via exact evaluation of the greedy mixture. Agrees with
// start . max_a Q* within the solver tolerance, but carries no value-
// iteration residue, so lifted/optimal ratios come out clean.
double greedy_mixture_return(const TabularMDP& mdp,
                             const std::vector<std::vector<int>>& greedy,
                             const Occupancy& start, double tol) {
  return policy_return(mdp, uniform_mixture_policy(greedy, mdp.num_actions()), start, tol);
}

NormalizedReturn normalized_return_impl(const TabularMDP& mdp, const Representation& rep,
                                        const Occupancy& occupancy, const Occupancy& start,
                                        double optimal_return, double tie_tol, double tol) {
  const AggregateMDP agg = aggregate_with_occupancy(mdp, rep, occupancy);
  const QTable qz = q_star(agg.mdp, tol);
  const Policy z_policy =
      uniform_mixture_policy(greedy_policy_sets(qz, tie_tol), mdp.num_actions());
  const Policy lifted = lift_policy(rep, z_policy);

  NormalizedReturn ret;
  ret.lifted_return = policy_return(mdp, lifted, start, tol);
  ret.optimal_return = optimal_return;
  ret.immediate_start_reward = start.probs.dot(mdp.rewards);

  // Both policies collect the same reward at the start state; the comparison
  // the ratio makes is between the returns accumulated from the next step on.
  const double denom = ret.optimal_return - ret.immediate_start_reward;
  if (std::abs(denom) >= 1e-12) {
    ret.normalized = (ret.lifted_return - ret.immediate_start_reward) / denom;
  }
  return ret;
}

struct SweepContext {
  const TabularMDP& mdp;
  const Occupancy& start;
  const SweepConfig& config;
  Occupancy occupancy;
  JointBuilder step1;
  JointBuilder stepk;
  QTable q;
  std::vector<std::vector<int>> greedy;
  double optimal_return = 0.0;
};

ObjectiveReport evaluate_partition(const SweepContext& ctx, long long id,
                                   const BlockPartition& partition) {
  ObjectiveReport report;
  report.partition_id = id;
  report.partition = partition;
  const Representation rep = partition_to_representation(partition);
  report.values = all_objective_values(ctx.step1, ctx.stepk, rep);
  report.verdict = check_both(ctx.mdp, rep, ctx.q, ctx.greedy, ctx.config.q_tol,
                              ctx.config.alias_tol, true, true);
  report.ret = normalized_return_impl(ctx.mdp, rep, ctx.occupancy, ctx.start,
                                      ctx.optimal_return, ctx.config.tie_tol,
                                      ctx.config.solve_tol);
  return report;
}

}  // namespace

SufficiencyVerdict check_q_sufficiency(const TabularMDP& mdp, const Representation& rep,
                                       double tol, double alias_tol) {
  const QTable q = q_star(mdp);
  return check_both(mdp, rep, q, {}, tol, alias_tol, true, false);
}

SufficiencyVerdict check_pi_sufficiency(const TabularMDP& mdp, const Representation& rep,
                                        double tie_tol, double alias_tol) {
  const QTable q = q_star(mdp);
  SufficiencyVerdict v =
      check_both(mdp, rep, q, greedy_policy_sets(q, tie_tol), 0.0, alias_tol, false, true);
  return v;
}

SufficiencyVerdict check_sufficiency(const TabularMDP& mdp, const Representation& rep,
                                     const QTable& q, double q_tol, double tie_tol,
                                     double alias_tol) {
  return check_both(mdp, rep, q, greedy_policy_sets(q, tie_tol), q_tol, alias_tol, true, true);
}

SufficiencyVerdict check_sufficiency(const TabularMDP& mdp, const Representation& rep,
                                     double q_tol, double tie_tol, double alias_tol) {
  return check_sufficiency(mdp, rep, q_star(mdp), q_tol, tie_tol, alias_tol);
}

bool MaximizerSet::contains(const BlockPartition& partition) const {
  return std::find(partitions.begin(), partitions.end(), partition) != partitions.end();
}

MaximizerSet maximizer_set(const TabularMDP& mdp, const Policy& policy, Objective objective,
                           int k, double eps) {
  const int effective_k = objective == Objective::Forward ? 1 : k;
  const Occupancy mu = stationary_occupancy(mdp, policy);
  const JointBuilder builder(mdp, policy, effective_k, mu);

  auto value_of = [&](const BlockPartition& p) {
    const Representation rep = partition_to_representation(p);
    const JointTable joint =
        objective == Objective::SymbolStateInfo
            ? builder.build(rep, {kAxisStateNow, kAxisSymbolNow})
            : builder.build(rep, {kAxisSymbolNow, kAxisAction, kAxisSymbolNext});
    switch (objective) {
      case Objective::Forward:
        return mutual_information(joint, {kAxisSymbolNext}, {kAxisSymbolNow, kAxisAction});
      case Objective::StateOnly:
        return mutual_information(joint, {kAxisSymbolNext}, {kAxisSymbolNow});
      case Objective::Inverse:
        return mutual_information(joint, {kAxisAction}, {kAxisSymbolNext}, {kAxisSymbolNow});
      case Objective::InversePlusReward: {
        const JointTable jr = builder.build(rep, {kAxisSymbolNow, kAxisReward});
        return mutual_information(joint, {kAxisAction}, {kAxisSymbolNext}, {kAxisSymbolNow}) +
               mutual_information(jr, {kAxisReward}, {kAxisSymbolNow});
      }
      case Objective::SymbolStateInfo:
        return mutual_information(joint, {kAxisSymbolNow}, {kAxisStateNow});
    }
    return 0.0;
  };

  // Two passes over the enumeration stream: find the maximum, then collect
  // everything within eps of it. Values are recomputed identically, so the
  // second pass sees exactly the same floats.
  MaximizerSet out;
  out.max_bits = -std::numeric_limits<double>::infinity();
  {
    PartitionEnumerator en(mdp.num_states());
    while (auto p = en.next()) out.max_bits = std::max(out.max_bits, value_of(*p));
  }
  PartitionEnumerator en(mdp.num_states());
  while (auto p = en.next()) {
    const double bits = value_of(*p);
    if (bits >= out.max_bits - eps) {
      out.ids.push_back(en.current_id());
      out.partitions.push_back(std::move(*p));
      out.bits.push_back(bits);
    }
  }
  return out;
}

NormalizedReturn aliased_policy_return(const TabularMDP& mdp, const BlockPartition& partition,
                                       const Policy& policy, const Occupancy& start,
                                       double tie_tol, double tol) {
  const Occupancy mu = stationary_occupancy(mdp, policy);
  const QTable q = q_star(mdp, tol);
  const double optimal_return =
      greedy_mixture_return(mdp, greedy_policy_sets(q, tie_tol), start, tol);
  return normalized_return_impl(mdp, partition_to_representation(partition), mu, start,
                                optimal_return, tie_tol, tol);
}

ReturnDistribution return_distribution(const TabularMDP& mdp, const Policy& policy,
                                       int state, int action, int horizon) {
  if (horizon < 1) throw std::invalid_argument("return_distribution: horizon must be >= 1");
  if (state < 0 || state >= mdp.num_states() || action < 0 || action >= mdp.num_actions()) {
    throw std::invalid_argument("return_distribution: state or action out of range");
  }

  constexpr long long kNodeBudget = 10000000;
  long long nodes = 0;
  std::vector<std::pair<double, double>> mass;  // (return, probability)

  // DFS over nonzero-probability trajectories; gamma^i r(s_{t+i}) accumulates.
  auto expand = [&](auto&& self, int step, int s, int a, double ret, double prob) -> void {
    const double discount_pow = std::pow(mdp.discount, step);
    for (int s_next = 0; s_next < mdp.num_states(); ++s_next) {
      const double p_trans = mdp.transitions[a](s, s_next);
      if (p_trans == 0.0) continue;
      if (++nodes > kNodeBudget) {
        throw TrajectoryGuardError(
            "return_distribution: trajectory enumeration exceeded the budget of " +
                std::to_string(kNodeBudget) + " nodes",
            nodes);
      }
      const double ret_next = ret + discount_pow * mdp.rewards[s_next];
      const double prob_next = prob * p_trans;
      if (step == horizon) {
        mass.emplace_back(ret_next, prob_next);
        continue;
      }
      for (int a_next = 0; a_next < mdp.num_actions(); ++a_next) {
        const double p_act = policy.probs(s_next, a_next);
        if (p_act == 0.0) continue;
        self(self, step + 1, s_next, a_next, ret_next, prob_next * p_act);
      }
    }
  };
  expand(expand, 1, state, action, 0.0, 1.0);

  std::sort(mass.begin(), mass.end());
  ReturnDistribution dist;
  dist.horizon = horizon;
  dist.discount = mdp.discount;
  std::vector<double> support;
  std::vector<double> probs;
  for (const auto& [value, p] : mass) {
    if (!support.empty() && value - support.back() <= 1e-12) {
      probs.back() += p;
    } else {
      support.push_back(value);
      probs.push_back(p);
    }
  }
  dist.support = Eigen::Map<VectorXd>(support.data(), static_cast<long>(support.size()));
  dist.probs = Eigen::Map<VectorXd>(probs.data(), static_cast<long>(probs.size()));
  return dist;
}

ReturnIdentityReport check_return_identity(const TabularMDP& mdp, const Representation& rep,
                                           const Policy& policy, int horizon, double tol) {
  ValidationResult rv = validate_representation(rep);
  if (!rv.ok() || rep.num_states() != mdp.num_states()) {
    throw std::invalid_argument("check_return_identity: invalid representation");
  }

  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  const int Z = rep.num_symbols();
  const Occupancy mu = stationary_occupancy(mdp, policy);

  std::vector<std::vector<ReturnDistribution>> dists(S);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      dists[s].push_back(return_distribution(mdp, policy, s, a, horizon));
    }
  }

  // Merged return support across all (s, a) so distributions share a grid.
  std::vector<double> grid;
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      for (long i = 0; i < dists[s][a].support.size(); ++i) {
        grid.push_back(dists[s][a].support[i]);
      }
    }
  }
  std::sort(grid.begin(), grid.end());
  std::vector<double> merged;
  for (double v : grid) {
    if (merged.empty() || v - merged.back() > 1e-12) merged.push_back(v);
  }
  const int G = static_cast<int>(merged.size());

  auto on_grid = [&](const ReturnDistribution& d) {
    VectorXd binned = VectorXd::Zero(G);
    for (long i = 0; i < d.support.size(); ++i) {
      const auto it = std::lower_bound(merged.begin(), merged.end(), d.support[i] - 1e-12);
      binned[static_cast<int>(it - merged.begin())] += d.probs[i];
    }
    return binned;
  };
  std::vector<std::vector<VectorXd>> binned(S);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) binned[s].push_back(on_grid(dists[s][a]));
  }

  const VectorXd pz = rep.probs.transpose() * mu.probs;
  ReturnIdentityReport report;
  report.tol = tol;
  for (int z = 0; z < Z; ++z) {
    if (pz[z] < 1e-15) continue;  // symbol unsupported by the occupancy
    const VectorXd posterior =
        (mu.probs.array() * rep.probs.col(z).array()) / pz[z];  // p(s | z)
    for (int a = 0; a < A; ++a) {
      VectorXd mixture = VectorXd::Zero(G);
      for (int s = 0; s < S; ++s) {
        if (posterior[s] > 0.0) mixture += posterior[s] * binned[s][a];
      }
      for (int s = 0; s < S; ++s) {
        if (rep.probs(s, z) <= 0.0) continue;
        const double tv = 0.5 * (mixture - binned[s][a]).cwiseAbs().sum();
        report.deviations.push_back({z, s, a, tv});
        report.max_deviation = std::max(report.max_deviation, tv);
      }
    }
  }
  report.pass = report.max_deviation < tol;
  return report;
}

std::vector<ObjectiveReport> run_sweep(const TabularMDP& mdp, const Policy& policy,
                                       const Occupancy& start, const SweepConfig& config) {
  const int n = mdp.num_states();
  {
    PartitionEnumerator guard_check(n);  // throws the enumeration guard early
  }
  const long long count = static_cast<long long>(bell_number(n));

  const Occupancy mu = stationary_occupancy(mdp, policy);
  JointBuilder step1(mdp, policy, 1, mu);
  JointBuilder stepk =
      config.k == 1 ? step1 : JointBuilder(mdp, policy, config.k, mu);
  QTable q = q_star(mdp, config.solve_tol);
  std::vector<std::vector<int>> greedy = greedy_policy_sets(q, config.tie_tol);
  const double optimal_return = greedy_mixture_return(mdp, greedy, start, config.solve_tol);
  SweepContext ctx{mdp,   start,           config, mu, std::move(step1), std::move(stepk),
                   std::move(q), std::move(greedy), optimal_return};

  std::vector<ObjectiveReport> reports(count);
  const int workers = std::max(1, config.threads);
  if (workers == 1) {
    PartitionEnumerator en(n);
    while (auto p = en.next()) {
      reports[en.current_id()] = evaluate_partition(ctx, en.current_id(), *p);
    }
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        try {
          PartitionEnumerator en(n);
          while (auto p = en.next()) {
            const long long id = en.current_id();
            if (id % workers != w) continue;
            reports[id] = evaluate_partition(ctx, id, *p);
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  for (int obj = 0; obj < kNumObjectives; ++obj) {
    double best = -std::numeric_limits<double>::infinity();
    for (const ObjectiveReport& r : reports) {
      best = std::max(best, r.values.get(static_cast<Objective>(obj)));
    }
    for (ObjectiveReport& r : reports) {
      r.in_maximizer_set[obj] = r.values.get(static_cast<Objective>(obj)) >= best - config.eps;
    }
  }
  return reports;
}

ObjectiveSufficiencyResult objective_sufficiency(const TabularMDP& mdp, const Policy& policy,
                                                 Objective objective, int k, double eps,
                                                 double q_tol) {
  SweepConfig config;
  config.k = k;
  config.eps = eps;
  config.q_tol = q_tol;
  const std::vector<ObjectiveReport> reports =
      run_sweep(mdp, policy, uniform_occupancy(mdp.num_states()), config);

  ObjectiveSufficiencyResult result;
  for (const ObjectiveReport& r : reports) {
    if (!r.maximizes(objective)) continue;
    if (!r.verdict.q_sufficient) result.sufficient = false;
    result.maximizers.push_back(r);
  }
  return result;
}

}  // namespace repsuff
