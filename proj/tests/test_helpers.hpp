#pragma once

// Test-only oracles, independent of the library's computation paths.

#include "repsuff/mdp.hpp"
#include "repsuff/representation.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace repsuff::test {

// Local copy of the SplitMix64 stream so test randomness does not depend on
// library internals.
struct TestRng {
  std::uint64_t state;
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

// Stationary distribution by direct linear solve of pi P = pi, sum pi = 1
// (replace one balance equation with the normalization row).
inline VectorXd stationary_by_linear_solve(const MatrixXd& p) {
  const int n = static_cast<int>(p.rows());
  MatrixXd system = p.transpose() - MatrixXd::Identity(n, n);
  system.row(0).setOnes();
  VectorXd rhs = VectorXd::Zero(n);
  rhs[0] = 1.0;
  return system.fullPivLu().solve(rhs);
}

// Finite-horizon evaluation sum_{t=0..T} gamma^t P^t r from a start
// distribution; with T large enough this pins policy evaluation without a
// linear solve.
inline double truncated_return(const MatrixXd& p_pi, const VectorXd& rewards, double gamma,
                               const VectorXd& start, int horizon) {
  Eigen::RowVectorXd dist = start.transpose();
  double total = 0.0;
  double discount = 1.0;
  for (int t = 0; t <= horizon; ++t) {
    total += discount * dist.dot(rewards);
    dist = dist * p_pi;
    discount *= gamma;
  }
  return total;
}

// Bell numbers by the Bell triangle.
inline unsigned long long bell_oracle(int n) {
  std::vector<unsigned long long> row{1};
  for (int i = 1; i < n; ++i) {
    std::vector<unsigned long long> next(row.size() + 1);
    next[0] = row.back();
    for (std::size_t j = 0; j < row.size(); ++j) next[j + 1] = next[j] + row[j];
    row.swap(next);
  }
  return n == 0 ? 1 : row.back();
}

// Brute-force mutual information I(X; Y | G) over an explicit list of joint
// outcomes, using the direct formula
//   sum p(x,y,g) log2[ p(g) p(x,y,g) / (p(x,g) p(y,g)) ]
// with plain hash maps. Shares nothing with JointTable.
struct BruteJoint {
  // each outcome: (coordinates, probability)
  std::vector<std::pair<std::vector<int>, double>> outcomes;

  double mi(const std::vector<int>& x_axes, const std::vector<int>& y_axes,
            const std::vector<int>& g_axes = {}) const {
    auto key = [](const std::vector<int>& coords, const std::vector<int>& axes) {
      std::vector<int> k;
      k.reserve(axes.size());
      for (int a : axes) k.push_back(coords[a]);
      return k;
    };
    auto join = [](std::vector<int> a, const std::vector<int>& b) {
      a.insert(a.end(), b.begin(), b.end());
      return a;
    };
    std::map<std::vector<int>, double> pxg, pyg, pg, pxyg;
    for (const auto& [coords, p] : outcomes) {
      if (p <= 0.0) continue;
      const auto kx = key(coords, x_axes);
      const auto ky = key(coords, y_axes);
      const auto kg = key(coords, g_axes);
      pxg[join(kx, kg)] += p;
      pyg[join(ky, kg)] += p;
      pg[kg] += p;
      pxyg[join(join(kx, ky), kg)] += p;
    }
    double total = 0.0;
    for (const auto& [coords, p] : outcomes) {
      if (p <= 0.0) continue;
      const auto kx = key(coords, x_axes);
      const auto ky = key(coords, y_axes);
      const auto kg = key(coords, g_axes);
      const double joint = pxyg.at(join(join(kx, ky), kg));
      const double num = pg.at(kg) * joint;
      const double den = pxg.at(join(kx, kg)) * pyg.at(join(ky, kg));
      // weight each joint cell once: accumulate via p / joint * joint = p
      total += p * std::log2(num / den);
    }
    return total;
  }
};

// Full (s_t, a, s_{t+1}, z_t, z_{t+1}, r) joint for k=1 built with plain
// loops, for cross-checking the information module.
inline BruteJoint brute_mdp_joint(const TabularMDP& mdp, const MatrixXd& policy,
                                  const MatrixXd& rep, const VectorXd& occupancy) {
  BruteJoint joint;
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  const int Z = static_cast<int>(rep.cols());
  // reward symbol: index of first state with the same reward
  std::vector<int> reward_symbol(S);
  for (int s = 0; s < S; ++s) {
    reward_symbol[s] = s;
    for (int s2 = 0; s2 < s; ++s2) {
      if (std::abs(mdp.rewards[s2] - mdp.rewards[s]) <= 1e-12) {
        reward_symbol[s] = reward_symbol[s2];
        break;
      }
    }
  }
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      for (int s2 = 0; s2 < S; ++s2) {
        for (int z = 0; z < Z; ++z) {
          for (int z2 = 0; z2 < Z; ++z2) {
            const double p = occupancy[s] * policy(s, a) * mdp.transitions[a](s, s2) *
                             rep(s, z) * rep(s2, z2);
            if (p > 0.0) {
              joint.outcomes.push_back({{s, a, s2, z, z2, reward_symbol[s]}, p});
            }
          }
        }
      }
    }
  }
  return joint;
}

// Axis order in brute_mdp_joint outcomes.
constexpr int kBruteS = 0, kBruteA = 1, kBruteSNext = 2, kBruteZ = 3, kBruteZNext = 4,
              kBruteR = 5;

// Closed forms for the jstate counterexample (derived by solving the Bellman
// equations by hand; reward sits on s2 only, uniform policy).
struct JstateClosedForms {
  double gamma;
  double den() const { return 1.0 - gamma * gamma; }
  // optimal values per state
  double v_opt_s0() const { return gamma / den(); }
  double v_opt_s1() const { return gamma * gamma / den(); }
  double v_opt_s2() const { return 1.0 / den(); }
  double v_opt_s3() const { return v_opt_s0(); }
  double q_opt_s0_a0() const { return gamma * v_opt_s1(); }
  double q_opt_s0_a1() const { return gamma * v_opt_s2(); }
  // uniform-policy values
  double v_unif_s0() const { return 0.5 * gamma / den(); }
  double v_unif_s1() const { return 0.5 * gamma * gamma / den(); }
  double v_unif_s2() const { return (1.0 - 0.5 * gamma * gamma) / den(); }
  // uniform-start aggregates
  double optimal_return_uniform_start() const { return (1.0 + gamma) / (4.0 * (1.0 - gamma)); }
  double uniform_policy_return_uniform_start() const { return 1.0 / (4.0 * (1.0 - gamma)); }
};

// Random full-support policy with simplex rows.
inline Policy random_policy(TestRng& rng, int n_states, int n_actions) {
  Policy p;
  p.probs = MatrixXd::Zero(n_states, n_actions);
  for (int s = 0; s < n_states; ++s) {
    double sum = 0.0;
    for (int a = 0; a < n_actions; ++a) {
      const double v = 0.05 + rng.unit();
      p.probs(s, a) = v;
      sum += v;
    }
    p.probs.row(s) /= sum;
  }
  return p;
}

// Random canonical partition of n states.
inline BlockPartition random_partition(TestRng& rng, int n) {
  std::vector<int> block_of(n);
  int max_block = 0;
  block_of[0] = 0;
  for (int s = 1; s < n; ++s) {
    block_of[s] = rng.below(max_block + 2);
    max_block = std::max(max_block, block_of[s]);
  }
  return partition_from_block_of(block_of);
}

// Random refinement: split each block of the input into up to two sub-blocks.
inline BlockPartition random_refinement(TestRng& rng, const BlockPartition& coarse) {
  std::vector<int> block_of(coarse.num_states());
  int next_block = 0;
  for (const auto& block : coarse.blocks) {
    const int left = next_block++;
    int right = -1;
    for (std::size_t i = 0; i < block.size(); ++i) {
      if (i == 0 || rng.below(2) == 0) {
        block_of[block[i]] = left;
      } else {
        if (right < 0) right = next_block++;
        block_of[block[i]] = right;
      }
    }
  }
  return partition_from_block_of(block_of);
}

inline bool mdp_approx_equal(const TabularMDP& a, const TabularMDP& b, double tol) {
  if (a.state_names != b.state_names || a.action_names != b.action_names) return false;
  if (std::abs(a.discount - b.discount) > tol) return false;
  if ((a.rewards - b.rewards).cwiseAbs().maxCoeff() > tol) return false;
  for (std::size_t i = 0; i < a.transitions.size(); ++i) {
    if ((a.transitions[i] - b.transitions[i]).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

}  // namespace repsuff::test
