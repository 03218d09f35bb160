#include "repsuff/mdp.hpp"

#include <cmath>
#include <sstream>

namespace repsuff {

namespace {

std::string index_name(const std::vector<std::string>& names, int i) {
  if (i >= 0 && i < static_cast<int>(names.size())) return names[i];
  return "#" + std::to_string(i);
}

void require_valid_mdp(const TabularMDP& mdp, const char* op) {
  ValidationResult r = validate_mdp(mdp);
  if (!r.ok()) {
    throw std::invalid_argument(std::string(op) + ": invalid MDP: " + r.summary());
  }
}

void require_valid_policy(const TabularMDP& mdp, const Policy& policy, const char* op,
                          bool need_full_support) {
  if (policy.probs.rows() != mdp.num_states() || policy.probs.cols() != mdp.num_actions()) {
    throw std::invalid_argument(std::string(op) + ": policy shape does not match the MDP");
  }
  for (int s = 0; s < mdp.num_states(); ++s) {
    const double sum = policy.probs.row(s).sum();
    if (std::abs(sum - 1.0) > kStochasticRowTol || policy.probs.row(s).minCoeff() < 0.0) {
      throw std::invalid_argument(std::string(op) + ": policy row for state " +
                                  index_name(mdp.state_names, s) + " is not a distribution");
    }
  }
  if (need_full_support && !policy.full_support()) {
    throw std::invalid_argument(std::string(op) + ": policy must have full support");
  }
}

void require_valid_distribution(const VectorXd& p, int n, const char* op) {
  if (p.size() != n) {
    throw std::invalid_argument(std::string(op) + ": distribution has wrong length");
  }
  if (std::abs(p.sum() - 1.0) > 1e-10 || p.minCoeff() < -1e-15) {
    throw std::invalid_argument(std::string(op) + ": not a probability distribution");
  }
}

}  // namespace

int TabularMDP::state_index(const std::string& name) const {
  for (int i = 0; i < num_states(); ++i) {
    if (state_names[i] == name) return i;
  }
  return -1;
}

int TabularMDP::action_index(const std::string& name) const {
  for (int i = 0; i < num_actions(); ++i) {
    if (action_names[i] == name) return i;
  }
  return -1;
}

std::string ValidationResult::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i > 0) os << "; ";
    os << violations[i].message;
  }
  return os.str();
}

ValidationResult validate_mdp(const TabularMDP& mdp) {
  ValidationResult result;
  auto add = [&](std::string message, int s = -1, int a = -1) {
    result.violations.push_back({std::move(message), s, a});
  };

  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  if (S == 0) add("MDP has no states");
  if (A == 0) add("MDP has no actions");

  if (mdp.rewards.size() != S) {
    add("reward vector has length " + std::to_string(mdp.rewards.size()) +
        ", expected one value per state (" + std::to_string(S) + ")");
  } else {
    for (int s = 0; s < S; ++s) {
      if (!std::isfinite(mdp.rewards[s])) {
        add("reward for state " + index_name(mdp.state_names, s) + " is not finite", s);
      }
    }
  }

  if (static_cast<int>(mdp.transitions.size()) != A) {
    add("transition tensor has " + std::to_string(mdp.transitions.size()) +
        " action slices, expected " + std::to_string(A));
  } else {
    for (int a = 0; a < A; ++a) {
      const MatrixXd& t = mdp.transitions[a];
      if (t.rows() != S || t.cols() != S) {
        add("transition matrix for action " + index_name(mdp.action_names, a) +
                " has shape " + std::to_string(t.rows()) + "x" + std::to_string(t.cols()),
            -1, a);
        continue;
      }
      for (int s = 0; s < S; ++s) {
        double sum = 0.0;
        bool entry_ok = true;
        for (int s2 = 0; s2 < S; ++s2) {
          const double p = t(s, s2);
          if (!(p >= -1e-15 && p <= 1.0 + kStochasticRowTol) || !std::isfinite(p)) {
            entry_ok = false;
          }
          sum += p;
        }
        if (!entry_ok) {
          add("transition probability out of [0,1] at state " +
                  index_name(mdp.state_names, s) + ", action " +
                  index_name(mdp.action_names, a),
              s, a);
        }
        if (std::abs(sum - 1.0) > kStochasticRowTol) {
          std::ostringstream os;
          os << "transition row does not sum to 1 (sum = " << sum << ") at state "
             << index_name(mdp.state_names, s) << ", action "
             << index_name(mdp.action_names, a);
          add(os.str(), s, a);
        }
      }
    }
  }

  if (!(mdp.discount >= 0.0 && mdp.discount < 1.0)) {
    std::ostringstream os;
    os << "discount must satisfy 0 <= gamma < 1 (got " << mdp.discount << ")";
    add(os.str());
  }
  return result;
}

Policy uniform_policy(const TabularMDP& mdp) {
  Policy p;
  p.probs = MatrixXd::Constant(mdp.num_states(), mdp.num_actions(),
                               1.0 / mdp.num_actions());
  return p;
}

Occupancy uniform_occupancy(int n_states) {
  Occupancy o;
  o.probs = VectorXd::Constant(n_states, 1.0 / n_states);
  return o;
}

MatrixXd policy_transition_matrix(const TabularMDP& mdp, const Policy& policy) {
  const int S = mdp.num_states();
  MatrixXd p = MatrixXd::Zero(S, S);
  for (int a = 0; a < mdp.num_actions(); ++a) {
    p.noalias() += policy.probs.col(a).asDiagonal() * mdp.transitions[a];
  }
  return p;
}

Occupancy stationary_occupancy(const TabularMDP& mdp, const Policy& policy,
                               const Occupancy& init, double tol, int max_iters) {
  require_valid_mdp(mdp, "stationary_occupancy");
  require_valid_policy(mdp, policy, "stationary_occupancy", /*need_full_support=*/true);
  require_valid_distribution(init.probs, mdp.num_states(), "stationary_occupancy");

  const MatrixXd p = policy_transition_matrix(mdp, policy);
  Eigen::RowVectorXd mu = init.probs.transpose();
  Eigen::RowVectorXd mu_next = mu * p;
  Eigen::RowVectorXd avg = 0.5 * (mu + mu_next);
  double residual = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < max_iters; ++iter) {
    mu = mu_next;
    mu_next = mu * p;
    mu_next /= mu_next.sum();
    Eigen::RowVectorXd avg_next = 0.5 * (mu + mu_next);
    residual = (avg_next - avg).cwiseAbs().maxCoeff();
    avg = avg_next;
    if (residual < tol) {
      Occupancy out;
      out.probs = avg.transpose().cwiseMax(0.0);
      out.probs /= out.probs.sum();
      return out;
    }
  }
  std::ostringstream os;
  os << "stationary_occupancy: no convergence after " << max_iters
     << " iterations (residual " << residual << ")";
  throw ConvergenceError(os.str(), residual);
}

Occupancy stationary_occupancy(const TabularMDP& mdp, const Policy& policy) {
  return stationary_occupancy(mdp, policy, uniform_occupancy(mdp.num_states()));
}

QTable q_star(const TabularMDP& mdp, double tol) {
  require_valid_mdp(mdp, "q_star");
  if (!(tol > 0.0)) throw std::invalid_argument("q_star: tol must be positive");

  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  MatrixXd q = MatrixXd::Zero(S, A);
  MatrixXd q_next(S, A);
  constexpr int kIterationCap = 2000000;
  double diff = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < kIterationCap && !(diff < tol); ++iter) {
    const VectorXd v = q.rowwise().maxCoeff();
    for (int a = 0; a < A; ++a) {
      q_next.col(a) = mdp.rewards + mdp.discount * (mdp.transitions[a] * v);
    }
    diff = (q_next - q).cwiseAbs().maxCoeff();
    q.swap(q_next);
  }
  if (!(diff < tol)) {
    throw ConvergenceError("q_star: value iteration did not reach the residual bound", diff);
  }

  // Measure the Bellman residual of the table actually returned.
  const VectorXd v = q.rowwise().maxCoeff();
  double residual = 0.0;
  for (int a = 0; a < A; ++a) {
    const VectorXd backup = mdp.rewards + mdp.discount * (mdp.transitions[a] * v);
    residual = std::max(residual, (backup - q.col(a)).cwiseAbs().maxCoeff());
  }
  return {std::move(q), residual};
}

std::vector<std::vector<int>> greedy_policy_sets(const QTable& q, double tie_tol) {
  std::vector<std::vector<int>> sets(q.values.rows());
  for (int s = 0; s < q.values.rows(); ++s) {
    const double best = q.values.row(s).maxCoeff();
    for (int a = 0; a < q.values.cols(); ++a) {
      if (q.values(s, a) >= best - tie_tol) sets[s].push_back(a);
    }
  }
  return sets;
}

VectorXd evaluate_policy(const TabularMDP& mdp, const Policy& policy, double tol) {
  require_valid_mdp(mdp, "evaluate_policy");
  require_valid_policy(mdp, policy, "evaluate_policy", /*need_full_support=*/false);

  const int S = mdp.num_states();
  const MatrixXd p = policy_transition_matrix(mdp, policy);
  const MatrixXd system = MatrixXd::Identity(S, S) - mdp.discount * p;
  const VectorXd v = system.partialPivLu().solve(mdp.rewards);

  const double residual =
      (mdp.rewards + mdp.discount * (p * v) - v).cwiseAbs().maxCoeff();
  if (!(residual < std::max(tol, 1e-12))) {
    throw ConvergenceError("evaluate_policy: solve residual above tolerance", residual);
  }
  return v;
}

double policy_return(const TabularMDP& mdp, const Policy& policy, const Occupancy& start,
                     double tol) {
  require_valid_distribution(start.probs, mdp.num_states(), "policy_return");
  return start.probs.dot(evaluate_policy(mdp, policy, tol));
}

VectorXd optimal_values(const QTable& q) { return q.values.rowwise().maxCoeff(); }

}  // namespace repsuff
