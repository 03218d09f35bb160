#include "repsuff/representation.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace repsuff {

BlockPartition partition_from_block_of(const std::vector<int>& block_of) {
  const int n = static_cast<int>(block_of.size());
  if (n == 0) throw std::invalid_argument("partition_from_block_of: empty assignment");

  // Relabel by first appearance so the result is canonical.
  std::map<int, int> relabel;
  BlockPartition p;
  p.block_of.resize(n);
  for (int s = 0; s < n; ++s) {
    auto [it, inserted] = relabel.try_emplace(block_of[s], static_cast<int>(p.blocks.size()));
    if (inserted) p.blocks.emplace_back();
    p.block_of[s] = it->second;
    p.blocks[it->second].push_back(s);
  }
  return p;
}

BlockPartition identity_partition(int n_states) {
  std::vector<int> block_of(n_states);
  for (int s = 0; s < n_states; ++s) block_of[s] = s;
  return partition_from_block_of(block_of);
}

BlockPartition single_block_partition(int n_states) {
  return partition_from_block_of(std::vector<int>(n_states, 0));
}

unsigned long long bell_number(int n) {
  if (n < 0 || n > 25) throw std::invalid_argument("bell_number: n out of range");
  if (n == 0) return 1;
  std::vector<unsigned long long> row{1};
  for (int i = 1; i < n; ++i) {
    std::vector<unsigned long long> next(row.size() + 1);
    next[0] = row.back();
    for (std::size_t j = 0; j < row.size(); ++j) next[j + 1] = next[j] + row[j];
    row.swap(next);
  }
  return row.back();
}

double bell_number_estimate(int n) {
  if (n <= 0) return 1.0;
  std::vector<double> row{1.0};
  for (int i = 1; i < n; ++i) {
    std::vector<double> next(row.size() + 1);
    next[0] = row.back();
    for (std::size_t j = 0; j < row.size(); ++j) next[j + 1] = next[j] + row[j];
    row.swap(next);
  }
  return row.back();
}

PartitionEnumerator::PartitionEnumerator(int n_states) : n_(n_states) {
  if (n_ < 1) throw std::invalid_argument("enumerate_partitions: n_states must be >= 1");
  if (n_ > kMaxEnumerationStates) {
    std::ostringstream os;
    os << "enumerate_partitions: " << n_ << " states would require Bell(" << n_
       << ") = " << bell_number_estimate(n_) << " partitions; the guard allows at most "
       << kMaxEnumerationStates << " states";
    throw EnumerationGuardError(os.str());
  }
  rgs_.assign(n_, 0);
}

std::optional<BlockPartition> PartitionEnumerator::next() {
  if (done_) return std::nullopt;
  if (first_) {
    first_ = false;
    id_ = 0;
    return partition_from_block_of(rgs_);
  }
  for (int i = n_ - 1; i >= 1; --i) {
    const int prefix_max = *std::max_element(rgs_.begin(), rgs_.begin() + i);
    if (rgs_[i] <= prefix_max) {
      ++rgs_[i];
      std::fill(rgs_.begin() + i + 1, rgs_.end(), 0);
      ++id_;
      return partition_from_block_of(rgs_);
    }
  }
  done_ = true;
  return std::nullopt;
}

std::vector<BlockPartition> enumerate_partitions(int n_states) {
  PartitionEnumerator en(n_states);
  std::vector<BlockPartition> out;
  while (auto p = en.next()) out.push_back(std::move(*p));
  return out;
}

Representation partition_to_representation(const BlockPartition& partition) {
  Representation rep;
  rep.probs = MatrixXd::Zero(partition.num_states(), partition.num_blocks());
  for (int s = 0; s < partition.num_states(); ++s) {
    rep.probs(s, partition.block_of[s]) = 1.0;
  }
  return rep;
}

ValidationResult validate_representation(const Representation& rep) {
  ValidationResult result;
  auto add = [&](std::string message, int s = -1) {
    result.violations.push_back({std::move(message), s, -1});
  };
  const int S = rep.num_states();
  const int Z = rep.num_symbols();
  if (S == 0 || Z == 0) add("representation table is empty");
  if (Z > S) add("representation has more symbols than states");
  for (int s = 0; s < S; ++s) {
    if (std::abs(rep.probs.row(s).sum() - 1.0) > kStochasticRowTol ||
        rep.probs.row(s).minCoeff() < 0.0) {
      add("representation row for state " + std::to_string(s) + " is not a distribution", s);
    }
  }
  for (int z = 0; z < Z; ++z) {
    if (S > 0 && rep.probs.col(z).maxCoeff() <= 0.0) {
      add("representation symbol " + std::to_string(z) + " has no mass under any state");
    }
  }
  return result;
}

bool aliases(const Representation& rep, int s1, int s2, double tol) {
  return (rep.probs.row(s1) - rep.probs.row(s2)).cwiseAbs().maxCoeff() < tol;
}

std::vector<std::pair<int, int>> aliased_pairs(const Representation& rep, double tol) {
  std::vector<std::pair<int, int>> pairs;
  for (int s1 = 0; s1 < rep.num_states(); ++s1) {
    for (int s2 = s1 + 1; s2 < rep.num_states(); ++s2) {
      if (aliases(rep, s1, s2, tol)) pairs.emplace_back(s1, s2);
    }
  }
  return pairs;
}

AggregateMDP aggregate_with_occupancy(const TabularMDP& mdp, const Representation& rep,
                                      const Occupancy& occupancy) {
  if (rep.num_states() != mdp.num_states()) {
    throw std::invalid_argument("aggregate_mdp: representation does not match the MDP");
  }
  ValidationResult rv = validate_representation(rep);
  if (!rv.ok()) {
    throw std::invalid_argument("aggregate_mdp: invalid representation: " + rv.summary());
  }

  const int S = mdp.num_states();
  const int Z = rep.num_symbols();
  const VectorXd pz = rep.probs.transpose() * occupancy.probs;
  for (int z = 0; z < Z; ++z) {
    if (pz[z] < 1e-15) {
      throw std::runtime_error("aggregate_mdp: symbol z" + std::to_string(z) +
                               " has zero occupancy mass (dead symbol)");
    }
  }

  MatrixXd posterior(Z, S);  // p(s | z)
  for (int z = 0; z < Z; ++z) {
    posterior.row(z) =
        (occupancy.probs.array() * rep.probs.col(z).array()).transpose() / pz[z];
  }

  AggregateMDP agg;
  agg.state_given_symbol = posterior;
  agg.construction_occupancy = occupancy;
  agg.mdp.action_names = mdp.action_names;
  agg.mdp.discount = mdp.discount;
  agg.mdp.state_names.reserve(Z);
  for (int z = 0; z < Z; ++z) agg.mdp.state_names.push_back("z" + std::to_string(z));
  agg.mdp.rewards = posterior * mdp.rewards;
  agg.mdp.transitions.reserve(mdp.num_actions());
  for (int a = 0; a < mdp.num_actions(); ++a) {
    agg.mdp.transitions.push_back(posterior * mdp.transitions[a] * rep.probs);
  }
  return agg;
}

AggregateMDP aggregate_mdp(const TabularMDP& mdp, const Representation& rep,
                           const Policy& policy) {
  return aggregate_with_occupancy(mdp, rep, stationary_occupancy(mdp, policy));
}

Policy lift_policy(const Representation& rep, const Policy& z_policy) {
  if (z_policy.probs.rows() != rep.num_symbols()) {
    throw std::invalid_argument("lift_policy: symbol policy does not match the representation");
  }
  Policy lifted;
  lifted.probs = rep.probs * z_policy.probs;
  return lifted;
}

std::string partition_literal(const BlockPartition& partition,
                              const std::vector<std::string>& state_names) {
  if (static_cast<int>(state_names.size()) != partition.num_states()) {
    throw std::invalid_argument("partition_literal: name list does not match the partition");
  }
  std::ostringstream os;
  os << '{';
  for (std::size_t b = 0; b < partition.blocks.size(); ++b) {
    if (b > 0) os << '|';
    for (std::size_t i = 0; i < partition.blocks[b].size(); ++i) {
      if (i > 0) os << ',';
      os << state_names[partition.blocks[b][i]];
    }
  }
  os << '}';
  return os.str();
}

namespace {

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  std::size_t e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace

BlockPartition parse_partition_literal(const std::string& text,
                                       const std::vector<std::string>& state_names) {
  const std::string body = trimmed(text);
  if (body.size() < 2 || body.front() != '{' || body.back() != '}') {
    throw std::invalid_argument("partition literal must be enclosed in braces: " + text);
  }
  const int n = static_cast<int>(state_names.size());
  std::vector<int> block_of(n, -1);
  int block = 0;
  std::size_t pos = 1;
  const std::size_t end = body.size() - 1;
  while (pos <= end) {
    std::size_t bar = body.find('|', pos);
    if (bar == std::string::npos || bar > end) bar = end;
    std::string block_text = body.substr(pos, bar - pos);
    std::size_t mpos = 0;
    bool any = false;
    while (mpos <= block_text.size()) {
      std::size_t comma = block_text.find(',', mpos);
      if (comma == std::string::npos) comma = block_text.size();
      const std::string name = trimmed(block_text.substr(mpos, comma - mpos));
      if (!name.empty()) {
        int idx = -1;
        for (int s = 0; s < n; ++s) {
          if (state_names[s] == name) {
            idx = s;
            break;
          }
        }
        if (idx < 0) {
          throw std::invalid_argument("partition literal names unknown state '" + name + "'");
        }
        if (block_of[idx] != -1) {
          throw std::invalid_argument("partition literal lists state '" + name + "' twice");
        }
        block_of[idx] = block;
        any = true;
      }
      mpos = comma + 1;
    }
    if (!any) throw std::invalid_argument("partition literal has an empty block");
    ++block;
    pos = bar + 1;
  }
  for (int s = 0; s < n; ++s) {
    if (block_of[s] == -1) {
      throw std::invalid_argument("partition literal does not cover state '" +
                                  state_names[s] + "'");
    }
  }
  return partition_from_block_of(block_of);
}

}  // namespace repsuff
