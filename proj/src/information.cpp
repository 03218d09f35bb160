#include "repsuff/information.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace repsuff {

namespace {

constexpr double kNegativeMiClamp = -1e-12;

std::vector<std::string> axis_union(const std::vector<std::string>& a,
                                    const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  for (const auto& name : b) {
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  }
  return out;
}

bool disjoint(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  for (const auto& name : a) {
    if (std::find(b.begin(), b.end(), name) != b.end()) return false;
  }
  return true;
}

double plain_entropy(const JointTable& table) {
  double h = 0.0;
  const VectorXd& p = table.data();
  for (long long i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) h -= p[i] * std::log2(p[i]);
  }
  return h;
}

}  // namespace

JointTable::JointTable(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw std::invalid_argument("JointTable: no axes");
  std::set<std::string> names;
  long long total = 1;
  for (const Axis& axis : axes_) {
    if (axis.size < 1) throw std::invalid_argument("JointTable: axis '" + axis.name + "' empty");
    if (!names.insert(axis.name).second) {
      throw std::invalid_argument("JointTable: duplicate axis '" + axis.name + "'");
    }
    total *= axis.size;
  }
  strides_.assign(axes_.size(), 1);
  for (int i = static_cast<int>(axes_.size()) - 2; i >= 0; --i) {
    strides_[i] = strides_[i + 1] * axes_[i + 1].size;
  }
  probs_ = VectorXd::Zero(total);
}

int JointTable::axis(const std::string& name) const {
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (axes_[i].name == name) return static_cast<int>(i);
  }
  throw std::invalid_argument("JointTable: no axis named '" + name + "'");
}

bool JointTable::has_axis(const std::string& name) const {
  for (const Axis& axis : axes_) {
    if (axis.name == name) return true;
  }
  return false;
}

long long JointTable::flat_index(const std::vector<int>& index) const {
  if (index.size() != axes_.size()) {
    throw std::invalid_argument("JointTable: index rank mismatch");
  }
  long long flat = 0;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (index[i] < 0 || index[i] >= axes_[i].size) {
      throw std::out_of_range("JointTable: index out of range on axis " + axes_[i].name);
    }
    flat += strides_[i] * index[i];
  }
  return flat;
}

JointTable JointTable::marginal(const std::vector<std::string>& keep) const {
  std::vector<int> kept_axes;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (std::find(keep.begin(), keep.end(), axes_[i].name) != keep.end()) {
      kept_axes.push_back(static_cast<int>(i));
    }
  }
  for (const auto& name : keep) {
    if (!has_axis(name)) throw std::invalid_argument("marginal: no axis named '" + name + "'");
  }
  std::vector<Axis> out_axes;
  for (int i : kept_axes) out_axes.push_back(axes_[i]);
  if (out_axes.empty()) throw std::invalid_argument("marginal: must keep at least one axis");

  JointTable out(out_axes);
  std::vector<long long> out_strides(kept_axes.size(), 1);
  for (int i = static_cast<int>(kept_axes.size()) - 2; i >= 0; --i) {
    out_strides[i] = out_strides[i + 1] * out_axes[i + 1].size;
  }
  for (long long flat = 0; flat < probs_.size(); ++flat) {
    if (probs_[flat] == 0.0) continue;
    long long dest = 0;
    for (std::size_t j = 0; j < kept_axes.size(); ++j) {
      const int axis = kept_axes[j];
      const long long coord = (flat / strides_[axis]) % axes_[axis].size;
      dest += out_strides[j] * coord;
    }
    out.data()[dest] += probs_[flat];
  }
  return out;
}

double entropy(const JointTable& joint, const std::vector<std::string>& vars,
               const std::vector<std::string>& given) {
  const std::vector<std::string> all = axis_union(vars, given);
  const double h_all = plain_entropy(joint.marginal(all));
  if (given.empty()) return h_all;
  const double h_given = plain_entropy(joint.marginal(axis_union(given, {})));
  return h_all - h_given;
}

double mutual_information(const JointTable& joint, const std::vector<std::string>& x,
                          const std::vector<std::string>& y,
                          const std::vector<std::string>& given) {
  if (!disjoint(x, y) || !disjoint(x, given) || !disjoint(y, given)) {
    throw std::invalid_argument("mutual_information: x, y, given must be disjoint");
  }
  const double value = entropy(joint, x, given) - entropy(joint, x, axis_union(y, given));
  if (value < 0.0) {
    if (value < kNegativeMiClamp) {
      throw std::logic_error("mutual_information: value below the negativity clamp");
    }
    return 0.0;
  }
  return value;
}

std::string objective_name(Objective objective) {
  switch (objective) {
    case Objective::Forward: return "fwd";
    case Objective::StateOnly: return "state";
    case Objective::Inverse: return "inv";
    case Objective::InversePlusReward: return "inv+r";
    case Objective::SymbolStateInfo: return "I_ZS";
  }
  return "?";
}

std::optional<Objective> parse_objective(const std::string& name) {
  if (name == "fwd") return Objective::Forward;
  if (name == "state") return Objective::StateOnly;
  if (name == "inv") return Objective::Inverse;
  if (name == "inv+r") return Objective::InversePlusReward;
  if (name == "I_ZS") return Objective::SymbolStateInfo;
  return std::nullopt;
}

std::vector<MatrixXd> k_step_kernel(const TabularMDP& mdp, const Policy& policy, int k) {
  if (k < 1) throw std::invalid_argument("k_step_kernel: k must be >= 1");
  if (!policy.full_support()) {
    throw std::invalid_argument("k_step_kernel: policy must have full support");
  }
  std::vector<MatrixXd> kernel = mdp.transitions;
  if (k > 1) {
    const MatrixXd p = policy_transition_matrix(mdp, policy);
    MatrixXd p_pow = MatrixXd::Identity(mdp.num_states(), mdp.num_states());
    for (int i = 1; i < k; ++i) p_pow = p_pow * p;
    for (MatrixXd& m : kernel) m = m * p_pow;
  }
  return kernel;
}

JointBuilder::JointBuilder(const TabularMDP& mdp, const Policy& policy, int k)
    : JointBuilder(mdp, policy, k, stationary_occupancy(mdp, policy)) {}

JointBuilder::JointBuilder(const TabularMDP& mdp, const Policy& policy, int k,
                           Occupancy occupancy)
    : mdp_(mdp), policy_(policy), k_(k), occupancy_(std::move(occupancy)) {
  kernel_ = k_step_kernel(mdp_, policy_, k_);

  // Distinct reward values (merged within 1e-12) form the R_t alphabet.
  std::vector<double> sorted(mdp_.rewards.data(), mdp_.rewards.data() + mdp_.rewards.size());
  std::sort(sorted.begin(), sorted.end());
  for (double r : sorted) {
    if (reward_alphabet_.empty() || r - reward_alphabet_.back() > 1e-12) {
      reward_alphabet_.push_back(r);
    }
  }
  reward_symbol_.resize(mdp_.num_states());
  for (int s = 0; s < mdp_.num_states(); ++s) {
    const double r = mdp_.rewards[s];
    int best = 0;
    for (std::size_t i = 1; i < reward_alphabet_.size(); ++i) {
      if (std::abs(reward_alphabet_[i] - r) < std::abs(reward_alphabet_[best] - r)) {
        best = static_cast<int>(i);
      }
    }
    reward_symbol_[s] = best;
  }
}

JointTable JointBuilder::build(const Representation& rep,
                               const std::vector<std::string>& include) const {
  if (rep.num_states() != mdp_.num_states()) {
    throw std::invalid_argument("build_joint: representation does not match the MDP");
  }
  const int S = mdp_.num_states();
  const int A = mdp_.num_actions();
  const int Z = rep.num_symbols();

  const std::vector<std::pair<std::string, int>> canonical = {
      {kAxisStateNow, S}, {kAxisSymbolNow, Z}, {kAxisAction, A},
      {kAxisReward, static_cast<int>(reward_alphabet_.size())}, {kAxisSymbolNext, Z}};

  std::vector<Axis> axes;
  int pos_s = -1, pos_z = -1, pos_a = -1, pos_r = -1, pos_zn = -1;
  for (const auto& [name, size] : canonical) {
    if (std::find(include.begin(), include.end(), name) == include.end()) continue;
    const int at = static_cast<int>(axes.size());
    if (name == kAxisStateNow) pos_s = at;
    if (name == kAxisSymbolNow) pos_z = at;
    if (name == kAxisAction) pos_a = at;
    if (name == kAxisReward) pos_r = at;
    if (name == kAxisSymbolNext) pos_zn = at;
    axes.push_back({name, size});
  }
  if (axes.size() != include.size()) {
    throw std::invalid_argument("build_joint: unknown or duplicate axis in include list");
  }

  JointTable joint(axes);
  std::vector<int> index(axes.size(), 0);
  const bool needs_next = pos_zn >= 0;

  for (int s = 0; s < S; ++s) {
    const double mu_s = occupancy_.probs[s];
    if (mu_s == 0.0) continue;
    if (pos_s >= 0) index[pos_s] = s;
    if (pos_r >= 0) index[pos_r] = reward_symbol_[s];
    for (int a = 0; a < A; ++a) {
      const double w_sa = mu_s * policy_.probs(s, a);
      if (w_sa == 0.0) continue;
      if (pos_a >= 0) index[pos_a] = a;

      auto deposit = [&](double weight, int s_next) {
        // Distribute over the symbol axes; one-hot rows short-circuit below.
        if (pos_z < 0 && pos_zn < 0) {
          joint.at(index) += weight;
          return;
        }
        for (int z = 0; z < (pos_z >= 0 ? Z : 1); ++z) {
          double wz = weight;
          if (pos_z >= 0) {
            wz *= rep.probs(s, z);
            if (wz == 0.0) continue;
            index[pos_z] = z;
          }
          if (pos_zn < 0) {
            joint.at(index) += wz;
            continue;
          }
          for (int zn = 0; zn < Z; ++zn) {
            const double wzz = wz * rep.probs(s_next, zn);
            if (wzz == 0.0) continue;
            index[pos_zn] = zn;
            joint.at(index) += wzz;
          }
        }
      };

      if (!needs_next) {
        deposit(w_sa, 0);
      } else {
        const MatrixXd& kern = kernel_[a];
        for (int s_next = 0; s_next < S; ++s_next) {
          const double w = w_sa * kern(s, s_next);
          if (w == 0.0) continue;
          deposit(w, s_next);
        }
      }
    }
  }
  return joint;
}

JointTable build_joint(const TabularMDP& mdp, const Policy& policy,
                       const Representation& rep, int k,
                       const std::vector<std::string>& include) {
  return JointBuilder(mdp, policy, k).build(rep, include);
}

double ObjectiveValues::get(Objective objective) const {
  switch (objective) {
    case Objective::Forward: return forward;
    case Objective::StateOnly: return state_only;
    case Objective::Inverse: return inverse;
    case Objective::InversePlusReward: return inverse_plus_reward;
    case Objective::SymbolStateInfo: return symbol_state_info;
  }
  return 0.0;
}

ObjectiveValues all_objective_values(const JointBuilder& step1, const JointBuilder& stepk,
                                     const Representation& rep) {
  if (step1.k() != 1) throw std::invalid_argument("all_objective_values: step1 must have k=1");

  const JointTable joint1 = step1.build(rep, {kAxisSymbolNow, kAxisAction, kAxisSymbolNext});
  ObjectiveValues v;
  v.forward = mutual_information(joint1, {kAxisSymbolNext}, {kAxisSymbolNow, kAxisAction});

  if (stepk.k() == 1) {
    v.state_only = mutual_information(joint1, {kAxisSymbolNext}, {kAxisSymbolNow});
    v.inverse = mutual_information(joint1, {kAxisAction}, {kAxisSymbolNext}, {kAxisSymbolNow});
  } else {
    const JointTable jointk = stepk.build(rep, {kAxisSymbolNow, kAxisAction, kAxisSymbolNext});
    v.state_only = mutual_information(jointk, {kAxisSymbolNext}, {kAxisSymbolNow});
    v.inverse = mutual_information(jointk, {kAxisAction}, {kAxisSymbolNext}, {kAxisSymbolNow});
  }

  const JointTable reward_joint = step1.build(rep, {kAxisSymbolNow, kAxisReward});
  v.inverse_plus_reward =
      v.inverse + mutual_information(reward_joint, {kAxisReward}, {kAxisSymbolNow});

  const JointTable state_joint = step1.build(rep, {kAxisStateNow, kAxisSymbolNow});
  v.symbol_state_info =
      mutual_information(state_joint, {kAxisSymbolNow}, {kAxisStateNow});
  return v;
}

ObjectiveValue objective_value(const TabularMDP& mdp, const Policy& policy,
                               const Representation& rep, Objective objective, int k) {
  const int effective_k = objective == Objective::Forward ? 1 : k;
  JointBuilder builder(mdp, policy, effective_k);

  double bits = 0.0;
  switch (objective) {
    case Objective::Forward: {
      const JointTable j = builder.build(rep, {kAxisSymbolNow, kAxisAction, kAxisSymbolNext});
      bits = mutual_information(j, {kAxisSymbolNext}, {kAxisSymbolNow, kAxisAction});
      break;
    }
    case Objective::StateOnly: {
      const JointTable j = builder.build(rep, {kAxisSymbolNow, kAxisSymbolNext});
      bits = mutual_information(j, {kAxisSymbolNext}, {kAxisSymbolNow});
      break;
    }
    case Objective::Inverse: {
      const JointTable j = builder.build(rep, {kAxisSymbolNow, kAxisAction, kAxisSymbolNext});
      bits = mutual_information(j, {kAxisAction}, {kAxisSymbolNext}, {kAxisSymbolNow});
      break;
    }
    case Objective::InversePlusReward: {
      const JointTable j = builder.build(rep, {kAxisSymbolNow, kAxisAction, kAxisSymbolNext});
      const JointTable jr = builder.build(rep, {kAxisSymbolNow, kAxisReward});
      bits = mutual_information(j, {kAxisAction}, {kAxisSymbolNext}, {kAxisSymbolNow}) +
             mutual_information(jr, {kAxisReward}, {kAxisSymbolNow});
      break;
    }
    case Objective::SymbolStateInfo: {
      const JointTable j = builder.build(rep, {kAxisStateNow, kAxisSymbolNow});
      bits = mutual_information(j, {kAxisSymbolNow}, {kAxisStateNow});
      break;
    }
  }
  return {objective, effective_k, bits};
}

}  // namespace repsuff
