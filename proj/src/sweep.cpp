#include "repsuff/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace repsuff {

namespace {

std::string csv_number(double value) {
  if (std::isnan(value)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

const char* csv_bool(bool value) { return value ? "true" : "false"; }

const char* value_column(Objective objective) {
  switch (objective) {
    case Objective::Forward: return "J_fwd";
    case Objective::StateOnly: return "J_state";
    case Objective::Inverse: return "J_inv";
    case Objective::InversePlusReward: return "J_inv_plus_R";
    case Objective::SymbolStateInfo: return "I_ZS";
  }
  return "?";
}

}  // namespace

void write_sweep_csv(std::ostream& out, const TabularMDP& mdp,
                     const std::vector<ObjectiveReport>& reports,
                     const SweepCsvOptions& options) {
  std::vector<Objective> columns;
  if (options.only.has_value()) {
    columns = {*options.only};
  } else {
    columns = {Objective::Forward, Objective::StateOnly, Objective::Inverse,
               Objective::InversePlusReward};
  }

  out << "partition_id,blocks,I_ZS";
  for (Objective o : columns) out << ',' << value_column(o);
  out << ",pi_sufficient,q_sufficient,normalized_return";
  for (Objective o : columns) out << ",max_" << value_column(o);
  out << '\n';

  std::vector<const ObjectiveReport*> order;
  order.reserve(reports.size());
  for (const ObjectiveReport& r : reports) order.push_back(&r);
  std::sort(order.begin(), order.end(), [](const ObjectiveReport* a, const ObjectiveReport* b) {
    if (a->values.symbol_state_info != b->values.symbol_state_info) {
      return a->values.symbol_state_info < b->values.symbol_state_info;
    }
    return a->partition_id < b->partition_id;
  });

  for (const ObjectiveReport* r : order) {
    out << r->partition_id << ",\"" << partition_literal(r->partition, mdp.state_names)
        << "\"," << csv_number(r->values.symbol_state_info);
    for (Objective o : columns) out << ',' << csv_number(r->values.get(o));
    out << ',' << csv_bool(r->verdict.pi_sufficient) << ','
        << csv_bool(r->verdict.q_sufficient) << ','
        << csv_number(r->ret.normalized.value_or(std::nan("")));
    for (Objective o : columns) out << ',' << csv_bool(r->maximizes(o));
    out << '\n';
  }
}

}  // namespace repsuff
