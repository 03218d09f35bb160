#pragma once

#include "repsuff/sufficiency.hpp"

#include <optional>
#include <ostream>

namespace repsuff {

struct SweepCsvOptions {
  std::optional<Objective> only;  // empty -> all four objectives
};

/// Writes one row per partition, sorted by I(Z;S) ascending with ties broken
/// by partition id. Byte-deterministic: fixed column order, %.12g values,
/// newline-terminated rows, header first.
void write_sweep_csv(std::ostream& out, const TabularMDP& mdp,
                     const std::vector<ObjectiveReport>& reports,
                     const SweepCsvOptions& options = {});

}  // namespace repsuff
