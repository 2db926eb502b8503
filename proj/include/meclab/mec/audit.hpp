#pragma once

#include <string>
#include <vector>

#include "meclab/mec/env.hpp"

namespace meclab::mec {

enum class ConstraintKind {
  split_sum,      // per-task split fractions must sum to 1
  capacity,       // per-server committed frequency within capacity
  power_floor,    // transmit power at or above the channel floor
  energy_budget,  // per-server cumulative compute energy within budget
  range,          // chosen servers within reach at the used power
  coupling,       // larger split share gets no less frequency (equal spare)
};

const char* constraint_name(ConstraintKind kind);

// Violations are data, not exceptions.
struct ConstraintViolation {
  ConstraintKind kind;
  int device = -1;
  int server = -1;
  double value = 0.0;
  double bound = 0.0;
  std::string describe() const;
};

// Post-hoc audit of one executed slot. Empty report iff every constraint
// held.
std::vector<ConstraintViolation> audit_constraints(const StepRecord& record,
                                                   const EnvConfig& cfg);

}  // namespace meclab::mec
