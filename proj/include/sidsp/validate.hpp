#pragma once

#include <string>
#include <vector>

#include "sidsp/model.hpp"

namespace sidsp {

enum class ViolationKind {
  Horizon,
  Window,
  Mask,
  ChannelConflict,
  AntennaConflict,
  Gap,
  Dual,
  UrgentDisplaced,
};

const char* violation_name(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string detail;
  std::vector<std::uint32_t> requests;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool feasible() const { return violations.empty(); }
};

std::string report_to_json(const ValidationReport& report, const Instance& inst);

// First-principles feasibility check of a schedule against the preprocessed
// instance. Shares no state with the generator: simultaneity is recomputed
// from raw entry times. `frozen_urgent`, when given, are entries that must
// appear unchanged (same request, same start).
ValidationReport validate(const Schedule& sched, const Instance& inst,
                          const std::vector<ScheduleEntry>* frozen_urgent = nullptr);

// Active-schedule test: no unscheduled request can be inserted and no entry
// can start earlier with all other entries fixed. Requires a feasible input.
bool is_active(const Schedule& sched, const Instance& inst);

}  // namespace sidsp
