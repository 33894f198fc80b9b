#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sidsp/model.hpp"

namespace sidsp {

struct EvalStats {
  double phi = 0.0;
  int scheduled = 0;
  std::int64_t start_delay_sum_ms = 0;  // sum of S_j - r_j over scheduled requests
};

// Greedy serial schedule generator. Decodes an ordered list of requests into
// a feasible schedule by placing each request at its earliest feasible start,
// tracking satellite antenna and one-channel station availability as interval
// sets. Dual-pair violations trigger a full restart with the pair excluded.
//
// A generator is bound to one preprocessed instance. evaluate() and
// generate() may be called repeatedly; internal scratch is reused, so a
// generator instance is not safe for concurrent use (create one per thread).
class ScheduleGenerator {
 public:
  ScheduleGenerator(const Instance& inst, ObjectiveParams params);

  const Instance& instance() const { return *inst_; }
  const ObjectiveParams& params() const { return params_; }

  // Pre-consumes resources for fixed entries (request + start); subsequent
  // evaluate/generate calls schedule around them. Pass an empty vector to
  // clear. Frozen entries are not part of generate() output.
  void set_frozen(const std::vector<ScheduleEntry>& frozen);

  // Objective of the schedule decoded from `order` (frozen entries excluded
  // from the stats). Throws UnknownRequestId/DuplicateId on malformed input.
  EvalStats evaluate(std::span<const std::uint32_t> order);

  // Decoded schedule, entries sorted by start time. Channels and antennas are
  // assigned when no frozen base is set; with a frozen base the caller
  // assembles the full schedule first (see assign_channels_antennas).
  Schedule generate(std::span<const std::uint32_t> order);

  // Start of the given request after the last evaluate/generate, or nullopt.
  std::optional<TimeMs> last_start(std::uint32_t request) const;

  // When enabled, verifies the indicator-set invariants after every
  // placement (ordered sets, A inside H, Q1 inside Q, monotone consumption).
  void enable_self_check(bool on) { self_check_ = on; }

  // The dual-pair restart is on by default; tardiness_baseline() turns it
  // off because its hypothetical schedules one request in isolation.
  void enable_dual_restart(bool on) { dual_restart_ = on; }

 private:
  struct CompiledRequest {
    TimeMs release, deadline, duration;
    double priority, slope;
    std::uint32_t station;
    bool full_power, high_rel, tracked;
  };

  struct State {
    IntervalSet both_antennas_free;           // A
    IntervalSet half_power_free;              // H
    IntervalSet full_power_free;              // F
    std::vector<IntervalSet> station_normal;  // Q_g, one-channel stations only
    std::vector<IntervalSet> station_high;    // Q1_g, one-channel stations only
  };

  void run(std::span<const std::uint32_t> order);
  bool place(std::uint32_t rid);
  void check_order(std::span<const std::uint32_t> order);
  void self_check() const;

  const Instance* inst_;
  ObjectiveParams params_;
  TimeMs pad_;  // different-power gap after preprocessing
  std::vector<CompiledRequest> reqs_;
  State base_;
  std::vector<ScheduleEntry> frozen_;

  State state_;
  std::vector<TimeMs> start_of_;
  std::vector<std::uint8_t> member_, excluded_, seen_;
  std::vector<std::uint32_t> members_, dropped_;
  std::vector<Interval> x_parts_;
  bool self_check_ = false;
  bool dual_restart_ = true;
};

// Convenience wrappers constructing a fresh generator per call.
Schedule generate(std::span<const std::uint32_t> order, const Instance& inst,
                  const ObjectiveParams& params);
double evaluate(std::span<const std::uint32_t> order, const Instance& inst,
                const ObjectiveParams& params);

// Greedy sweep assignment of station channels and satellite antennas over all
// entries (sorted by start, then request). Capacity is guaranteed by the
// generator, so the sweep always succeeds on its output.
void assign_channels_antennas(Schedule& sched, const Instance& inst);

}  // namespace sidsp
