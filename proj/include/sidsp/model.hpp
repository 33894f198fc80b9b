#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sidsp/interval.hpp"

namespace sidsp {

constexpr TimeMs kDayMs = 86'400'000;

struct Request {
  std::string id;
  TimeMs release = 0;
  TimeMs deadline = 0;
  TimeMs duration = 0;
  double priority = 0.0;
  std::string station;
  bool urgent = false;
  bool high_reliability = false;
};

enum class StationPower { HalfPower, FullPower };

struct GroundStation {
  std::string id;
  StationPower power = StationPower::HalfPower;
  int channels = 1;
  IntervalSet normal_masks;
  IntervalSet high_rel_masks;
};

struct Instance {
  TimeMs horizon_end = kDayMs;
  TimeMs delta = 0;       // gap between same-power downlinks; absorbed by preprocess()
  TimeMs big_delta = 0;   // gap between different-power downlinks
  bool preprocessed = false;
  std::vector<GroundStation> stations;
  std::vector<Request> requests;
  std::vector<std::pair<std::string, std::string>> dual_pairs;

  // Derived lookups, rebuilt by reindex().
  std::vector<std::uint32_t> station_of;   // request index -> station index
  std::vector<std::int32_t> dual_partner;  // request index -> partner index, -1 if none

  // Rebuilds the derived tables and checks all structural invariants.
  void reindex();

  std::uint32_t request_count() const { return static_cast<std::uint32_t>(requests.size()); }
  std::optional<std::uint32_t> find_request(const std::string& id) const;
  std::optional<std::uint32_t> find_station(const std::string& id) const;
};

// Absorbs the same-power gap delta into durations, deadlines, masks and the
// horizon, and replaces big_delta with big_delta - delta. Returns a copy.
Instance preprocess(const Instance& inst);

struct ObjectiveParams {
  double alpha = 0.5;
};

struct ScheduleEntry {
  std::uint32_t request = 0;
  TimeMs start = 0;
  int channel = 0;
  int antenna = 0;
};

struct Schedule {
  std::vector<ScheduleEntry> entries;
  std::optional<double> objective_cached;
};

double objective(const Schedule& sched, const Instance& inst, const ObjectiveParams& params);

// Earliest start of the request on an otherwise empty satellite, or nullopt
// if it fits no mask even alone.
std::optional<TimeMs> tardiness_baseline(const Instance& inst, std::uint32_t request);

struct MetricsReport {
  int total_requests = 0;
  int urgent_requests = 0;
  int scheduled = 0;
  int unscheduled_total = 0;
  int unscheduled_urgent = 0;
  double avg_tardiness_urgent_ms = 0.0;  // mean S_j - tau_j over scheduled urgent
  double avg_tardiness_ms = 0.0;         // mean S_j - tau_j over all scheduled
  double avg_start_delay_ms = 0.0;       // t(S): mean S_j - r_j over all scheduled
};

MetricsReport report_metrics(const Schedule& sched, const Instance& inst);

}  // namespace sidsp
