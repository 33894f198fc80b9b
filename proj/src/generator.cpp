#include "sidsp/generator.hpp"

#include <algorithm>
#include <array>
#include <cassert>

#include "sidsp/error.hpp"

namespace sidsp {

namespace {

constexpr TimeMs kUnscheduled = -1;

// Earliest x with [x, x + p] inside one interval of `avail`, one of `mask`
// and the window [release, deadline]; kNoFit if none exists.
constexpr TimeMs kNoFit = -1;

TimeMs earliest_fit(const std::vector<Interval>& avail, const std::vector<Interval>& mask,
                    TimeMs release, TimeMs deadline, TimeMs duration) {
  TimeMs needed = release + duration;
  auto ai = std::partition_point(avail.begin(), avail.end(),
                                 [&](const Interval& iv) { return iv.hi < needed; });
  auto mi = std::partition_point(mask.begin(), mask.end(),
                                 [&](const Interval& iv) { return iv.hi < needed; });
  TimeMs latest_start = deadline - duration;
  while (ai != avail.end() && mi != mask.end()) {
    TimeMs lo = std::max(std::max(ai->lo, mi->lo), release);
    if (lo > latest_start) return kNoFit;
    TimeMs hi = std::min(ai->hi, mi->hi);
    if (hi - lo >= duration) return lo;
    if (ai->hi < mi->hi) {
      ++ai;
    } else {
      ++mi;
    }
  }
  return kNoFit;
}

}  // namespace

ScheduleGenerator::ScheduleGenerator(const Instance& inst, ObjectiveParams params)
    : inst_(&inst), params_(params) {
  assert(inst.preprocessed);
  pad_ = inst.big_delta;

  reqs_.resize(inst.request_count());
  for (std::uint32_t j = 0; j < inst.request_count(); ++j) {
    const Request& rq = inst.requests[j];
    const GroundStation& gs = inst.stations[inst.station_of[j]];
    CompiledRequest& c = reqs_[j];
    c.release = rq.release;
    c.deadline = rq.deadline;
    c.duration = rq.duration;
    c.priority = rq.priority;
    TimeMs slack = rq.deadline - rq.duration - rq.release;
    c.slope = slack > 0 ? params.alpha * rq.priority / static_cast<double>(slack) : 0.0;
    c.station = inst.station_of[j];
    c.full_power = gs.power == StationPower::FullPower;
    c.high_rel = rq.high_reliability;
    c.tracked = gs.channels == 1;
  }

  base_.both_antennas_free = IntervalSet(Interval{0, inst.horizon_end});
  base_.half_power_free = base_.both_antennas_free;
  base_.full_power_free = base_.both_antennas_free;
  base_.station_normal.resize(inst.stations.size());
  base_.station_high.resize(inst.stations.size());
  for (std::uint32_t s = 0; s < inst.stations.size(); ++s) {
    if (inst.stations[s].channels == 1) {
      base_.station_normal[s] = inst.stations[s].normal_masks;
      base_.station_high[s] = inst.stations[s].high_rel_masks;
    }
  }

  start_of_.assign(inst.request_count(), kUnscheduled);
  member_.assign(inst.request_count(), 0);
  excluded_.assign(inst.request_count(), 0);
  seen_.assign(inst.request_count(), 0);
}

void ScheduleGenerator::set_frozen(const std::vector<ScheduleEntry>& frozen) {
  // Rebuild the pristine base, then replay the frozen downlinks through the
  // same update rules at their fixed starts.
  frozen_ = frozen;
  base_.both_antennas_free = IntervalSet(Interval{0, inst_->horizon_end});
  base_.half_power_free = base_.both_antennas_free;
  base_.full_power_free = base_.both_antennas_free;
  for (std::uint32_t s = 0; s < inst_->stations.size(); ++s) {
    if (inst_->stations[s].channels == 1) {
      base_.station_normal[s] = inst_->stations[s].normal_masks;
      base_.station_high[s] = inst_->stations[s].high_rel_masks;
    } else {
      base_.station_normal[s].clear();
      base_.station_high[s].clear();
    }
  }

  std::vector<ScheduleEntry> replay = frozen_;
  std::sort(replay.begin(), replay.end(), [](const ScheduleEntry& a, const ScheduleEntry& b) {
    return a.start < b.start || (a.start == b.start && a.request < b.request);
  });
  State saved = state_;
  state_ = base_;
  for (const ScheduleEntry& e : replay) {
    if (e.request >= reqs_.size()) raise(Errc::UnknownRequestId, "frozen entry unknown request");
    const CompiledRequest& q = reqs_[e.request];
    TimeMs s = e.start, t = e.start + q.duration;
    if (q.full_power) {
      state_.full_power_free.subtract({s, t});
      state_.half_power_free.subtract({s - pad_, t + pad_});
      state_.both_antennas_free.subtract({s - pad_, t + pad_});
    } else {
      x_parts_.clear();
      TimeMs cur = s;
      for (const Interval& a : state_.both_antennas_free.intervals()) {
        if (a.hi <= s) continue;
        if (a.lo >= t) break;
        if (a.lo > cur) x_parts_.push_back({cur, std::min(a.lo, t)});
        cur = std::max(cur, a.hi);
        if (cur >= t) break;
      }
      if (cur < t) x_parts_.push_back({cur, t});
      for (Interval seg : x_parts_) state_.half_power_free.subtract(seg);
      state_.both_antennas_free.subtract({s, t});
      state_.full_power_free.subtract({s - pad_, t + pad_});
      if (q.tracked) {
        state_.station_normal[q.station].subtract({s, t});
        state_.station_high[q.station].subtract({s, t});
      }
    }
  }
  base_ = state_;
  state_ = saved;
}

void ScheduleGenerator::check_order(std::span<const std::uint32_t> order) {
  for (std::uint32_t rid : order) {
    if (rid >= reqs_.size()) raise(Errc::UnknownRequestId, "order references unknown request");
    if (seen_[rid]) {
      for (std::uint32_t r : order)
        if (r < seen_.size()) seen_[r] = 0;
      raise(Errc::DuplicateId, "order contains request " + inst_->requests[rid].id + " twice");
    }
    seen_[rid] = 1;
  }
  for (std::uint32_t rid : order) seen_[rid] = 0;
}

bool ScheduleGenerator::place(std::uint32_t rid) {
  const CompiledRequest& q = reqs_[rid];
  const std::vector<Interval>* avail;
  const std::vector<Interval>* mask;
  if (q.full_power) {
    avail = &state_.full_power_free.intervals();
  } else {
    avail = &state_.half_power_free.intervals();
  }
  if (q.tracked) {
    mask = q.high_rel ? &state_.station_high[q.station].intervals()
                      : &state_.station_normal[q.station].intervals();
  } else {
    const GroundStation& gs = inst_->stations[q.station];
    mask = q.high_rel ? &gs.high_rel_masks.intervals() : &gs.normal_masks.intervals();
  }

  TimeMs s = earliest_fit(*avail, *mask, q.release, q.deadline, q.duration);
  if (s == kNoFit) {
    start_of_[rid] = kUnscheduled;
    return false;
  }
  start_of_[rid] = s;
  TimeMs t = s + q.duration;

  if (q.full_power) {
    state_.full_power_free.subtract({s, t});
    state_.half_power_free.subtract({s - pad_, t + pad_});
    // Not required by the update rules (no half-power downlink can land in
    // the removed band anyway), but keeps A inside H.
    state_.both_antennas_free.subtract({s - pad_, t + pad_});
  } else {
    // X: the parts of [s, t] where exactly one antenna was free before this
    // placement; those times drop out of H entirely.
    x_parts_.clear();
    TimeMs cur = s;
    for (const Interval& a : state_.both_antennas_free.intervals()) {
      if (a.hi <= s) continue;
      if (a.lo >= t) break;
      if (a.lo > cur) x_parts_.push_back({cur, std::min(a.lo, t)});
      cur = std::max(cur, a.hi);
      if (cur >= t) break;
    }
    if (cur < t) x_parts_.push_back({cur, t});
    for (Interval seg : x_parts_) state_.half_power_free.subtract(seg);
    state_.both_antennas_free.subtract({s, t});
    state_.full_power_free.subtract({s - pad_, t + pad_});
    if (q.tracked) {
      state_.station_normal[q.station].subtract({s, t});
      state_.station_high[q.station].subtract({s, t});
    }
  }
  return true;
}

void ScheduleGenerator::self_check() const {
  auto inside = [](const IntervalSet& a, const IntervalSet& b) {
    for (Interval iv : a.intervals())
      if (!is_subinterval(iv, b)) return false;
    return true;
  };
  bool ok = state_.both_antennas_free.valid() && state_.half_power_free.valid() &&
            state_.full_power_free.valid() &&
            inside(state_.both_antennas_free, state_.half_power_free);
  for (std::uint32_t s = 0; ok && s < state_.station_normal.size(); ++s) {
    ok = state_.station_normal[s].valid() && state_.station_high[s].valid() &&
         inside(state_.station_high[s], state_.station_normal[s]);
  }
  if (!ok) raise(Errc::InvariantViolation, "generator indicator sets corrupted");
}

void ScheduleGenerator::run(std::span<const std::uint32_t> order) {
  members_.assign(order.begin(), order.end());
  dropped_.clear();
  for (std::uint32_t rid : members_) {
    member_[rid] = 1;
    excluded_[rid] = 0;
  }

  for (;;) {
    state_ = base_;
    for (std::uint32_t rid : members_) start_of_[rid] = kUnscheduled;
    TimeMs watermark[3] = {0, 0, 0};
    bool first_placement = true;
    for (std::uint32_t rid : members_) {
      if (excluded_[rid]) continue;
      bool placed = place(rid);
      if (self_check_ && placed) {
        self_check();
        TimeMs la = state_.both_antennas_free.total_length();
        TimeMs lh = state_.half_power_free.total_length();
        TimeMs lf = state_.full_power_free.total_length();
        if (!first_placement && (la > watermark[0] || lh > watermark[1] || lf > watermark[2]))
          raise(Errc::InvariantViolation, "indicator set grew during generation");
        watermark[0] = la;
        watermark[1] = lh;
        watermark[2] = lf;
        first_placement = false;
      }
    }

    // Dual-pair consistency: both scheduled or neither. On the first
    // violation, exclude the pair and restart from scratch.
    if (!dual_restart_) break;
    std::int32_t drop_a = -1, drop_b = -1;
    for (std::uint32_t j = 0; j < reqs_.size() && drop_a < 0; ++j) {
      std::int32_t partner = inst_->dual_partner[j];
      if (partner < 0 || static_cast<std::uint32_t>(partner) < j) continue;
      bool a_on = member_[j] && !excluded_[j] && start_of_[j] != kUnscheduled;
      bool b_on = member_[partner] && !excluded_[partner] &&
                  start_of_[static_cast<std::uint32_t>(partner)] != kUnscheduled;
      if (a_on != b_on) {
        drop_a = static_cast<std::int32_t>(j);
        drop_b = partner;
      }
    }
    if (drop_a < 0) break;
    excluded_[static_cast<std::uint32_t>(drop_a)] = 1;
    excluded_[static_cast<std::uint32_t>(drop_b)] = 1;
    dropped_.push_back(static_cast<std::uint32_t>(drop_a));
    dropped_.push_back(static_cast<std::uint32_t>(drop_b));
  }

  for (std::uint32_t rid : members_) {
    if (excluded_[rid]) start_of_[rid] = kUnscheduled;
    member_[rid] = 0;
  }
  for (std::uint32_t rid : dropped_) excluded_[rid] = 0;
}

EvalStats ScheduleGenerator::evaluate(std::span<const std::uint32_t> order) {
  check_order(order);
  run(order);
  EvalStats stats;
  for (std::uint32_t rid : members_) {
    TimeMs s = start_of_[rid];
    if (s == kUnscheduled) continue;
    const CompiledRequest& q = reqs_[rid];
    stats.phi += q.priority - q.slope * static_cast<double>(s - q.release);
    stats.start_delay_sum_ms += s - q.release;
    ++stats.scheduled;
  }
  return stats;
}

Schedule ScheduleGenerator::generate(std::span<const std::uint32_t> order) {
  check_order(order);
  run(order);
  Schedule sched;
  double phi = 0.0;
  for (std::uint32_t rid : members_) {
    TimeMs s = start_of_[rid];
    if (s == kUnscheduled) continue;
    const CompiledRequest& q = reqs_[rid];
    phi += q.priority - q.slope * static_cast<double>(s - q.release);
    sched.entries.push_back({rid, s, 0, 0});
  }
  std::sort(sched.entries.begin(), sched.entries.end(),
            [](const ScheduleEntry& a, const ScheduleEntry& b) {
              return a.start < b.start || (a.start == b.start && a.request < b.request);
            });
  sched.objective_cached = phi;
  if (frozen_.empty()) assign_channels_antennas(sched, *inst_);
  return sched;
}

std::optional<TimeMs> ScheduleGenerator::last_start(std::uint32_t request) const {
  if (request >= start_of_.size()) return std::nullopt;
  for (std::uint32_t rid : members_) {
    if (rid == request) {
      TimeMs s = start_of_[request];
      if (s == kUnscheduled) return std::nullopt;
      return s;
    }
  }
  return std::nullopt;
}

Schedule generate(std::span<const std::uint32_t> order, const Instance& inst,
                  const ObjectiveParams& params) {
  ScheduleGenerator gen(inst, params);
  return gen.generate(order);
}

double evaluate(std::span<const std::uint32_t> order, const Instance& inst,
                const ObjectiveParams& params) {
  ScheduleGenerator gen(inst, params);
  return gen.evaluate(order).phi;
}

void assign_channels_antennas(Schedule& sched, const Instance& inst) {
  std::sort(sched.entries.begin(), sched.entries.end(),
            [](const ScheduleEntry& a, const ScheduleEntry& b) {
              return a.start < b.start || (a.start == b.start && a.request < b.request);
            });
  std::vector<std::array<TimeMs, 2>> channel_busy(inst.stations.size(), {0, 0});
  TimeMs antenna_busy[2] = {0, 0};
  for (ScheduleEntry& e : sched.entries) {
    const Request& rq = inst.requests[e.request];
    std::uint32_t st = inst.station_of[e.request];
    const GroundStation& gs = inst.stations[st];
    TimeMs end = e.start + rq.duration;

    e.channel = 0;
    for (int c = 0; c < gs.channels; ++c) {
      if (channel_busy[st][static_cast<std::size_t>(c)] <= e.start) {
        e.channel = c + 1;
        channel_busy[st][static_cast<std::size_t>(c)] = end;
        break;
      }
    }
    if (e.channel == 0)
      raise(Errc::InvariantViolation, "channel assignment failed for " + rq.id);

    if (gs.power == StationPower::FullPower) {
      if (antenna_busy[0] > e.start || antenna_busy[1] > e.start)
        raise(Errc::InvariantViolation, "antenna assignment failed for " + rq.id);
      e.antenna = 1;
      antenna_busy[0] = antenna_busy[1] = end;
    } else {
      e.antenna = 0;
      for (int a = 0; a < 2; ++a) {
        if (antenna_busy[a] <= e.start) {
          e.antenna = a + 1;
          antenna_busy[a] = end;
          break;
        }
      }
      if (e.antenna == 0)
        raise(Errc::InvariantViolation, "antenna assignment failed for " + rq.id);
    }
  }
}

}  // namespace sidsp
