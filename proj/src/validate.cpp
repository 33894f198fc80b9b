#include "sidsp/validate.hpp"

#include <algorithm>
#include <cassert>

#include "json.hpp"
#include "sidsp/error.hpp"

namespace sidsp {

namespace {

bool overlaps(TimeMs a_lo, TimeMs a_hi, TimeMs b_lo, TimeMs b_hi) {
  return a_lo < b_hi && b_lo < a_hi;  // touching endpoints do not conflict
}

// Gap between two non-overlapping spans; 0 if they overlap or touch.
TimeMs gap_between(TimeMs a_lo, TimeMs a_hi, TimeMs b_lo, TimeMs b_hi) {
  if (a_hi <= b_lo) return b_lo - a_hi;
  if (b_hi <= a_lo) return a_lo - b_hi;
  return 0;
}

bool inside_some_mask(const std::vector<Interval>& masks, TimeMs lo, TimeMs hi) {
  for (const Interval& m : masks) {
    if (m.lo <= lo && hi <= m.hi) return true;
    if (m.lo > lo) break;
  }
  return false;
}

struct Span {
  TimeMs lo, hi;
  std::uint32_t request;
  bool full_power;
};

}  // namespace

const char* violation_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Horizon: return "HorizonViolation";
    case ViolationKind::Window: return "WindowViolation";
    case ViolationKind::Mask: return "MaskViolation";
    case ViolationKind::ChannelConflict: return "ChannelConflict";
    case ViolationKind::AntennaConflict: return "AntennaConflict";
    case ViolationKind::Gap: return "GapViolation";
    case ViolationKind::Dual: return "DualViolation";
    case ViolationKind::UrgentDisplaced: return "UrgentDisplaced";
  }
  return "Unknown";
}

std::string report_to_json(const ValidationReport& report, const Instance& inst) {
  nlohmann::json root;
  root["feasible"] = report.feasible();
  nlohmann::json list = nlohmann::json::array();
  for (const Violation& v : report.violations) {
    nlohmann::json j;
    j["kind"] = violation_name(v.kind);
    j["detail"] = v.detail;
    nlohmann::json ids = nlohmann::json::array();
    for (std::uint32_t r : v.requests) ids.push_back(inst.requests[r].id);
    j["requests"] = std::move(ids);
    list.push_back(std::move(j));
  }
  root["violations"] = std::move(list);
  return root.dump(2) + "\n";
}

ValidationReport validate(const Schedule& sched, const Instance& inst,
                          const std::vector<ScheduleEntry>* frozen_urgent) {
  assert(inst.preprocessed);
  ValidationReport rep;
  std::vector<char> present(inst.request_count(), 0);
  std::vector<Span> spans;
  spans.reserve(sched.entries.size());

  for (const ScheduleEntry& e : sched.entries) {
    if (e.request >= inst.request_count())
      raise(Errc::UnknownRequestId, "schedule references unknown request index");
    if (present[e.request])
      raise(Errc::DuplicateId, "schedule lists request " + inst.requests[e.request].id + " twice");
    present[e.request] = 1;

    const Request& rq = inst.requests[e.request];
    const GroundStation& gs = inst.stations[inst.station_of[e.request]];
    TimeMs lo = e.start, hi = e.start + rq.duration;
    spans.push_back({lo, hi, e.request, gs.power == StationPower::FullPower});

    if (lo < 0 || hi > inst.horizon_end)
      rep.violations.push_back({ViolationKind::Horizon,
                                rq.id + " runs outside the planning horizon",
                                {e.request}});
    if (lo < rq.release || hi > rq.deadline)
      rep.violations.push_back({ViolationKind::Window,
                                rq.id + " violates its time window",
                                {e.request}});
    const IntervalSet& masks = rq.high_reliability ? gs.high_rel_masks : gs.normal_masks;
    if (!inside_some_mask(masks.intervals(), lo, hi))
      rep.violations.push_back({ViolationKind::Mask,
                                rq.id + " does not fit a single visibility mask",
                                {e.request}});
  }

  // Channel capacity per station: sweep over start/end events; ends release
  // capacity before coincident starts claim it.
  for (std::uint32_t st = 0; st < inst.stations.size(); ++st) {
    std::vector<Span> local;
    for (const Span& s : spans)
      if (inst.station_of[s.request] == st) local.push_back(s);
    if (local.size() < 2) continue;
    std::vector<std::pair<TimeMs, int>> events;  // (time, +1 start / -1 end)
    for (const Span& s : local) {
      events.push_back({s.lo, +1});
      events.push_back({s.hi, -1});
    }
    std::sort(events.begin(), events.end(), [](auto a, auto b) {
      return a.first < b.first || (a.first == b.first && a.second < b.second);
    });
    int active = 0, cap = inst.stations[st].channels;
    bool conflict = false;
    for (auto [t, d] : events) {
      active += d;
      if (active > cap) conflict = true;
    }
    if (conflict) {
      Violation v{ViolationKind::ChannelConflict,
                  "more simultaneous downlinks than channels at " + inst.stations[st].id,
                  {}};
      for (const Span& s : local) v.requests.push_back(s.request);
      rep.violations.push_back(std::move(v));
    }
  }

  // Antenna capacity and power exclusivity, pairwise from raw times.
  for (std::size_t i = 0; i < spans.size(); ++i) {
    for (std::size_t j = i + 1; j < spans.size(); ++j) {
      const Span& a = spans[i];
      const Span& b = spans[j];
      bool ov = overlaps(a.lo, a.hi, b.lo, b.hi);
      if (ov && (a.full_power || b.full_power)) {
        rep.violations.push_back({ViolationKind::AntennaConflict,
                                  "full-power downlink overlaps another downlink",
                                  {a.request, b.request}});
      }
      if (!ov && a.full_power != b.full_power &&
          gap_between(a.lo, a.hi, b.lo, b.hi) < inst.big_delta) {
        rep.violations.push_back({ViolationKind::Gap,
                                  "different-power downlinks closer than the required gap",
                                  {a.request, b.request}});
      }
    }
  }
  {
    // Three simultaneous half-power downlinks exceed the two antennas.
    std::vector<std::pair<TimeMs, int>> events;
    for (const Span& s : spans) {
      if (s.full_power) continue;
      events.push_back({s.lo, +1});
      events.push_back({s.hi, -1});
    }
    std::sort(events.begin(), events.end(), [](auto a, auto b) {
      return a.first < b.first || (a.first == b.first && a.second < b.second);
    });
    int active = 0;
    bool conflict = false;
    for (auto [t, d] : events) {
      active += d;
      if (active > 2) conflict = true;
    }
    if (conflict) {
      Violation v{ViolationKind::AntennaConflict,
                  "more than two simultaneous half-power downlinks",
                  {}};
      for (const Span& s : spans)
        if (!s.full_power) v.requests.push_back(s.request);
      rep.violations.push_back(std::move(v));
    }
  }

  for (std::uint32_t j = 0; j < inst.request_count(); ++j) {
    std::int32_t partner = inst.dual_partner[j];
    if (partner < 0 || static_cast<std::uint32_t>(partner) < j) continue;
    if (present[j] != present[static_cast<std::uint32_t>(partner)]) {
      rep.violations.push_back({ViolationKind::Dual,
                                "dual pair partially scheduled",
                                {j, static_cast<std::uint32_t>(partner)}});
    }
  }

  if (frozen_urgent) {
    for (const ScheduleEntry& f : *frozen_urgent) {
      auto it = std::find_if(sched.entries.begin(), sched.entries.end(),
                             [&](const ScheduleEntry& e) { return e.request == f.request; });
      if (it == sched.entries.end() || it->start != f.start) {
        rep.violations.push_back({ViolationKind::UrgentDisplaced,
                                  inst.requests[f.request].id + " missing or moved",
                                  {f.request}});
      }
    }
  }

  return rep;
}

namespace {

// Direct feasibility of starting `rid` at `x`, against all entries except
// `exclude` (npos = none). Mirrors the constraint list, not the generator's
// interval machinery.
bool fits_at(std::uint32_t rid, TimeMs x, const Instance& inst, const std::vector<Span>& spans,
             std::size_t exclude) {
  const Request& rq = inst.requests[rid];
  std::uint32_t st = inst.station_of[rid];
  const GroundStation& gs = inst.stations[st];
  bool full = gs.power == StationPower::FullPower;
  TimeMs lo = x, hi = x + rq.duration;
  if (lo < rq.release || hi > rq.deadline) return false;
  if (lo < 0 || hi > inst.horizon_end) return false;
  const IntervalSet& masks = rq.high_reliability ? gs.high_rel_masks : gs.normal_masks;
  if (!inside_some_mask(masks.intervals(), lo, hi)) return false;

  int station_overlap = 0, half_overlap = 0;
  for (std::size_t k = 0; k < spans.size(); ++k) {
    if (k == exclude) continue;
    const Span& o = spans[k];
    bool ov = overlaps(lo, hi, o.lo, o.hi);
    if (ov) {
      if (full || o.full_power) return false;
      if (++half_overlap >= 2) return false;
      if (inst.station_of[o.request] == st && ++station_overlap >= gs.channels) return false;
    } else if (o.full_power != full && gap_between(lo, hi, o.lo, o.hi) < inst.big_delta) {
      return false;
    }
  }
  return true;
}

// Earliest feasible start for `rid` against the fixed entries, or nullopt.
// The left edge of any feasible region is one of: the release time, a mask
// start, an entry end, or an entry end plus the power-switch gap.
std::optional<TimeMs> earliest_insert(std::uint32_t rid, const Instance& inst,
                                      const std::vector<Span>& spans, std::size_t exclude) {
  const Request& rq = inst.requests[rid];
  const GroundStation& gs = inst.stations[inst.station_of[rid]];
  const IntervalSet& masks = rq.high_reliability ? gs.high_rel_masks : gs.normal_masks;

  std::vector<TimeMs> candidates;
  candidates.push_back(rq.release);
  for (const Interval& m : masks.intervals()) candidates.push_back(m.lo);
  for (std::size_t k = 0; k < spans.size(); ++k) {
    if (k == exclude) continue;
    candidates.push_back(spans[k].hi);
    candidates.push_back(spans[k].hi + inst.big_delta);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  TimeMs latest = rq.deadline - rq.duration;
  for (TimeMs x : candidates) {
    if (x < rq.release) continue;
    if (x > latest) break;
    if (fits_at(rid, x, inst, spans, exclude)) return x;
  }
  return std::nullopt;
}

}  // namespace

bool is_active(const Schedule& sched, const Instance& inst) {
  if (!validate(sched, inst).feasible())
    raise(Errc::InfeasibleInput, "is_active requires a feasible schedule");

  std::vector<Span> spans;
  std::vector<char> present(inst.request_count(), 0);
  for (const ScheduleEntry& e : sched.entries) {
    const GroundStation& gs = inst.stations[inst.station_of[e.request]];
    spans.push_back({e.start, e.start + inst.requests[e.request].duration, e.request,
                     gs.power == StationPower::FullPower});
    present[e.request] = 1;
  }

  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  for (std::uint32_t j = 0; j < inst.request_count(); ++j) {
    if (present[j]) continue;
    // A lone member of an unscheduled dual pair cannot be added by itself
    // without breaking the both-or-neither constraint.
    std::int32_t partner = inst.dual_partner[j];
    if (partner >= 0 && !present[static_cast<std::uint32_t>(partner)]) continue;
    if (earliest_insert(j, inst, spans, npos)) return false;
  }
  for (std::size_t k = 0; k < spans.size(); ++k) {
    auto x = earliest_insert(spans[k].request, inst, spans, k);
    if (x && *x < spans[k].lo) return false;
  }
  return true;
}

}  // namespace sidsp
