#include "sidsp/model.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "sidsp/error.hpp"

namespace sidsp {

void Instance::reindex() {
  std::unordered_map<std::string, std::uint32_t> station_idx;
  for (std::uint32_t s = 0; s < stations.size(); ++s) {
    const GroundStation& gs = stations[s];
    if (gs.channels != 1 && gs.channels != 2)
      raise(Errc::InvariantViolation, "station " + gs.id + ": channels must be 1 or 2");
    if (!gs.normal_masks.valid() || !gs.high_rel_masks.valid())
      raise(Errc::InvariantViolation, "station " + gs.id + ": malformed masks");
    for (Interval m : gs.high_rel_masks.intervals()) {
      if (!is_subinterval(m, gs.normal_masks))
        raise(Errc::InvariantViolation,
              "station " + gs.id + ": high reliability mask not inside a normal mask");
    }
    if (!station_idx.emplace(gs.id, s).second)
      raise(Errc::InvariantViolation, "duplicate station id " + gs.id);
  }

  if (!preprocessed && big_delta < delta)
    raise(Errc::InvariantViolation, "big_delta must be >= delta");
  if (delta < 0 || big_delta < 0)
    raise(Errc::InvariantViolation, "gaps must be non-negative");

  std::unordered_map<std::string, std::uint32_t> request_idx;
  station_of.assign(requests.size(), 0);
  for (std::uint32_t j = 0; j < requests.size(); ++j) {
    const Request& rq = requests[j];
    if (rq.release + rq.duration > rq.deadline)
      raise(Errc::InvariantViolation, "request " + rq.id + ": window shorter than duration");
    if (rq.duration <= 0)
      raise(Errc::InvariantViolation, "request " + rq.id + ": duration must be positive");
    if (rq.priority < 0)
      raise(Errc::InvariantViolation, "request " + rq.id + ": negative priority");
    auto st = station_idx.find(rq.station);
    if (st == station_idx.end())
      raise(Errc::InvariantViolation, "request " + rq.id + ": unknown station " + rq.station);
    station_of[j] = st->second;
    if (!request_idx.emplace(rq.id, j).second)
      raise(Errc::InvariantViolation, "duplicate request id " + rq.id);
  }

  dual_partner.assign(requests.size(), -1);
  for (const auto& [a, b] : dual_pairs) {
    auto ia = request_idx.find(a);
    auto ib = request_idx.find(b);
    if (ia == request_idx.end() || ib == request_idx.end())
      raise(Errc::InvariantViolation, "dual pair (" + a + ", " + b + ") references unknown request");
    if (ia->second == ib->second)
      raise(Errc::InvariantViolation, "dual pair (" + a + ", " + b + ") must name distinct requests");
    if (dual_partner[ia->second] != -1 || dual_partner[ib->second] != -1)
      raise(Errc::InvariantViolation, "request in more than one dual pair: " + a + "/" + b);
    dual_partner[ia->second] = static_cast<std::int32_t>(ib->second);
    dual_partner[ib->second] = static_cast<std::int32_t>(ia->second);
  }
}

std::optional<std::uint32_t> Instance::find_request(const std::string& id) const {
  for (std::uint32_t j = 0; j < requests.size(); ++j)
    if (requests[j].id == id) return j;
  return std::nullopt;
}

std::optional<std::uint32_t> Instance::find_station(const std::string& id) const {
  for (std::uint32_t s = 0; s < stations.size(); ++s)
    if (stations[s].id == id) return s;
  return std::nullopt;
}

namespace {

IntervalSet extend_uppers(const IntervalSet& masks, TimeMs delta) {
  std::vector<Interval> extended = masks.intervals();
  for (Interval& iv : extended) iv.hi += delta;
  return IntervalSet::merged(std::move(extended));
}

}  // namespace

Instance preprocess(const Instance& inst) {
  if (inst.preprocessed) raise(Errc::AlreadyPreprocessed, "instance already preprocessed");
  Instance out = inst;
  TimeMs d = inst.delta;
  for (Request& rq : out.requests) {
    rq.duration += d;
    rq.deadline += d;
  }
  for (GroundStation& gs : out.stations) {
    gs.normal_masks = extend_uppers(gs.normal_masks, d);
    gs.high_rel_masks = extend_uppers(gs.high_rel_masks, d);
  }
  out.horizon_end += d;
  out.big_delta = inst.big_delta - d;
  out.delta = 0;
  out.preprocessed = true;
  out.reindex();
  return out;
}

double objective(const Schedule& sched, const Instance& inst, const ObjectiveParams& params) {
  double f = 0.0;
  for (const ScheduleEntry& e : sched.entries) {
    if (e.request >= inst.request_count())
      raise(Errc::UnknownRequestId, "schedule entry references unknown request");
    const Request& rq = inst.requests[e.request];
    if (e.start < rq.release || e.start + rq.duration > rq.deadline)
      raise(Errc::EntryOutOfWindow, "request " + rq.id + " scheduled outside its time window");
    TimeMs slack = rq.deadline - rq.duration - rq.release;
    double frac = slack > 0 ? static_cast<double>(e.start - rq.release) / static_cast<double>(slack)
                            : 0.0;
    f += rq.priority * (1.0 - params.alpha * frac);
  }
  return f;
}

MetricsReport report_metrics(const Schedule& sched, const Instance& inst) {
  MetricsReport rep;
  rep.total_requests = static_cast<int>(inst.request_count());

  std::vector<char> scheduled(inst.request_count(), 0);
  double tard_sum = 0.0, tard_urgent_sum = 0.0, delay_sum = 0.0;
  int urgent_scheduled = 0;
  for (const ScheduleEntry& e : sched.entries) {
    if (e.request >= inst.request_count())
      raise(Errc::UnknownRequestId, "schedule entry references unknown request");
    scheduled[e.request] = 1;
    const Request& rq = inst.requests[e.request];
    auto tau = tardiness_baseline(inst, e.request);
    double tard = tau ? static_cast<double>(e.start - *tau) : 0.0;
    tard_sum += tard;
    delay_sum += static_cast<double>(e.start - rq.release);
    if (rq.urgent) {
      tard_urgent_sum += tard;
      ++urgent_scheduled;
    }
  }

  rep.scheduled = static_cast<int>(sched.entries.size());
  for (std::uint32_t j = 0; j < inst.request_count(); ++j) {
    if (inst.requests[j].urgent) ++rep.urgent_requests;
    if (!scheduled[j]) {
      ++rep.unscheduled_total;
      if (inst.requests[j].urgent) ++rep.unscheduled_urgent;
    }
  }
  if (rep.scheduled > 0) {
    rep.avg_tardiness_ms = tard_sum / rep.scheduled;
    rep.avg_start_delay_ms = delay_sum / rep.scheduled;
  }
  if (urgent_scheduled > 0) rep.avg_tardiness_urgent_ms = tard_urgent_sum / urgent_scheduled;
  return rep;
}

}  // namespace sidsp
