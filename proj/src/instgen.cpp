#include "sidsp/instgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "json.hpp"
#include "sidsp/error.hpp"

namespace sidsp {

namespace {

using Rng = std::mt19937_64;

TimeMs uniform_time(Rng& rng, TimeMs lo, TimeMs hi) {
  return std::uniform_int_distribution<TimeMs>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

bool chance(Rng& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

struct Pass {
  Interval span;
  std::optional<Interval> high_rel;
};

struct StationDraft {
  bool full_power = false;
  int channels = 1;
  std::vector<Pass> passes;
};

// Non-overlapping visibility passes with a small separation, spread over the
// horizon. Rejection sampling; gives up on a pass after a bounded number of
// attempts so pathological profiles still terminate.
std::vector<Pass> draw_passes(Rng& rng, const GenProfile& p) {
  int count = uniform_int(rng, p.passes_min, p.passes_max);
  const TimeMs separation = 60'000;
  std::vector<Interval> spans;
  for (int k = 0; k < count; ++k) {
    TimeMs len = uniform_time(rng, p.pass_len_min_ms, p.pass_len_max_ms);
    for (int attempt = 0; attempt < 200; ++attempt) {
      TimeMs lo = uniform_time(rng, 0, p.horizon_ms - len);
      Interval cand{lo, lo + len};
      bool ok = true;
      for (Interval s : spans) {
        if (cand.lo < s.hi + separation && s.lo < cand.hi + separation) {
          ok = false;
          break;
        }
      }
      if (ok) {
        spans.push_back(cand);
        break;
      }
    }
  }
  std::sort(spans.begin(), spans.end(), [](Interval a, Interval b) { return a.lo < b.lo; });
  std::vector<Pass> passes;
  for (Interval s : spans) {
    Pass pass{s, std::nullopt};
    if (chance(rng, p.high_rel_mask_prob)) {
      double frac = uniform_real(rng, p.high_rel_mask_frac_min, p.high_rel_mask_frac_max);
      TimeMs len = std::max<TimeMs>(1000, static_cast<TimeMs>(frac * static_cast<double>(s.length())));
      TimeMs lo = uniform_time(rng, s.lo, s.hi - len);
      pass.high_rel = Interval{lo, lo + len};
    }
    passes.push_back(pass);
  }
  return passes;
}

int draw_count(Rng& rng, double mean, double sigma_frac, int lo) {
  std::normal_distribution<double> dist(mean, mean * sigma_frac);
  return std::max(lo, static_cast<int>(std::llround(dist(rng))));
}

// Window spanning `span_passes` consecutive passes starting at `first`;
// returns the deadline (upper bound of the last spanned pass).
TimeMs window_deadline(const StationDraft& st, std::size_t first, int span_passes) {
  std::size_t last = std::min(st.passes.size() - 1, first + static_cast<std::size_t>(span_passes) - 1);
  return st.passes[last].span.hi;
}

bool high_rel_fits(const StationDraft& st, TimeMs r, TimeMs d, TimeMs p) {
  for (const Pass& pass : st.passes) {
    if (!pass.high_rel) continue;
    TimeMs lo = std::max(r, pass.high_rel->lo);
    TimeMs hi = std::min(d, pass.high_rel->hi);
    if (hi - lo >= p) return true;
  }
  return false;
}

}  // namespace

void GenProfile::apply_overrides(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    raise(Errc::ParseError, std::string("profile overrides: ") + e.what());
  }
  stations_min = j.value("stations_min", stations_min);
  stations_max = j.value("stations_max", stations_max);
  two_channel_share = j.value("two_channel_share", two_channel_share);
  full_power_share_min = j.value("full_power_share_min", full_power_share_min);
  full_power_share_max = j.value("full_power_share_max", full_power_share_max);
  passes_min = j.value("passes_min", passes_min);
  passes_max = j.value("passes_max", passes_max);
  pass_len_min_ms = j.value("pass_len_min_ms", pass_len_min_ms);
  pass_len_max_ms = j.value("pass_len_max_ms", pass_len_max_ms);
  high_rel_mask_prob = j.value("high_rel_mask_prob", high_rel_mask_prob);
  high_rel_mask_frac_min = j.value("high_rel_mask_frac_min", high_rel_mask_frac_min);
  high_rel_mask_frac_max = j.value("high_rel_mask_frac_max", high_rel_mask_frac_max);
  request_mean = j.value("request_mean", request_mean);
  request_sigma_frac = j.value("request_sigma_frac", request_sigma_frac);
  urgent_mean = j.value("urgent_mean", urgent_mean);
  duration_min_ms = j.value("duration_min_ms", duration_min_ms);
  duration_max_ms = j.value("duration_max_ms", duration_max_ms);
  window_passes_min = j.value("window_passes_min", window_passes_min);
  window_passes_max = j.value("window_passes_max", window_passes_max);
  priority_min = j.value("priority_min", priority_min);
  priority_max = j.value("priority_max", priority_max);
  dual_share = j.value("dual_share", dual_share);
  high_rel_request_prob = j.value("high_rel_request_prob", high_rel_request_prob);
  delta_ms = j.value("delta_ms", delta_ms);
  big_delta_ms = j.value("big_delta_ms", big_delta_ms);
  horizon_ms = j.value("horizon_ms", horizon_ms);
}

GenProfile profile_defaults(DensityProfile profile) {
  GenProfile p;
  if (profile == DensityProfile::High) {
    p.request_mean = 300.0;
    p.urgent_mean = 39.0;
  }
  return p;
}

Instance generate_instance(DensityProfile profile, std::uint64_t seed) {
  return generate_instance(profile_defaults(profile), seed);
}

Instance generate_instance(const GenProfile& p, std::uint64_t seed) {
  Rng rng(seed);
  Instance inst;
  inst.horizon_end = p.horizon_ms;
  inst.delta = p.delta_ms;
  inst.big_delta = p.big_delta_ms;

  double full_share = uniform_real(rng, p.full_power_share_min, p.full_power_share_max);
  int n_stations = uniform_int(rng, p.stations_min, p.stations_max);
  std::vector<StationDraft> drafts;
  for (int s = 0; s < n_stations; ++s) {
    StationDraft d;
    d.channels = chance(rng, p.two_channel_share) ? 2 : 1;
    d.full_power = chance(rng, full_share);
    d.passes = draw_passes(rng, p);
    drafts.push_back(std::move(d));
  }

  int n_requests = draw_count(rng, p.request_mean, p.request_sigma_frac, 1);
  int n_urgent = std::min(n_requests, draw_count(rng, p.urgent_mean, p.request_sigma_frac, 0));

  char buf[16];
  auto station_id = [&](std::size_t s) {
    std::snprintf(buf, sizeof buf, "gs%02zu", s);
    return std::string(buf);
  };
  auto request_id = [&](std::size_t r) {
    std::snprintf(buf, sizeof buf, "r%04zu", r);
    return std::string(buf);
  };

  // Urgent requests are anchored to distinct station passes (half-power
  // stations first) so that earliest-start conflicts between them stay rare,
  // matching the zero urgent tardiness seen in the operational data.
  std::vector<std::pair<std::size_t, std::size_t>> slots;  // (station, pass)
  for (std::size_t s = 0; s < drafts.size(); ++s)
    for (std::size_t k = 0; k < drafts[s].passes.size(); ++k) slots.emplace_back(s, k);
  std::shuffle(slots.begin(), slots.end(), rng);
  std::stable_partition(slots.begin(), slots.end(),
                        [&](const auto& sp) { return !drafts[sp.first].full_power; });

  auto make_request = [&](std::size_t station, std::size_t pass_idx, bool urgent) {
    const StationDraft& st = drafts[station];
    const Pass& pass = st.passes[pass_idx];
    TimeMs pass_len = pass.span.length();
    TimeMs dur = uniform_time(rng, p.duration_min_ms, std::min(p.duration_max_ms, pass_len));
    TimeMs release;
    if (urgent) {
      release = uniform_time(rng, pass.span.lo, pass.span.lo + (pass_len - dur) / 2);
    } else {
      release = uniform_time(rng, pass.span.lo, pass.span.hi - dur);
    }
    int span_passes = uniform_int(rng, p.window_passes_min, p.window_passes_max);
    TimeMs deadline = window_deadline(st, pass_idx, span_passes);
    Request rq;
    rq.release = release;
    rq.deadline = deadline;
    rq.duration = dur;
    rq.priority = static_cast<double>(uniform_int(rng, p.priority_min, p.priority_max));
    rq.station = station_id(station);
    rq.urgent = urgent;
    rq.high_reliability =
        chance(rng, p.high_rel_request_prob) && high_rel_fits(st, release, deadline, dur);
    return rq;
  };

  std::vector<Request> requests;
  for (int u = 0; u < n_urgent; ++u) {
    auto [s, k] = slots.empty() ? std::pair<std::size_t, std::size_t>{0, 0}
                                : slots[static_cast<std::size_t>(u) % slots.size()];
    if (drafts[s].passes.empty()) continue;
    requests.push_back(make_request(s, k, true));
  }
  for (int r = static_cast<int>(requests.size()); r < n_requests; ++r) {
    std::size_t s = 0;
    for (int attempt = 0; attempt < 64; ++attempt) {
      s = static_cast<std::size_t>(uniform_int(rng, 0, n_stations - 1));
      if (!drafts[s].passes.empty()) break;
    }
    if (drafts[s].passes.empty()) break;
    std::size_t k =
        static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(drafts[s].passes.size()) - 1));
    requests.push_back(make_request(s, k, false));
  }

  // Dual pairs: clone a few regular requests onto a second station.
  int n_pairs = static_cast<int>(std::llround(p.dual_share * n_requests / 2.0));
  std::vector<std::size_t> regular_idx;
  for (std::size_t j = 0; j < requests.size(); ++j)
    if (!requests[j].urgent) regular_idx.push_back(j);
  std::shuffle(regular_idx.begin(), regular_idx.end(), rng);
  std::vector<std::pair<std::size_t, std::size_t>> pair_slots;  // (orig index, partner index)
  for (int q = 0; q < n_pairs && static_cast<std::size_t>(q) < regular_idx.size(); ++q) {
    if (n_stations < 2) break;
    std::size_t orig = regular_idx[static_cast<std::size_t>(q)];
    std::size_t orig_station = 0;
    for (std::size_t s = 0; s < drafts.size(); ++s)
      if (station_id(s) == requests[orig].station) orig_station = s;
    std::size_t other = static_cast<std::size_t>(uniform_int(rng, 0, n_stations - 2));
    if (other >= orig_station) ++other;
    const StationDraft& st = drafts[other];
    TimeMs dur = requests[orig].duration;
    std::vector<std::size_t> fitting;
    for (std::size_t k = 0; k < st.passes.size(); ++k)
      if (st.passes[k].span.length() >= dur) fitting.push_back(k);
    if (fitting.empty()) continue;
    std::size_t k = fitting[static_cast<std::size_t>(
        uniform_int(rng, 0, static_cast<int>(fitting.size()) - 1))];
    const Pass& pass = st.passes[k];
    Request partner = requests[orig];
    partner.station = station_id(other);
    partner.release = uniform_time(rng, pass.span.lo, pass.span.hi - dur);
    partner.deadline =
        window_deadline(st, k, uniform_int(rng, p.window_passes_min, p.window_passes_max));
    partner.high_reliability = requests[orig].high_reliability &&
                               high_rel_fits(st, partner.release, partner.deadline, dur);
    pair_slots.emplace_back(orig, requests.size());
    requests.push_back(std::move(partner));
  }

  for (std::size_t s = 0; s < drafts.size(); ++s) {
    GroundStation gs;
    gs.id = station_id(s);
    gs.power = drafts[s].full_power ? StationPower::FullPower : StationPower::HalfPower;
    gs.channels = drafts[s].channels;
    std::vector<Interval> normal, high;
    for (const Pass& pass : drafts[s].passes) {
      normal.push_back(pass.span);
      if (pass.high_rel) high.push_back(*pass.high_rel);
    }
    gs.normal_masks = IntervalSet(std::move(normal));
    gs.high_rel_masks = IntervalSet(std::move(high));
    inst.stations.push_back(std::move(gs));
  }

  for (std::size_t j = 0; j < requests.size(); ++j) {
    requests[j].id = request_id(j);
    inst.requests.push_back(requests[j]);
  }
  for (auto [a, b] : pair_slots)
    inst.dual_pairs.emplace_back(request_id(a), request_id(b));

  inst.reindex();
  return inst;
}

}  // namespace sidsp
