// Shared helpers for the test suites: an independent integer-grid oracle for
// the interval algebra and a small adversarial random-instance builder
// (distinct from the synthetic generator shipped in the library).
#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "sidsp/instgen.hpp"
#include "sidsp/interval.hpp"
#include "sidsp/model.hpp"

namespace testsupport {

using sidsp::Interval;
using sidsp::IntervalSet;
using sidsp::TimeMs;

// ---- interval-set oracle -------------------------------------------------
//
// Membership is sampled on a half-unit grid (all coordinates doubled), which
// captures both integer endpoints and open interiors exactly for sets with
// integer endpoints. A point of the expected set that has no neighbourhood
// (an isolated endpoint) cannot be represented by a lo < hi interval and is
// dropped, mirroring the container's invariant.

struct GridOracle {
  TimeMs origin2;              // doubled coordinate of bitmap[0]
  std::vector<char> member2;   // membership at doubled coordinates

  static GridOracle over_hull(TimeMs lo, TimeMs hi) {
    GridOracle g;
    g.origin2 = 2 * lo;
    g.member2.assign(static_cast<std::size_t>(2 * hi - 2 * lo + 1), 0);
    return g;
  }

  void mark(const IntervalSet& set) {
    for (Interval iv : set.intervals())
      for (TimeMs x2 = 2 * iv.lo; x2 <= 2 * iv.hi; ++x2) set_at(x2, 1);
  }
  void set_at(TimeMs x2, char v) {
    if (x2 < origin2 || x2 >= origin2 + static_cast<TimeMs>(member2.size())) return;
    member2[static_cast<std::size_t>(x2 - origin2)] = v;
  }
  char at(TimeMs x2) const {
    if (x2 < origin2 || x2 >= origin2 + static_cast<TimeMs>(member2.size())) return 0;
    return member2[static_cast<std::size_t>(x2 - origin2)];
  }

  // Subtraction of [a, b]: drop the open interior (a, b).
  void subtract(Interval x) {
    for (TimeMs x2 = 2 * x.lo + 1; x2 <= 2 * x.hi - 1; ++x2) set_at(x2, 0);
  }

  void intersect_with(const GridOracle& other) {
    for (TimeMs x2 = origin2; x2 < origin2 + static_cast<TimeMs>(member2.size()); ++x2)
      if (at(x2) && !other.at(x2)) set_at(x2, 0);
  }

  // Maximal positive-length runs; isolated points are unrepresentable.
  std::vector<Interval> to_intervals() const {
    std::vector<Interval> out;
    std::size_t n = member2.size();
    std::size_t i = 0;
    while (i < n) {
      if (!member2[i]) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j + 1 < n && member2[j + 1]) ++j;
      if (j > i) {  // run of positive length
        out.push_back({(origin2 + static_cast<TimeMs>(i)) / 2,
                       (origin2 + static_cast<TimeMs>(j)) / 2});
      }
      i = j + 1;
    }
    return out;
  }

  TimeMs total_length2() const {
    // Count half-unit cells: midpoints at odd offsets relative to origin2.
    TimeMs cells = 0;
    for (std::size_t i = 0; i + 1 < member2.size(); ++i)
      if (member2[i] && member2[i + 1]) ++cells;
    return cells;  // each cell is half a unit; length = cells / 2
  }
};

inline IntervalSet random_interval_set(std::mt19937_64& rng, int max_members, TimeMs span) {
  std::uniform_int_distribution<TimeMs> gap(0, span / 8);
  std::uniform_int_distribution<TimeMs> len(1, span / 4);
  std::uniform_int_distribution<int> count(0, max_members);
  std::vector<Interval> ivs;
  TimeMs cursor = gap(rng);
  int n = count(rng);
  for (int k = 0; k < n; ++k) {
    TimeMs lo = cursor + gap(rng);
    TimeMs hi = lo + len(rng);
    ivs.push_back({lo, hi});
    cursor = hi;
  }
  return IntervalSet(std::move(ivs));
}

// ---- random instances ------------------------------------------------------

struct RandomInstanceOptions {
  int min_requests = 1;
  int max_requests = 50;
  int max_stations = 4;
  double urgent_prob = 0.2;
  double dual_prob = 0.08;       // chance that a request gets a dual partner
  double high_rel_prob = 0.25;
  double full_power_prob = 0.3;
  double two_channel_prob = 0.3;
  bool force_delta_zero = false;
  sidsp::TimeMs horizon = 4'000'000;  // ~67 minutes; keeps grids small
};

// Adversarial little instances: tight windows, short masks, arbitrary gaps.
// Requests may well be unschedulable; windows always admit the duration.
inline sidsp::Instance random_instance(std::uint64_t seed, const RandomInstanceOptions& opt = {}) {
  std::mt19937_64 rng(seed);
  auto rint = [&](TimeMs lo, TimeMs hi) {
    return std::uniform_int_distribution<TimeMs>(lo, hi)(rng);
  };
  auto chance = [&](double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
  };

  sidsp::Instance inst;
  inst.horizon_end = opt.horizon;
  inst.delta = opt.force_delta_zero ? 0 : rint(0, 5000);
  inst.big_delta = inst.delta + rint(0, 10000);

  int n_stations = static_cast<int>(rint(1, opt.max_stations));
  for (int s = 0; s < n_stations; ++s) {
    sidsp::GroundStation gs;
    gs.id = "s" + std::to_string(s);
    gs.power = chance(opt.full_power_prob) ? sidsp::StationPower::FullPower
                                           : sidsp::StationPower::HalfPower;
    gs.channels = chance(opt.two_channel_prob) ? 2 : 1;
    std::vector<Interval> normal, high;
    TimeMs cursor = rint(0, opt.horizon / 10);
    int passes = static_cast<int>(rint(1, 6));
    for (int k = 0; k < passes && cursor < opt.horizon; ++k) {
      TimeMs len = rint(60'000, 400'000);
      TimeMs lo = cursor;
      TimeMs hi = std::min(lo + len, opt.horizon);
      if (hi - lo < 30'000) break;
      normal.push_back({lo, hi});
      if (chance(0.5)) {
        TimeMs hlen = std::max<TimeMs>(20'000, (hi - lo) / 2);
        TimeMs hlo = rint(lo, hi - hlen);
        high.push_back({hlo, hlo + hlen});
      }
      cursor = hi + rint(0, opt.horizon / 10);
    }
    gs.normal_masks = IntervalSet(std::move(normal));
    gs.high_rel_masks = IntervalSet(std::move(high));
    inst.stations.push_back(std::move(gs));
  }

  int n = static_cast<int>(rint(opt.min_requests, opt.max_requests));
  for (int j = 0; j < n; ++j) {
    sidsp::Request rq;
    rq.id = "r" + std::to_string(j);
    std::size_t st = static_cast<std::size_t>(rint(0, n_stations - 1));
    rq.station = inst.stations[st].id;
    rq.duration = rint(20'000, 240'000);
    rq.release = rint(0, opt.horizon - rq.duration);
    TimeMs horizon_slack = rint(0, 200'000);
    TimeMs window_slack = rint(0, opt.horizon / 2);
    rq.deadline = std::min<TimeMs>(opt.horizon + horizon_slack,
                                   rq.release + rq.duration + window_slack);
    rq.priority = static_cast<double>(rint(0, 10));
    rq.urgent = chance(opt.urgent_prob);
    rq.high_reliability = chance(opt.high_rel_prob);
    inst.requests.push_back(std::move(rq));
  }

  for (int j = 0; j + 1 < n; j += 2) {
    if (!chance(opt.dual_prob)) continue;
    inst.dual_pairs.emplace_back(inst.requests[static_cast<std::size_t>(j)].id,
                                 inst.requests[static_cast<std::size_t>(j) + 1].id);
  }

  inst.reindex();
  return inst;
}

// Tiny all-regular instances for oracle comparisons (n <= 8).
inline sidsp::Instance tiny_instance(std::uint64_t seed, int max_requests = 7) {
  RandomInstanceOptions opt;
  opt.min_requests = 2;
  opt.max_requests = max_requests;
  opt.max_stations = 3;
  opt.urgent_prob = 0.0;
  opt.dual_prob = 0.1;
  opt.horizon = 1'500'000;
  return random_instance(seed, opt);
}

inline std::vector<std::uint32_t> random_order(std::mt19937_64& rng, std::uint32_t n,
                                               bool subset = true) {
  std::vector<std::uint32_t> order(n);
  for (std::uint32_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  if (subset && n > 0) {
    std::uniform_int_distribution<std::uint32_t> cut(0, n);
    order.resize(cut(rng));
  }
  return order;
}

}  // namespace testsupport
