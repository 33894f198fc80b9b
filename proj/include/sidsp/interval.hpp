#pragma once

#include <cstdint>
#include <vector>

namespace sidsp {

using TimeMs = std::int64_t;

struct Interval {
  TimeMs lo = 0;
  TimeMs hi = 0;

  TimeMs length() const { return hi - lo; }
  bool contains(TimeMs t) const { return lo <= t && t <= hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

// Ordered set of disjoint closed intervals on the time axis. Consecutive
// members may touch (hi == next.lo) but never overlap, and zero-length
// intervals are never stored.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(Interval iv);
  explicit IntervalSet(std::vector<Interval> intervals);  // must satisfy the invariant

  // Builds a valid set from arbitrary intervals, merging strict overlaps.
  // Touching intervals are kept separate.
  static IntervalSet merged(std::vector<Interval> intervals);

  const std::vector<Interval>& intervals() const { return ivs_; }
  bool empty() const { return ivs_.empty(); }
  std::size_t size() const { return ivs_.size(); }
  void clear() { ivs_.clear(); }

  bool valid() const;

  // Removes the open interior (x.lo, x.hi); member endpoints that merely
  // touch x survive. Zero-length remainders are dropped.
  void subtract(Interval x);

  bool contains_point(TimeMs t) const;
  TimeMs total_length() const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> ivs_;
};

IntervalSet subtract(IntervalSet set, Interval x);
IntervalSet intersect(const IntervalSet& a, const IntervalSet& b);

// True iff x fits inside a single member interval.
bool is_subinterval(Interval x, const IntervalSet& set);

TimeMs total_length(const IntervalSet& set);

}  // namespace sidsp
