#include "sidsp/interval.hpp"

#include <algorithm>
#include <cassert>

#include "sidsp/error.hpp"

namespace sidsp {

IntervalSet::IntervalSet(Interval iv) {
  if (iv.lo >= iv.hi) raise(Errc::InvariantViolation, "interval requires lo < hi");
  ivs_.push_back(iv);
}

IntervalSet::IntervalSet(std::vector<Interval> intervals) : ivs_(std::move(intervals)) {
  if (!valid()) raise(Errc::InvariantViolation, "intervals must be ordered, disjoint, nonempty");
}

IntervalSet IntervalSet::merged(std::vector<Interval> intervals) {
  std::erase_if(intervals, [](Interval iv) { return iv.lo >= iv.hi; });
  std::sort(intervals.begin(), intervals.end(),
            [](Interval a, Interval b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
  IntervalSet out;
  for (Interval iv : intervals) {
    if (!out.ivs_.empty() && iv.lo < out.ivs_.back().hi) {
      out.ivs_.back().hi = std::max(out.ivs_.back().hi, iv.hi);
    } else {
      out.ivs_.push_back(iv);
    }
  }
  return out;
}

bool IntervalSet::valid() const {
  for (std::size_t k = 0; k < ivs_.size(); ++k) {
    if (ivs_[k].lo >= ivs_[k].hi) return false;
    if (k > 0 && ivs_[k - 1].hi > ivs_[k].lo) return false;
  }
  return true;
}

void IntervalSet::subtract(Interval x) {
  assert(x.lo < x.hi);
  // B = members overlapping the interior of x: lo < x.hi and hi > x.lo.
  auto first_it = std::partition_point(ivs_.begin(), ivs_.end(),
                                       [&](const Interval& iv) { return iv.hi <= x.lo; });
  std::size_t first = static_cast<std::size_t>(first_it - ivs_.begin());
  if (first == ivs_.size() || ivs_[first].lo >= x.hi) return;
  std::size_t last = first;
  while (last < ivs_.size() && ivs_[last].lo < x.hi) ++last;

  Interval rem[2];
  std::size_t keep = 0;
  if (ivs_[first].lo < x.lo) rem[keep++] = {ivs_[first].lo, x.lo};
  if (ivs_[last - 1].hi > x.hi) rem[keep++] = {x.hi, ivs_[last - 1].hi};

  std::size_t removed = last - first;
  if (keep <= removed) {
    for (std::size_t k = 0; k < keep; ++k) ivs_[first + k] = rem[k];
    ivs_.erase(ivs_.begin() + static_cast<std::ptrdiff_t>(first + keep),
               ivs_.begin() + static_cast<std::ptrdiff_t>(last));
  } else {  // keep == 2, removed == 1: split one member
    ivs_[first] = rem[0];
    ivs_.insert(ivs_.begin() + static_cast<std::ptrdiff_t>(first + 1), rem[1]);
  }
  assert(valid());
}

bool IntervalSet::contains_point(TimeMs t) const {
  auto it = std::partition_point(ivs_.begin(), ivs_.end(),
                                 [&](const Interval& iv) { return iv.hi < t; });
  return it != ivs_.end() && it->lo <= t;
}

TimeMs IntervalSet::total_length() const {
  TimeMs sum = 0;
  for (const Interval& iv : ivs_) sum += iv.length();
  return sum;
}

IntervalSet subtract(IntervalSet set, Interval x) {
  set.subtract(x);
  return set;
}

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
  const auto& av = a.intervals();
  const auto& bv = b.intervals();
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < av.size() && j < bv.size()) {
    TimeMs lo = std::max(av[i].lo, bv[j].lo);
    TimeMs hi = std::min(av[i].hi, bv[j].hi);
    if (lo < hi) out.push_back({lo, hi});
    if (av[i].hi < bv[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return IntervalSet(std::move(out));
}

bool is_subinterval(Interval x, const IntervalSet& set) {
  assert(x.lo < x.hi);
  const auto& ivs = set.intervals();
  // The only candidate container is the last member with lo <= x.lo.
  auto it = std::partition_point(ivs.begin(), ivs.end(),
                                 [&](const Interval& iv) { return iv.lo <= x.lo; });
  if (it == ivs.begin()) return false;
  --it;
  return x.hi <= it->hi;
}

TimeMs total_length(const IntervalSet& set) { return set.total_length(); }

}  // namespace sidsp
