#include "chaosrng/interval_set.hpp"

#include <algorithm>
#include <string>

#include "chaosrng/diagnostics.hpp"

namespace chaosrng {

IntervalSet::IntervalSet(std::initializer_list<Interval> intervals)
    : IntervalSet(std::vector<Interval>(intervals)) {}

IntervalSet::IntervalSet(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  normalize();
}

void IntervalSet::normalize() {
  for (auto& iv : intervals_) {
    iv.lo = std::max(iv.lo, 0.0);
    iv.hi = std::min(iv.hi, 1.0);
  }
  const auto before = intervals_.size();
  std::erase_if(intervals_, [](const Interval& iv) { return !(iv.hi - iv.lo >= kMinLength); });
  const auto slivers = before - intervals_.size();

  std::sort(intervals_.begin(), intervals_.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });

  // Merge overlaps only. Abutting open intervals stay separate so that the
  // shared endpoint (a breakpoint or cut) remains excluded.
  std::vector<Interval> merged;
  merged.reserve(intervals_.size());
  for (const auto& iv : intervals_) {
    if (!merged.empty() && iv.lo < merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    } else {
      merged.push_back(iv);
    }
  }
  intervals_ = std::move(merged);

  dropped_ += slivers;
  if (slivers > 0) {
    diag::warn("interval set: dropped " + std::to_string(slivers) + " sliver(s) shorter than 1e-14");
  }
}

double IntervalSet::total_length() const noexcept {
  double total = 0.0;
  for (const auto& iv : intervals_) total += iv.length();
  return total;
}

bool IntervalSet::contains(double x) const noexcept {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                             [](double v, const Interval& iv) { return v < iv.lo; });
  if (it == intervals_.begin()) return false;
  return std::prev(it)->contains(x);
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  std::vector<Interval> out;
  std::size_t i = 0;
  std::size_t j = 0;
  const auto& a = intervals_;
  const auto& b = other.intervals_;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].lo, b[j].lo);
    const double hi = std::min(a[i].hi, b[j].hi);
    if (hi > lo) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::intersect(const Interval& interval) const {
  return intersect(IntervalSet{interval});
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  std::vector<Interval> all(intervals_.begin(), intervals_.end());
  all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
  return IntervalSet(std::move(all));
}

}  // namespace chaosrng
