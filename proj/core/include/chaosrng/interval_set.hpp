#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace chaosrng {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return lo < x && x < hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Finite union of disjoint open subintervals of (0,1), kept sorted.
// Intervals shorter than kMinLength are dropped on construction; the number
// dropped is reported through dropped() and the diagnostics sink.
class IntervalSet {
 public:
  static constexpr double kMinLength = 1e-14;

  IntervalSet() = default;
  IntervalSet(std::initializer_list<Interval> intervals);
  explicit IntervalSet(std::vector<Interval> intervals);

  static IntervalSet unit() { return IntervalSet{{0.0, 1.0}}; }

  std::span<const Interval> intervals() const noexcept { return intervals_; }
  std::size_t size() const noexcept { return intervals_.size(); }
  bool empty() const noexcept { return intervals_.empty(); }
  std::size_t dropped() const noexcept { return dropped_; }

  double total_length() const noexcept;
  bool contains(double x) const noexcept;

  IntervalSet intersect(const IntervalSet& other) const;
  IntervalSet intersect(const Interval& interval) const;
  IntervalSet unite(const IntervalSet& other) const;

  friend bool operator==(const IntervalSet& a, const IntervalSet& b) {
    return a.intervals_ == b.intervals_;
  }

 private:
  void normalize();

  std::vector<Interval> intervals_;
  std::size_t dropped_ = 0;
};

}  // namespace chaosrng
