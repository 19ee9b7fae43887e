#pragma once

#include <string>
#include <vector>

namespace istat {

/// Real interval with independent open/closed ends; lo may be -inf, hi +inf.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;

  static Interval open(double lo, double hi) { return {lo, hi, false, false}; }
  static Interval closed(double lo, double hi) { return {lo, hi, true, true}; }
  static Interval half_open(double lo, double hi) { return {lo, hi, true, false}; }

  bool contains(double v) const;
  bool empty() const;
  std::string to_string() const;
};

/// Finite union of intervals on the real line, kept sorted and disjoint.
class IntervalSet {
 public:
  IntervalSet() = default;
  IntervalSet(std::initializer_list<Interval> parts);
  explicit IntervalSet(std::vector<Interval> parts);

  static IntervalSet everything();
  /// (c - r, c + r)
  static IntervalSet ball(double centre, double radius);
  /// {v : |v - c| >= r}
  static IntervalSet outside_ball(double centre, double radius);

  bool contains(double v) const;
  bool empty() const { return parts_.empty(); }
  const std::vector<Interval>& parts() const { return parts_; }

  IntervalSet complement() const;
  IntervalSet unite(const IntervalSet& other) const;

  std::string to_string() const;

 private:
  void normalize();
  std::vector<Interval> parts_;
};

}  // namespace istat
