#pragma once

#include <vector>

#include "affdim/core_ifs.hpp"
#include "affdim/rational.hpp"

namespace affdim {

/// Closed interval [lo, hi] with exact endpoints.
struct Interval {
  Rational lo;
  Rational hi;

  Rational length() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool intersects(const Interval& o) const { return !(o.hi < lo || hi < o.lo); }

  friend bool operator==(const Interval& a, const Interval& b) { return a.lo == b.lo && a.hi == b.hi; }
};

Interval image(const Similarity1D& s, const Interval& iv);

/// Normalized finite union of closed intervals: sorted, and any two
/// intervals that overlap or touch are merged, so consecutive components
/// satisfy hi_k < lo_{k+1}.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  explicit IntervalUnion(std::vector<Interval> intervals);

  static IntervalUnion unit() { return IntervalUnion({{Rational(0), Rational(1)}}); }
  static IntervalUnion point(const Rational& x) { return IntervalUnion({{x, x}}); }

  const std::vector<Interval>& intervals() const { return parts_; }
  std::size_t size() const { return parts_.size(); }
  bool empty() const { return parts_.empty(); }

  const Rational& min() const;
  const Rational& max() const;
  Rational diameter() const;
  Rational measure() const;

  bool contains(const Rational& x) const;
  bool contains(const IntervalUnion& other) const;
  bool intersects(const Interval& iv) const;

  /// Distance from x to the union; the union must be nonempty.
  Rational distance_to(const Rational& x) const;

  IntervalUnion image(const Similarity1D& s) const;
  IntervalUnion united(const IntervalUnion& other) const;

  friend bool operator==(const IntervalUnion& a, const IntervalUnion& b) { return a.parts_ == b.parts_; }

 private:
  std::vector<Interval> parts_;
};

}  // namespace affdim
