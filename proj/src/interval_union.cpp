#include "affdim/interval_union.hpp"

#include <algorithm>

namespace affdim {

Interval image(const Similarity1D& s, const Interval& iv) { return {s(iv.lo), s(iv.hi)}; }

IntervalUnion::IntervalUnion(std::vector<Interval> intervals) {
  for (const auto& iv : intervals)
    if (iv.hi < iv.lo) throw DomainError("interval with hi < lo");
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
  for (auto& iv : intervals) {
    if (!parts_.empty() && iv.lo <= parts_.back().hi) {
      if (parts_.back().hi < iv.hi) parts_.back().hi = std::move(iv.hi);
    } else {
      parts_.push_back(std::move(iv));
    }
  }
}

const Rational& IntervalUnion::min() const {
  if (parts_.empty()) throw DomainError("empty interval union");
  return parts_.front().lo;
}

const Rational& IntervalUnion::max() const {
  if (parts_.empty()) throw DomainError("empty interval union");
  return parts_.back().hi;
}

Rational IntervalUnion::diameter() const { return parts_.empty() ? Rational(0) : Rational(max() - min()); }

Rational IntervalUnion::measure() const {
  Rational total = 0;
  for (const auto& iv : parts_) total += iv.length();
  return total;
}

bool IntervalUnion::contains(const Rational& x) const {
  auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                             [](const Rational& v, const Interval& iv) { return v < iv.lo; });
  if (it == parts_.begin()) return false;
  return x <= std::prev(it)->hi;
}

bool IntervalUnion::contains(const IntervalUnion& other) const {
  // Each component of `other` must sit inside a single component here.
  for (const auto& iv : other.parts_) {
    auto it = std::upper_bound(parts_.begin(), parts_.end(), iv.lo,
                               [](const Rational& v, const Interval& p) { return v < p.lo; });
    if (it == parts_.begin()) return false;
    if (std::prev(it)->hi < iv.hi) return false;
  }
  return true;
}

bool IntervalUnion::intersects(const Interval& iv) const {
  auto it = std::upper_bound(parts_.begin(), parts_.end(), iv.hi,
                             [](const Rational& v, const Interval& p) { return v < p.lo; });
  if (it == parts_.begin()) return false;
  return iv.lo <= std::prev(it)->hi;
}

Rational IntervalUnion::distance_to(const Rational& x) const {
  if (parts_.empty()) throw DomainError("distance to an empty interval union");
  auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                             [](const Rational& v, const Interval& iv) { return v < iv.lo; });
  Rational best;
  bool have = false;
  if (it != parts_.end()) {
    best = it->lo - x;
    have = true;
  }
  if (it != parts_.begin()) {
    const auto& left = *std::prev(it);
    Rational d = x <= left.hi ? Rational(0) : Rational(x - left.hi);
    if (!have || d < best) best = d;
  }
  return best;
}

IntervalUnion IntervalUnion::image(const Similarity1D& s) const {
  std::vector<Interval> out;
  out.reserve(parts_.size());
  for (const auto& iv : parts_) out.push_back(affdim::image(s, iv));
  return IntervalUnion(std::move(out));
}

IntervalUnion IntervalUnion::united(const IntervalUnion& other) const {
  std::vector<Interval> all = parts_;
  all.insert(all.end(), other.parts_.begin(), other.parts_.end());
  return IntervalUnion(std::move(all));
}

}  // namespace affdim
