#pragma once

#include "dqs/rational.hpp"

#include <vector>

namespace dqs {

/// Closed interval [lo, hi] on nonnegative rational time. Instantaneous
/// intervals (lo == hi) are permitted.
struct TimeInterval {
  Rational lo;
  Rational hi;

  TimeInterval() = default;
  TimeInterval(Rational l, Rational h);

  bool is_instant() const { return lo == hi; }
  Rational length() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
  bool contains(const Rational& t) const { return lo <= t && t <= hi; }
  bool intersects(const TimeInterval& o) const {
    return lo <= o.hi && o.lo <= hi;
  }
  /// Strict interval order: every point of *this precedes every point of o.
  bool strictly_before(const TimeInterval& o) const { return hi < o.lo; }

  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

/// One piece of a time region; [lo, hi] or half-open [lo, hi).
struct RegionPiece {
  Rational lo;
  Rational hi;
  bool half_open_hi = false;

  bool intersects(const TimeInterval& iv) const {
    if (half_open_hi) return lo <= iv.hi && iv.lo < hi;
    return lo <= iv.hi && iv.lo <= hi;
  }
};

/// Finite union of interval pieces.
using Region = std::vector<RegionPiece>;

bool region_intersects(const Region& region, const TimeInterval& iv);

std::string to_string(const TimeInterval& iv);

}  // namespace dqs
