#include "dqs/interval.hpp"

#include <stdexcept>

namespace dqs {

TimeInterval::TimeInterval(Rational l, Rational h)
    : lo(std::move(l)), hi(std::move(h)) {
  if (lo < 0) throw std::invalid_argument("interval start must be >= 0");
  if (hi < lo) throw std::invalid_argument("interval with hi < lo");
}

bool region_intersects(const Region& region, const TimeInterval& iv) {
  for (const auto& piece : region)
    if (piece.intersects(iv)) return true;
  return false;
}

std::string to_string(const TimeInterval& iv) {
  return "[" + to_string(iv.lo) + ", " + to_string(iv.hi) + "]";
}

}  // namespace dqs
