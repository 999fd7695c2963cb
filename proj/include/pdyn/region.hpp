#pragma once

#include "pdyn/point.hpp"
#include "pdyn/rational.hpp"

#include <string>
#include <variant>

namespace pdyn {

struct BallRegion {
  PointValue center;
  Rat radius;
  bool open = true;
};

struct IntervalRegion {
  Rat lo, hi;
  bool lo_closed = false;
  bool hi_closed = false;
};

// Constrains coordinates start .. start+|word|-1 to `word`.
struct CylinderRegion {
  long long start = 0;
  std::string word;
};

using Region = std::variant<BallRegion, IntervalRegion, CylinderRegion>;

inline Region interval(Rat lo, Rat hi, bool lo_closed = false, bool hi_closed = false) {
  return IntervalRegion{std::move(lo), std::move(hi), lo_closed, hi_closed};
}
inline Region ball(PointValue c, Rat r, bool open = true) {
  return BallRegion{std::move(c), std::move(r), open};
}
inline Region cylinder(long long start, std::string word) {
  return CylinderRegion{start, std::move(word)};
}

}  // namespace pdyn
