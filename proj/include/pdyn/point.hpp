#pragma once

#include "pdyn/rational.hpp"
#include "pdyn/words.hpp"

#include <string>
#include <variant>

namespace pdyn {

// Exact rational scalar (all IEEE doubles are rationals; `exact` records
// whether the value is semantically exact or a rounded/sampled stand-in).
struct ScalarV {
  Rat value;
  bool exact = true;
};

// Index of an E-point q(i, k, j) of the Example 3.19 space: 1 <= i <= 3,
// k >= 1, 0 <= j < t.
struct EIdx {
  int i = 1;
  long long k = 1;
  int j = 0;
  bool operator==(const EIdx& o) const { return i == o.i && k == o.k && j == o.j; }
};

// Point of the Example 3.19 compound space X = Y u E; Y-points are points of
// the base system (a full shift in this build).
struct E319 {
  std::variant<BiSeq, EIdx> v;
  bool is_e() const { return std::holds_alternative<EIdx>(v); }
};

using PointValue = std::variant<BiSeq, OneSeq, ScalarV, E319>;

inline PointValue pv(BiSeq s) { return PointValue(std::move(s)); }
inline PointValue pv(OneSeq s) { return PointValue(std::move(s)); }
inline PointValue pv_scalar(Rat r, bool exact = true) {
  return PointValue(ScalarV{std::move(r), exact});
}

const BiSeq& as_biseq(const PointValue& p);
const OneSeq& as_oneseq(const PointValue& p);
const ScalarV& as_scalar(const PointValue& p);
const E319& as_e319(const PointValue& p);

}  // namespace pdyn
