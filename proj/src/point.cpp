#include "pdyn/point.hpp"

#include "pdyn/errors.hpp"

namespace pdyn {

const BiSeq& as_biseq(const PointValue& p) {
  if (auto* s = std::get_if<BiSeq>(&p)) return *s;
  throw Error("MixedSystemPoints", "expected a bi-infinite symbolic point");
}

const OneSeq& as_oneseq(const PointValue& p) {
  if (auto* s = std::get_if<OneSeq>(&p)) return *s;
  throw Error("MixedSystemPoints", "expected a one-sided symbolic point");
}

const ScalarV& as_scalar(const PointValue& p) {
  if (auto* s = std::get_if<ScalarV>(&p)) return *s;
  throw Error("MixedSystemPoints", "expected a scalar point");
}

const E319& as_e319(const PointValue& p) {
  if (auto* s = std::get_if<E319>(&p)) return *s;
  throw Error("MixedSystemPoints", "expected an Example-3.19 point");
}

}  // namespace pdyn
