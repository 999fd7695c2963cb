#include "pdyn/specification.hpp"

#include "pdyn/rng.hpp"

#include <doctest.h>

using namespace pdyn;

namespace {

SpecSegments two_segments(const System& sys, const PointValue& x, const PointValue& far,
                          long long M, const Rat& eps) {
  SpecSegments s;
  s.segments = {{0, 1, x}, {1 + M, 2 + M, far}};
  s.gap_M = M;
  s.epsilon = eps;
  (void)sys;
  return s;
}

}  // namespace

TEST_CASE("spec validation") {
  auto shift = make_system("shift");
  auto x = pv(BiSeq::periodic("01"));
  SpecSegments bad;
  bad.segments = {{0, 1, x}, {3, 4, x}};
  bad.gap_M = 6;
  bad.epsilon = Rat(1, 4);
  CHECK_THROWS_AS(validate_spec(*shift, bad), Error);  // gap 2 < M
  bad.gap_M = 2;
  CHECK_NOTHROW(validate_spec(*shift, bad));
  bad.epsilon = Rat(0);
  CHECK_THROWS_AS(validate_spec(*shift, bad), Error);
}

TEST_CASE("symbolic tracer: exact verification and gap guard") {
  auto shift = make_system("shift");
  auto x = pv(BiSeq::periodic("01"));
  auto far = pv(BiSeq::periodic("1"));
  // eps = 1/4 gives agreement radius R = 2; M = 6 >= 2R+1
  auto spec = two_segments(*shift, x, far, 6, Rat(1, 4));
  auto out = specification_trace_symbolic(*shift, spec, false);
  REQUIRE(trace_succeeded(out));
  auto& r = std::get<TraceResult>(out);
  CHECK(r.exact);
  CHECK(r.max_error < Rat(1, 4));
  // independent re-check on each constrained index
  for (auto& [i, target] : spec_targets(*shift, spec))
    CHECK(shift->distance(shift->iterate(r.tracer, i), target) < Rat(1, 4));

  auto tight = two_segments(*shift, x, far, 4, Rat(1, 4));
  CHECK_THROWS_AS(specification_trace_symbolic(*shift, tight, false), Error);

  // eps >= 1 means R = 0 and any filler works
  auto loose = two_segments(*shift, x, far, 1, Rat(1));
  CHECK(trace_succeeded(specification_trace_symbolic(*shift, loose, false)));
}

TEST_CASE("periodic symbolic tracer returns a true periodic point") {
  auto shift = make_system("shift");
  auto x = pv(BiSeq::periodic("011"));
  auto far = pv(BiSeq::constant('1'));
  auto spec = two_segments(*shift, x, far, 6, Rat(1, 4));
  auto out = specification_trace_symbolic(*shift, spec, true);
  REQUIRE(trace_succeeded(out));
  auto& r = std::get<TraceResult>(out);
  REQUIRE(r.period.has_value());
  CHECK(*r.period == spec.segments.back().b + spec.gap_M);
  CHECK(shift->equal_points(shift->iterate(r.tracer, *r.period), r.tracer));
  CHECK(r.max_error < Rat(1, 4));

  // single segment through x, periodized: a periodic point eps-close along [0, n]
  SpecSegments single;
  single.segments = {{0, 5, x}};
  single.gap_M = 6;
  single.epsilon = Rat(1, 4);
  auto out2 = specification_trace_symbolic(*shift, single, true);
  REQUIRE(trace_succeeded(out2));
  auto& r2 = std::get<TraceResult>(out2);
  for (long long i = 0; i <= 5; ++i)
    CHECK(shift->distance(shift->iterate(r2.tracer, i), shift->iterate(x, i)) < Rat(1, 4));
}

TEST_CASE("glued tracer agrees with the symbolic one on constrained coordinates") {
  auto shift = make_system("shift");
  auto x = pv(BiSeq::periodic("01"));
  auto far = pv(BiSeq::periodic("110"));
  // glued connectors need M >= 2*sar(eps/8) + 2
  auto spec = two_segments(*shift, x, far, 14, Rat(1, 4));
  auto sym = specification_trace_symbolic(*shift, spec, false);
  auto glu = specification_trace_glued(*shift, x, spec, 3);
  REQUIRE(trace_succeeded(sym));
  REQUIRE(trace_succeeded(glu));
  const BiSeq& zs = as_biseq(std::get<TraceResult>(sym).tracer);
  const BiSeq& zg = as_biseq(std::get<TraceResult>(glu).tracer);
  int R = strict_agreement_radius(Rat(1, 4));
  for (auto& seg : spec.segments) {
    const BiSeq& xs = as_biseq(seg.x);
    for (long long n = seg.a - R; n <= seg.b + R; ++n) {
      CHECK(zs.at(n) == xs.at(n));
      CHECK(zg.at(n) == xs.at(n));
    }
  }
  CHECK(std::get<TraceResult>(glu).max_error < Rat(1, 4));

  auto tiny = two_segments(*shift, x, far, 5, Rat(1, 4));
  CHECK_THROWS_AS(specification_trace_glued(*shift, x, tiny, 3), Error);  // GapTooSmall
}

TEST_CASE("specification point verdict on the full 2-shift") {
  auto shift = make_system("shift");
  SplitMix64 rng(8);
  for (int t = 0; t < 4; ++t) {
    auto x = shift->sample(shift->whole_space(), 1, shard_seed(50, t))[0];
    auto v = specification_point_verdict(*shift, x, Rat(1, 4), {6}, 6, 64, 3);
    CAPTURE(t);
    CHECK(v.holds());
    CHECK(v.detail["M"] == 6);
  }
}

TEST_CASE("specification fails with certificate on the squaring map at x=1") {
  auto squaring = make_system("squaring");
  auto v = specification_point_verdict(*squaring, pv_scalar(Rat(1)), Rat(1, 10), {4, 6}, 6,
                                       64, 3);
  CHECK(v.fails());
  REQUIRE(v.witness.contains("certificate"));
  CHECK(v.witness["certificate"]["kind"] == "empty_spec_chain");
}

TEST_CASE("specification fails with certificate on the doubling line at x=0") {
  auto dbl = make_system("doubling-line");
  auto v = specification_point_verdict(*dbl, pv_scalar(Rat(0)), Rat(1, 10), {4, 6}, 6, 64, 3);
  CHECK(v.fails());
  CHECK(v.witness.contains("certificate"));
}
