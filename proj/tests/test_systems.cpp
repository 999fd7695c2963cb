#include "pdyn/system.hpp"

#include "pdyn/rng.hpp"

#include <doctest.h>

#include <set>

using namespace pdyn;

namespace {

PointValue zero_seq() { return pv(BiSeq::constant('0')); }

std::vector<PointValue> triple_pool(const System& sys, int count, uint64_t seed) {
  return sys.sample(sys.whole_space(), count, seed);
}

void check_metric_axioms(const System& sys, int triples, uint64_t seed) {
  auto pts = triple_pool(sys, 3 * triples, seed);
  Rat tol = sys.metric_exact() ? Rat(0) : Rat(1, BigInt(1) << 40);
  for (int i = 0; i < triples; ++i) {
    const auto& a = pts[3 * i];
    const auto& b = pts[3 * i + 1];
    const auto& c = pts[3 * i + 2];
    Rat ab = sys.distance(a, b);
    CHECK(ab >= 0);
    CHECK(sys.distance(b, a) == ab);    // symmetry is exact even on float metrics
    CHECK(sys.distance(a, a) == 0);
    CHECK(ab <= sys.distance(a, c) + sys.distance(c, b) + tol);
  }
}

void check_iterate_composition(const System& sys, uint64_t seed) {
  auto pts = triple_pool(sys, 6, seed);
  long long lo = sys.caps().invertible ? -16 : 0;
  for (auto& p : pts) {
    for (long long m : {lo, lo / 2, 3LL, 16LL}) {
      for (long long n : {lo, 2LL, 7LL}) {
        auto lhs = sys.iterate(p, m + n);
        auto rhs = sys.iterate(sys.iterate(p, m), n);
        CHECK(sys.equal_points(lhs, rhs));
      }
    }
  }
}

}  // namespace

TEST_CASE("iterate: frozen examples") {
  auto shift = make_system("shift");
  auto five = shift->iterate(zero_seq(), 5);
  CHECK(shift->equal_points(five, zero_seq()));

  auto squaring = make_system("squaring");
  auto r = squaring->iterate(pv_scalar(Rat(1, 2)), 2);
  CHECK(as_scalar(r).value == Rat(1, 16));
  CHECK(as_scalar(r).exact);

  auto dbl = make_system("doubling-line");
  auto d = dbl->iterate(pv_scalar(Rat(3)), 4);
  CHECK(as_scalar(d).value == Rat(48));
  CHECK(as_scalar(dbl->iterate(pv_scalar(Rat(48)), -4)).value == Rat(3));

  CHECK_THROWS_AS(squaring->iterate(pv_scalar(Rat(1, 2)), -1), Error);
  CHECK_THROWS_AS(squaring->iterate(pv_scalar(Rat(3, 2)), 1), Error);
}

TEST_CASE("distance: frozen examples") {
  auto shift = make_system("shift");
  BiSeq one_at_zero = BiSeq::constant('0');
  one_at_zero.set_symbol(0, '1');
  CHECK(shift->distance(pv(one_at_zero), zero_seq()) == Rat(1));
  CHECK(shift->distance(zero_seq(), zero_seq()) == Rat(0));

  auto e319 = make_system("ex319");
  auto a = e319->parse_point("q(1,7,1)");
  auto b = e319->parse_point("q(2,7,1)");
  CHECK(e319->distance(a, b) == Rat(1, 7));
  CHECK(e319->distance(a, a) == Rat(0));

  auto circle = make_system("doubling-circle");
  CHECK(circle->distance(pv_scalar(Rat(1, 10)), pv_scalar(Rat(9, 10))) == Rat(1, 5));
}

TEST_CASE("shift metric expansion bound: d(s^n x, s^n y) <= 2^n d(x,y)") {
  auto shift = make_system("shift");
  auto pts = shift->sample(shift->whole_space(), 24, 5);
  for (int i = 0; i + 1 < (int)pts.size(); i += 2) {
    Rat d0 = shift->distance(pts[i], pts[i + 1]);
    PointValue x = pts[i], y = pts[i + 1];
    for (int n = 1; n <= 10; ++n) {
      x = shift->iterate(x, 1);
      y = shift->iterate(y, 1);
      CHECK(shift->distance(x, y) <= pow2(n) * d0);
    }
  }
}

TEST_CASE("interval_image: frozen examples and composition") {
  auto dbl = make_system("doubling-line");
  auto im = dbl->interval_image({Rat(1), Rat(2)}, 3);
  REQUIRE(im.size() == 1);
  CHECK(im[0].lo == Rat(8));
  CHECK(im[0].hi == Rat(16));

  auto squaring = make_system("squaring");
  auto im2 = squaring->interval_image({Rat(0), Rat(1, 2)}, 2);
  REQUIRE(im2.size() == 1);
  CHECK(im2[0].lo == Rat(0));
  CHECK(im2[0].hi == Rat(1, 16));

  // closure convention: images are computed on closed intervals, returned closed
  auto tent = make_system("tent");
  auto im3 = tent->interval_image({Rat(0), Rat(1)}, 1);
  REQUIRE(im3.size() == 1);
  CHECK(im3[0].lo == Rat(0));
  CHECK(im3[0].hi == Rat(1));
  auto im4 = tent->interval_image({Rat(1, 4), Rat(5, 8)}, 1);
  REQUIRE(im4.size() == 1);  // pieces [1/2,1] and [3/4,1] merge
  CHECK(im4[0].lo == Rat(1, 2));
  CHECK(im4[0].hi == Rat(1));

  // composing n times equals the n-argument call
  for (auto sys : {dbl, squaring, tent}) {
    ExactInterval r{Rat(1, 8), Rat(3, 8)};
    auto once_twice = sys->interval_image(sys->interval_image(r, 1)[0], 2);
    auto three = sys->interval_image(r, 3);
    REQUIRE(once_twice.size() == three.size());
    for (size_t i = 0; i < three.size(); ++i) {
      CHECK(once_twice[i].lo == three[i].lo);
      CHECK(once_twice[i].hi == three[i].hi);
    }
  }

  CHECK_THROWS_AS(make_system("shift")->interval_image({Rat(0), Rat(1)}, 1), Error);
}

TEST_CASE("periodic points: frozen examples") {
  auto shift = make_system("shift");
  auto p2 = shift->periodic_points(2);
  CHECK(p2.size() == 4);
  for (auto& p : p2) CHECK(shift->equal_points(shift->iterate(p, 2), p));

  auto squaring = make_system("squaring");
  auto f1 = squaring->periodic_points(1);
  REQUIRE(f1.size() == 2);
  CHECK(as_scalar(f1[0]).value == Rat(0));
  CHECK(as_scalar(f1[1]).value == Rat(1));

  auto circle = make_system("doubling-circle");
  auto c2 = circle->periodic_points(2);
  std::set<std::string> vals;
  for (auto& p : c2) vals.insert(rat_to_string(as_scalar(p).value));
  CHECK(vals == std::set<std::string>{"0/1", "1/3", "2/3"});
}

TEST_CASE("sample: containment and determinism") {
  auto shift = make_system("shift");
  auto s1 = shift->sample(cylinder(0, "1"), 10, 7);
  CHECK(s1.size() == 10);
  for (auto& p : s1) CHECK(as_biseq(p).at(0) == '1');
  auto s2 = shift->sample(cylinder(0, "1"), 10, 7);
  for (size_t i = 0; i < s1.size(); ++i)
    CHECK(shift->encode_point(s1[i]) == shift->encode_point(s2[i]));

  auto squaring = make_system("squaring");
  auto s3 = squaring->sample(interval(Rat(2, 5), Rat(3, 5)), 5, 1);
  for (auto& p : s3) {
    CHECK(as_scalar(p).value > Rat(2, 5));
    CHECK(as_scalar(p).value < Rat(3, 5));
  }
  auto s4 = squaring->sample(interval(Rat(2, 5), Rat(3, 5)), 5, 1);
  for (size_t i = 0; i < s3.size(); ++i)
    CHECK(as_scalar(s3[i]).value == as_scalar(s4[i]).value);
}

TEST_CASE("example 3.19: map, metric, construction guards") {
  auto e319 = make_system("ex319");
  // rotation on E: f(q(2,5,t-1)) = q(2,5,0), t = 2
  auto q = e319->parse_point("q(2,5,1)");
  CHECK(e319->encode_point(e319->iterate(q, 1)) == "q(2,5,0)");
  CHECK(e319->encode_point(e319->iterate(q, -1)) == "q(2,5,0)");
  CHECK(e319->encode_point(e319->iterate(q, 4)) == "q(2,5,1)");

  // d(q(1,k,j), y in Y) = 1/k + d0(g^j(p), y)
  auto base = make_system("shift");
  BiSeq p01 = BiSeq::periodic("01");
  auto y = pv(BiSeq::constant('0'));
  Rat d0 = base->distance(pv(p01.shifted(1)), y);
  auto qe = e319->parse_point("q(1,4,1)");
  CHECK(e319->distance(qe, PointValue(E319{BiSeq::constant('0')})) == Rat(1, 4) + d0);

  // E-cycles are permuted: i,k fixed, j rotates
  for (int j = 0; j < 2; ++j) {
    auto pt = e319->parse_point("q(3,2," + std::to_string(j) + ")");
    auto around = e319->iterate(pt, 2);
    CHECK(e319->equal_points(pt, around));
  }

  // construction guards
  try {
    make_example_3_19(base, pv(BiSeq::constant('0')), 2);
    FAIL("constant point has period 1, not prime period 2");
  } catch (const Error& e) {
    CHECK(e.code() == "PeriodNotPrime");
  }
  BiSeq not_per = BiSeq::constant('0');
  not_per.set_symbol(0, '1');
  try {
    make_example_3_19(base, pv(not_per), 2);
    FAIL("non-periodic point accepted");
  } catch (const Error& e) {
    CHECK(e.code() == "NotPeriodic");
  }
}

TEST_CASE("example 3.25: space structure") {
  auto x = make_system("ex325x");
  auto y = make_system("ex325y");
  CHECK(x->in_domain(x->parse_point("a")));
  CHECK_THROWS_AS(y->parse_point("a"), Error);
  auto x5 = x->parse_point("x5");
  auto x6 = x->parse_point("x6");
  Rat gap = x->distance(x5, x6);
  CHECK(gap > 0);
  CHECK(gap < Rat(1, 10000));
  CHECK(x->equal_points(x->iterate(x5, 12), x5));  // identity map
  CHECK(x->distance(x->parse_point("a"), x->parse_point("b")) == Rat(2));
}

TEST_CASE("metric axioms on sampled triples") {
  for (const auto& id :
       {"shift", "oneshift", "doubling-line", "squaring", "tent", "identity",
        "doubling-circle", "ex325x", "ex325y", "ex319"}) {
    CAPTURE(id);
    auto sys = make_system(id);
    check_metric_axioms(*sys, 250, 42);
  }
}

TEST_CASE("iterate composition law") {
  for (const auto& id : {"shift", "doubling-line", "identity", "doubling-circle", "ex319"}) {
    CAPTURE(id);
    check_iterate_composition(*make_system(id), 11);
  }
}

TEST_CASE("invertible systems invert") {
  for (const auto& id : {"shift", "doubling-line", "identity", "ex325x", "ex319"}) {
    CAPTURE(id);
    auto sys = make_system(id);
    auto pts = sys->sample(sys->whole_space(), 8, 3);
    for (auto& p : pts)
      CHECK(sys->equal_points(sys->iterate(sys->iterate(p, -1), 1), p));
  }
}

TEST_CASE("point encodings round-trip") {
  for (const auto& id : {"shift", "oneshift", "squaring", "doubling-circle", "ex325x", "ex319"}) {
    CAPTURE(id);
    auto sys = make_system(id);
    auto pts = sys->sample(sys->whole_space(), 12, 9);
    for (auto& p : pts) {
      auto back = sys->parse_point(sys->encode_point(p));
      CHECK(sys->equal_points(p, back));
    }
  }
}

TEST_CASE("unknown system parameters are schema violations") {
  CHECK_THROWS_AS(make_system("shift", {{"bogus", "1"}}), Error);
  CHECK_THROWS_AS(make_system("nope"), Error);
}
