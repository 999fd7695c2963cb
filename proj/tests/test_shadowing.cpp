#include "pdyn/mixing.hpp"
#include "pdyn/pseudo_orbit.hpp"
#include "pdyn/trace.hpp"
#include "pdyn/expansivity.hpp"

#include "pdyn/rng.hpp"

#include <doctest.h>

using namespace pdyn;

TEST_CASE("perturbed orbits satisfy the defining inequality") {
  for (const auto& id : {"shift", "oneshift", "squaring", "doubling-circle", "ex319"}) {
    CAPTURE(id);
    auto sys = make_system(id);
    auto x = sys->sample(sys->whole_space(), 1, 3)[0];
    auto po = perturbed_orbit(*sys, x, Rat(1, 4), 10, 7);
    CHECK(po.points.size() == 10);
    CHECK(sys->equal_points(po.points[0], x));
    CHECK(pseudo_orbit_valid(*sys, po));
    // determinism
    auto po2 = perturbed_orbit(*sys, x, Rat(1, 4), 10, 7);
    for (size_t i = 0; i < po.points.size(); ++i)
      CHECK(sys->equal_points(po.points[i], po2.points[i]));
  }
  auto shift = make_system("shift");
  CHECK_THROWS_AS(perturbed_orbit(*shift, pv(BiSeq::constant('0')), Rat(0), 5, 1), Error);
  CHECK_THROWS_AS(perturbed_orbit(*shift, pv(BiSeq::constant('0')), Rat(1, 4), 1, 1), Error);
}

TEST_CASE("a true orbit traces itself with zero error") {
  auto squaring = make_system("squaring");
  std::vector<PointValue> pts;
  PointValue cur = pv_scalar(Rat(9, 10));
  for (int i = 0; i < 5; ++i) {
    pts.push_back(cur);
    cur = squaring->iterate(cur, 1);
  }
  auto po = make_pseudo_orbit(*squaring, Rat(1), std::move(pts));
  auto out = trace(*squaring, po, Rat(1, 100), 1);
  REQUIRE(trace_succeeded(out));
  auto& r = std::get<TraceResult>(out);
  CHECK(r.strategy == "exact_orbit");
  CHECK(as_scalar(r.tracer).value == Rat(9, 10));
}

TEST_CASE("splice tracing on the full 2-shift") {
  auto shift = make_system("shift");
  SplitMix64 rng(11);
  for (int t = 0; t < 25; ++t) {
    auto x = shift->sample(shift->whole_space(), 1, shard_seed(40, t))[0];
    auto po = perturbed_orbit(*shift, x, Rat(1, 4), 10 + (int)rng.below(20),
                              shard_seed(41, t));
    auto out = trace(*shift, po, Rat(1, 2), shard_seed(42, t));
    REQUIRE(trace_succeeded(out));
    auto& r = std::get<TraceResult>(out);
    CHECK(r.max_error < Rat(1, 2));
    CHECK(r.exact);
    // independent re-check of the tracing inequality at every index
    PointValue cur = r.tracer;
    for (size_t i = 0; i < po.points.size(); ++i) {
      if (i > 0) cur = shift->iterate(cur, 1);
      CHECK(shift->distance(cur, po.points[i]) < Rat(1, 2));
    }
  }
}

TEST_CASE("interval-chain tracing near the squaring fixed point") {
  auto squaring = make_system("squaring");
  auto po = perturbed_orbit(*squaring, pv_scalar(Rat(1)), Rat(1, 64), 12, 5);
  auto out = trace(*squaring, po, Rat(1, 10), 5);
  REQUIRE(trace_succeeded(out));
  auto& r = std::get<TraceResult>(out);
  CHECK(r.max_error < Rat(1, 10));
}

TEST_CASE("circle digit tracer") {
  auto circle = make_system("doubling-circle");
  auto po = perturbed_orbit(*circle, pv_scalar(Rat(1, 3)), Rat(1, 32), 10, 9);
  auto out = trace(*circle, po, Rat(1, 4), 9);
  REQUIRE(trace_succeeded(out));
  CHECK(std::get<TraceResult>(out).max_error < Rat(1, 4));
}

TEST_CASE("shadowable point verdicts") {
  auto shift = make_system("shift");
  auto v = shadowable_point_verdict(*shift, pv(BiSeq::periodic("011")), Rat(1, 2),
                                    default_delta_grid(), 12, 16, 3);
  CHECK(v.holds());
  CHECK(v.detail["delta"] == "1/4");

  auto squaring = make_system("squaring");
  auto vs = shadowable_point_verdict(*squaring, pv_scalar(Rat(1)), Rat(1, 10),
                                     default_delta_grid(), 8, 12, 3);
  CHECK(vs.holds());

  auto dbl = make_system("doubling-line");
  auto vd = shadowable_point_verdict(*dbl, pv_scalar(Rat(0)), Rat(1, 10),
                                     default_delta_grid(), 8, 12, 3);
  CHECK(vd.holds());
  auto vd2 = shadowable_point_verdict(*dbl, pv_scalar(Rat(3)), Rat(1, 10),
                                      default_delta_grid(), 8, 12, 3);
  CHECK(vd2.holds());
}

TEST_CASE("mixing transition times on the shift") {
  auto shift = make_system("shift");
  // cylinders of word length 3 at the origin: compatible once windows clear
  auto res = mixing_transition_time(*shift, cylinder(0, "010"), cylinder(0, "111"), 16);
  REQUIRE(res.kind == TransitionResult::Kind::Found);
  CHECK(res.N <= 3);
  CHECK(res.detail["holds_for_all_larger_n"] == true);
  // explicit witness for one n: concatenated word
  long long n = res.N;
  BiSeq w = BiSeq::constant('0');
  for (int j = 0; j < 3; ++j) w.set_symbol(j, "111"[j]);          // in V
  for (int j = 0; j < 3; ++j) w.set_symbol(j + n, "010"[j]);      // sigma^n w in U ... w in f^n(U)
  PointValue shifted = shift->iterate(pv(w), n);
  (void)shifted;
  for (int j = 0; j < 3; ++j) CHECK(w.at(j) == "111"[j]);
}

TEST_CASE("escaping interval yields a machine-checkable failure certificate") {
  auto dbl = make_system("doubling-line");
  auto res = mixing_transition_time(*dbl, interval(Rat(1), Rat(2)), interval(Rat(0), Rat(1, 2)), 24);
  REQUIRE(res.kind == TransitionResult::Kind::CertifiedNever);
  CHECK(res.certificate["kind"] == "escape_up");
  // re-check the certificate: the image at from_n really clears sup V, and
  // the invariant f(x) >= x keeps it there
  Rat img_lo = rat_from_string(res.certificate["image_lo"].get<std::string>());
  CHECK(img_lo > Rat(1, 2));
  CHECK(img_lo * 2 >= img_lo);

  auto squaring = make_system("squaring");
  auto res2 = mixing_transition_time(*squaring, interval(Rat(9, 20), Rat(11, 20)),
                                     interval(Rat(4, 5), Rat(9, 10)), 24);
  REQUIRE(res2.kind == TransitionResult::Kind::CertifiedNever);
  CHECK(res2.certificate["kind"] == "collapse_down");
}

TEST_CASE("squaring map reaches low probes from near 1") {
  auto squaring = make_system("squaring");
  auto res = mixing_transition_time(*squaring, interval(Rat(9, 10), Rat(1)),
                                    interval(Rat(0), Rat(1, 10)), 24);
  REQUIRE(res.kind == TransitionResult::Kind::Found);
  // 0.9^(2^n) < 0.1 from n = 5 on; the interval keeps 1 as its right end
  CHECK(res.N == 5);
}

TEST_CASE("mixing point verdicts across the zoo") {
  auto shift = make_system("shift");
  auto probes = default_probe_regions(*shift, 6, 5);
  auto v = mixing_point_verdict(*shift, pv(BiSeq::periodic("01")),
                                {Rat(1, 2), Rat(1, 4)}, probes, 24);
  CHECK(v.holds());

  auto dbl = make_system("doubling-line");
  auto dprobes = default_probe_regions(*dbl, 5, 5);
  for (const Rat& x : {Rat(1, 2), Rat(1), Rat(2)}) {
    auto vd = mixing_point_verdict(*dbl, pv_scalar(x), {Rat(1, 8)}, dprobes, 24);
    CHECK(vd.fails());
    CHECK(vd.witness.contains("certificate"));
  }
  // x = 0 is the mixing point: balls around 0 stretch over everything bounded
  auto v0 = mixing_point_verdict(*dbl, pv_scalar(Rat(0)), {Rat(1, 8)}, dprobes, 24);
  CHECK(v0.holds());

  auto squaring = make_system("squaring");
  auto sprobes = default_probe_regions(*squaring, 5, 5);
  auto v1 = mixing_point_verdict(*squaring, pv_scalar(Rat(1)), {Rat(1, 8)}, sprobes, 64);
  CHECK(v1.holds());
  auto vhalf = mixing_point_verdict(*squaring, pv_scalar(Rat(1, 2)), {Rat(1, 8)}, sprobes, 64);
  CHECK(vhalf.fails());

  // transitivity only needs one hitting time
  auto vt = transitive_point_verdict(*squaring, pv_scalar(Rat(1)), {Rat(1, 8)}, sprobes, 64);
  CHECK(vt.holds());
}
