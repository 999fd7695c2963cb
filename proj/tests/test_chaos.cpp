#include "pdyn/chaos.hpp"

#include "pdyn/rng.hpp"

#include <doctest.h>

using namespace pdyn;

TEST_CASE("sensitivity witness on expanding systems") {
  auto shift = make_system("shift");
  auto x = pv(BiSeq::periodic("01"));
  auto w = sensitivity_witness(*shift, x, {pow2(-5)}, 16, 64, 3);
  REQUIRE(w.has_value());
  CHECK(w->delta_x >= Rat(1, 2));
  CHECK(w->realized > w->delta_x);
  // witness re-check: the realized separation is genuine
  CHECK(shift->distance(shift->iterate(x, w->n), shift->iterate(w->y, w->n)) == w->realized);
  CHECK(shift->distance(x, w->y) < pow2(-5));

  auto circle = make_system("doubling-circle");
  auto wc = sensitivity_witness(*circle, pv_scalar(Rat(3, 10)), {pow2(-10)}, 32, 64, 3);
  REQUIRE(wc.has_value());
  CHECK(wc->realized > wc->delta_x);

  auto ident = make_system("identity");
  CHECK(!sensitivity_witness(*ident, pv_scalar(Rat(1, 3)), {Rat(1, 8)}, 16, 64, 3));
}

TEST_CASE("periodic points in deleted balls (Theorem 4.10 machinery)") {
  auto shift = make_system("shift");
  // non-periodic center
  BiSeq c = BiSeq::constant('0');
  c.set_symbol(0, '1');
  c.set_symbol(5, '1');
  for (int m = 1; m <= 6; ++m) {
    auto p = periodic_point_in_deleted_ball(*shift, pv(c), pow2(-m));
    REQUIRE(p.has_value());
    CHECK(!shift->equal_points(*p, pv(c)));
    CHECK(shift->distance(*p, pv(c)) < pow2(-m));
    // really periodic
    bool periodic = false;
    PointValue cur = *p;
    for (int per = 1; per <= 64 && !periodic; ++per) {
      cur = shift->iterate(cur, 1);
      if (shift->equal_points(cur, *p)) periodic = true;
    }
    CHECK(periodic);
  }
  // periodic center exercises the far-point branch
  auto xp = pv(BiSeq::constant('0'));
  for (int m = 1; m <= 6; ++m) {
    auto p = periodic_point_in_deleted_ball(*shift, xp, pow2(-m));
    REQUIRE(p.has_value());
    CHECK(!shift->equal_points(*p, xp));
    CHECK(shift->distance(*p, xp) < pow2(-m));
  }
}

TEST_CASE("dense periodic verdicts") {
  auto shift = make_system("shift");
  std::vector<Rat> radii;
  for (int m = 1; m <= 6; ++m) radii.push_back(pow2(-m));
  auto v = dense_periodic_at_point(*shift, pv(BiSeq::periodic("011")), radii, 8);
  CHECK(v.holds());

  // squaring at 1/2: the only periodic points are 0 and 1, both at distance 1/2
  auto squaring = make_system("squaring");
  auto vs = dense_periodic_at_point(*squaring, pv_scalar(Rat(1, 2)), {Rat(1, 4)}, 8);
  CHECK(vs.fails());
  CHECK(vs.limit_certified);

  // radius beyond the diameter: any other periodic point qualifies
  auto vwide = dense_periodic_at_point(*squaring, pv_scalar(Rat(1, 2)), {Rat(2)}, 8);
  CHECK(vwide.holds());
}

TEST_CASE("Theorem 4.11 construction on the shift") {
  auto shift = make_system("shift");
  auto x = pv(BiSeq::periodic("011"));
  auto q = pv(BiSeq::constant('1'));
  auto res = sensitivity_constant_from_periodic(*shift, x, q, ball(x, Rat(1, 4), true), 64, 5);
  REQUIRE(res.ok);
  // delta = 2 d(x, O(q)) and eta = delta / 8, exact dyadics
  Rat dorb = shift->distance(x, q);
  PointValue cur = q;
  CHECK(res.eta == dorb * 2 / 8);
  // re-verify the realized disjunct distance exactly
  long long nj = res.witness["nj"].get<long long>();
  Rat claimed = rat_from_string(res.witness["distance"].get<std::string>());
  PointValue other = res.witness["side"] == "periodic"
                         ? shift->parse_point(res.witness["p"].get<std::string>())
                         : shift->parse_point(res.witness["y"].get<std::string>());
  CHECK(shift->distance(shift->iterate(other, nj), shift->iterate(x, nj)) == claimed);
  CHECK(claimed > res.eta);
  (void)cur;
}

TEST_CASE("Theorem 4.11 construction on the doubling circle") {
  auto circle = make_system("doubling-circle");
  // x: de-Bruijn-flavoured rational with a rich orbit; q = 0 fixed point
  auto x = pv_scalar(Rat(5, 24));
  auto q = pv_scalar(Rat(0));
  auto res =
      sensitivity_constant_from_periodic(*circle, x, q, ball(x, Rat(1, 8), true), 64, 5);
  REQUIRE(res.ok);
  long long nj = res.witness["nj"].get<long long>();
  Rat claimed = rat_from_string(res.witness["distance"].get<std::string>());
  PointValue other = res.witness["side"] == "periodic"
                         ? circle->parse_point(res.witness["p"].get<std::string>())
                         : circle->parse_point(res.witness["y"].get<std::string>());
  CHECK(circle->distance(circle->iterate(other, nj), circle->iterate(x, nj)) == claimed);
  CHECK(claimed > res.eta);
}

TEST_CASE("Theorem 4.11 rejects x on the orbit of q") {
  auto shift = make_system("shift");
  auto q = pv(BiSeq::periodic("01"));
  CHECK_THROWS_AS(sensitivity_constant_from_periodic(*shift, q, q, ball(q, Rat(1, 4), true),
                                                     16, 5),
                  Error);
}

TEST_CASE("Devaney verdicts") {
  auto shift = make_system("shift");
  auto probes = default_probe_regions(*shift, 5, 7);
  auto x = pv(BiSeq::periodic("01"));
  auto rep = devaney_point_verdict(*shift, x, {Rat(1, 2), Rat(1, 4), Rat(1, 8)}, probes, 24,
                                   6, 16, 64, 3);
  CHECK(rep.overall.holds());
  CHECK(rep.transitive.holds());
  CHECK(rep.dense_periodic.holds());
  CHECK(rep.sensitivity.has_value());

  // doubling line at x = 1: transitivity fails with an escape certificate
  auto dbl = make_system("doubling-line");
  auto dprobes = default_probe_regions(*dbl, 5, 7);
  auto repd = devaney_point_verdict(*dbl, pv_scalar(Rat(1)), {Rat(1, 8)}, dprobes, 24, 6, 16,
                                    64, 3);
  CHECK(repd.overall.fails());
  CHECK(repd.transitive.fails());
}
