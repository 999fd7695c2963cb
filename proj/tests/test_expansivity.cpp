#include "pdyn/expansivity.hpp"

#include "oracles.hpp"
#include "pdyn/rng.hpp"

#include <doctest.h>

#include <set>

using namespace pdyn;

namespace {

oracle::Window window_of(const BiSeq& s, int W) {
  oracle::Window w{W, std::string()};
  w.buf = s.window(-W, W);
  return w;
}

BiSeq seeded_center(uint64_t seed) {
  SplitMix64 rng(seed);
  BiSeq s = BiSeq::constant('0');
  for (long long n = -10; n <= 10; ++n)
    if (rng.coin()) s.set_symbol(n, '1');
  return s;
}

}  // namespace

TEST_CASE("gamma_ball matches the brute-force window oracle") {
  auto shift = make_system("shift");
  for (uint64_t seed : {1u, 2u}) {
    BiSeq center = seeded_center(seed);
    for (int T : {0, 1, 3}) {
      for (const Rat& delta : {Rat(1, 2), Rat(1, 4), Rat(1, 8)}) {
        CAPTURE(T);
        CAPTURE(rat_to_string(delta));
        auto ball = gamma_ball(*shift, pv(center), delta, WindowSpec::two_sided(T));
        REQUIRE(ball.is_cylinder());
        int rad = log2_ceil_inv(delta) - 1;
        int Tp = T + rad + 2;  // leave free coordinates beyond the expected radius
        int W = Tp + T + rad + 2;
        auto brute = oracle::brute_force_gamma_cylinder(window_of(center, W), T, delta, Tp, 2);
        CHECK(brute == ball.cylinder().constraints);
      }
    }
  }
}

TEST_CASE("gamma_ball frozen shapes on the 2-shift") {
  auto shift = make_system("shift");
  BiSeq c = seeded_center(3);
  // delta=1/2, T=0: a disagreement at |n|=1 still has distance 1/2 <= delta,
  // so only coordinate 0 is pinned (oracle-validated radius convention)
  auto b0 = gamma_ball(*shift, pv(c), Rat(1, 2), WindowSpec::two_sided(0));
  CHECK(b0.cylinder().constraints == std::map<long long, char>{{0, c.at(0)}});
  CHECK(b0.cylinder().collapses_in_limit);

  auto b12 = gamma_ball(*shift, pv(c), Rat(1, 2), WindowSpec::two_sided(12));
  CHECK(b12.cylinder().constraints.size() == 25);  // |n| <= 12
  CHECK(b12.cylinder().constraints.begin()->first == -12);

  // delta >= diameter: nothing is ever constrained
  auto bwide = gamma_ball(*shift, pv(c), Rat(1), WindowSpec::two_sided(4));
  CHECK(bwide.cylinder().constraints.empty());
  CHECK(!bwide.cylinder().collapses_in_limit);
}

TEST_CASE("phi_ball one-sided agreement window") {
  auto oneshift = make_system("oneshift");
  OneSeq x{"110", "0"};
  auto b = phi_ball(*oneshift, pv(x), Rat(1, 2), 4);
  REQUIRE(b.is_cylinder());
  std::map<long long, char> want;
  for (long long n = 0; n <= 4; ++n) want[n] = x.at(n);
  CHECK(b.cylinder().constraints == want);
  CHECK(b.cylinder().collapses_in_limit);

  // vacuous constraint when delta covers the diameter
  auto huge = phi_ball(*oneshift, pv(x), Rat(2), 4);
  CHECK(huge.cylinder().constraints.empty());
}

TEST_CASE("ball monotonicity in horizon and radius") {
  auto shift = make_system("shift");
  BiSeq c = seeded_center(7);
  for (int T = 0; T < 5; ++T) {
    auto smaller = gamma_ball(*shift, pv(c), Rat(1, 4), WindowSpec::two_sided(T + 1));
    auto larger = gamma_ball(*shift, pv(c), Rat(1, 4), WindowSpec::two_sided(T));
    CHECK(cylinder_subset(smaller.cylinder(), larger.cylinder()));
  }
  auto fine = gamma_ball(*shift, pv(c), Rat(1, 8), WindowSpec::two_sided(3));
  auto coarse = gamma_ball(*shift, pv(c), Rat(1, 2), WindowSpec::two_sided(3));
  CHECK(cylinder_subset(fine.cylinder(), coarse.cylinder()));

  // explicit representations: same candidate pool, membership monotone in T
  auto e319 = make_system("ex319");
  auto q = e319->parse_point("q(1,6,0)");
  auto bigger = gamma_ball(*e319, q, Rat(1, 3), WindowSpec::two_sided(2), 256, 5);
  auto smaller = gamma_ball(*e319, q, Rat(1, 3), WindowSpec::two_sided(6), 256, 5);
  std::set<std::string> big_set;
  for (auto& p : bigger.explicit_rep().points) big_set.insert(e319->encode_point(p));
  for (auto& p : smaller.explicit_rep().points)
    CHECK(big_set.count(e319->encode_point(p)) == 1);
}

TEST_CASE("subgroup balls and the Theorem 3.1 containment") {
  auto shift = make_system("shift");
  BiSeq c = seeded_center(11);
  // m=1 reduces to the full ball
  auto full = gamma_ball(*shift, pv(c), Rat(1, 4), WindowSpec::two_sided(5));
  auto sub1 = gamma_subgroup_ball(*shift, pv(c), Rat(1, 4), 1, 5);
  CHECK(full.cylinder().constraints == sub1.cylinder().constraints);

  // m=2, delta=1/2: only the even shifts are constrained
  auto sub2 = gamma_subgroup_ball(*shift, pv(c), Rat(1, 2), 2, 6);
  for (auto& [idx, sym] : sub2.cylinder().constraints) {
    CHECK(idx % 2 == 0);
    CHECK(sym == c.at(idx));
  }
  CHECK(!sub2.cylinder().collapses_in_limit);

  // uniform continuity: eps = delta * 2^-m forces the full ball inside the
  // subgroup ball at every tested horizon
  for (long long m : {2LL, 3LL}) {
    for (long long T : {1LL, 3LL, 6LL}) {
      for (const Rat& delta : {Rat(1, 2), Rat(1, 4)}) {
        Rat eps = delta * pow2(static_cast<int>(-m));
        auto inner = gamma_ball(*shift, pv(c), eps, WindowSpec::two_sided(m * T));
        auto outer = gamma_subgroup_ball(*shift, pv(c), delta, m, T);
        CHECK(cylinder_subset(inner.cylinder(), outer.cylinder()));
      }
    }
  }
}

TEST_CASE("pointwise expansivity: shift holds at delta 1/2") {
  auto shift = make_system("shift");
  for (long long T : {2LL, 8LL}) {
    auto res = pointwise_expansivity_verdict(*shift, pv(seeded_center(5)),
                                             default_delta_grid(), T);
    REQUIRE(res.delta_x.has_value());
    CHECK(*res.delta_x == Rat(1, 2));
    CHECK(res.verdict.holds());
    CHECK(res.verdict.limit_certified);
  }
}

TEST_CASE("pointwise expansivity: Example 3.25 halves") {
  auto X = make_system("ex325x");
  auto res_a = pointwise_expansivity_verdict(*X, X->parse_point("a"), default_delta_grid(), 8);
  CHECK(!res_a.delta_x.has_value());
  CHECK(res_a.verdict.fails());

  auto Y = make_system("ex325y");
  auto res5 = pointwise_expansivity_verdict(*Y, Y->parse_point("x5"), default_delta_grid(), 8);
  REQUIRE(res5.delta_x.has_value());
  CHECK(res5.verdict.holds());
  CHECK(res5.verdict.limit_certified);
  // accepted delta must be below the min gap to neighbours
  Rat gap = Y->distance(Y->parse_point("x5"), Y->parse_point("x6"));
  CHECK(*res5.delta_x < gap);
}

TEST_CASE("pointwise expansivity: Example 3.19 fails at p with an E-point witness") {
  auto sys = make_system("ex319");
  auto p = sys->parse_point("Y:01||01@0");
  auto res = pointwise_expansivity_verdict(*sys, p, default_delta_grid(), 12);
  CHECK(!res.delta_x.has_value());
  CHECK(res.verdict.fails());
  REQUIRE(res.verdict.witness.contains("witnesses"));
  // the certificate's witnesses really sit in the ball forever: constant 1/k
  for (auto& w : res.verdict.witness["witnesses"]) {
    auto q = sys->parse_point(w.get<std::string>());
    Rat d0 = sys->distance(p, q);
    PointValue fp = p, fq = q;
    for (int n = 1; n <= 16; ++n) {
      fp = sys->iterate(fp, 1);
      fq = sys->iterate(fq, 1);
      CHECK(sys->distance(fp, fq) == d0);
    }
  }

  // base Y-points away from O(p) pass at horizon 12
  BiSeq other = BiSeq::periodic("0011");
  auto res2 = pointwise_expansivity_verdict(*sys, PointValue(E319{other}),
                                            default_delta_grid(), 12);
  CHECK(res2.verdict.holds());
}

TEST_CASE("n-expansive cardinality") {
  auto shift = make_system("shift");
  auto r1 = n_expansive_cardinality(*shift, pv(seeded_center(1)), Rat(1, 2), 10);
  CHECK(r1.kind == CardinalityResult::Kind::Exact);
  CHECK(r1.count == 1);

  auto r2 = n_expansive_cardinality(*shift, pv(seeded_center(1)), Rat(2), 10);
  CHECK(r2.kind == CardinalityResult::Kind::Infinite);

  auto X = make_system("ex325x");
  auto ra = n_expansive_cardinality(*X, X->parse_point("a"), Rat(1, 10), 4);
  CHECK(ra.kind == CardinalityResult::Kind::Infinite);
  CHECK(ra.certificate.contains("kind"));

  CHECK_THROWS_AS(n_expansive_cardinality(*X, X->parse_point("a"), Rat(0), 4), Error);

  // Theorem 3.21 reduction on a finite nontrivial ball: Gamma_{1/32}(x2) = {x2, x3}
  auto Y = make_system("ex325y");
  auto r3 = n_expansive_cardinality(*Y, Y->parse_point("x2"), Rat(1, 32), 4);
  CHECK(r3.kind == CardinalityResult::Kind::Exact);
  CHECK(r3.count == 2);
  REQUIRE(r3.epsilon_x.has_value());
  Rat eps = *r3.epsilon_x;
  CHECK(eps == Y->distance(Y->parse_point("x2"), Y->parse_point("x3")));
  // the derived constant works: the ball at eps/2 collapses to the point
  auto r4 = n_expansive_cardinality(*Y, Y->parse_point("x2"), eps / 2, 4);
  CHECK(r4.kind == CardinalityResult::Kind::Exact);
  CHECK(r4.count == 1);
}

TEST_CASE("mu-generator check on the full 2-shift") {
  auto shift = make_system("shift");
  auto mu = MeasureModel(make_bernoulli({Rat(1, 2), Rat(1, 2)}));
  std::vector<Region> cover{cylinder(0, "0"), cylinder(0, "1")};
  auto x = pv(seeded_center(9));

  auto v6 = mu_generator_check(*shift, cover, x, mu, 6);
  CHECK(v6.holds());
  CHECK(v6.exact);
  // each admissible intersection at T=6 pins 13 coordinates
  auto& table = v6.detail["max_measure_by_horizon"];
  CHECK(table[6]["m_max"] == rat_to_string(pow2(-13)));

  std::vector<Region> trivial{cylinder(0, "")};
  auto vt = mu_generator_check(*shift, trivial, x, mu, 4);
  CHECK(vt.fails());

  auto v0 = mu_generator_check(*shift, cover, x, mu, 0);
  CHECK(v0.outcome == Outcome::Inconclusive);

  std::vector<Region> not_cover{cylinder(0, "0")};
  CHECK_THROWS_AS(mu_generator_check(*shift, not_cover, x, mu, 2), Error);
}

TEST_CASE("measure of cylinder balls") {
  auto shift = make_system("shift");
  auto x = pv(seeded_center(13));
  auto mu = MeasureModel(make_bernoulli({Rat(1, 2), Rat(1, 2)}));
  for (int T : {0, 2, 5}) {
    auto b = gamma_ball(*shift, x, Rat(1, 4), WindowSpec::two_sided(T));
    auto m = measure_of_ball(*shift, mu, b);
    REQUIRE(m.exact.has_value());
    CHECK(*m.exact == pow2(-(int)b.cylinder().constraints.size()));
  }

  // Bernoulli(1/3, 2/3) on the cylinder {x_0=1, x_1=1}
  DynamicalBall manual{x, Rat(1, 2), WindowSpec::two_sided(0),
                       CylinderRep{{{0, '1'}, {1, '1'}}, false}};
  auto m2 = measure_of_ball(*shift, MeasureModel(make_bernoulli({Rat(1, 3), Rat(2, 3)})),
                            manual);
  CHECK(*m2.exact == Rat(4, 9));

  DynamicalBall whole{x, Rat(2), WindowSpec::two_sided(0), CylinderRep{{}, false}};
  CHECK(*measure_of_ball(*shift, mu, whole).exact == Rat(1));

  // Markov chain measure: pi P = pi with exact rationals
  auto markov = MeasureModel(make_markov({{Rat(1, 2), Rat(1, 2)}, {Rat(1, 4), Rat(3, 4)}},
                                         {Rat(1, 3), Rat(2, 3)}));
  DynamicalBall pair{x, Rat(1, 2), WindowSpec::two_sided(0),
                     CylinderRep{{{0, '0'}, {2, '1'}}, false}};
  // P^2[0][1] = 5/8; measure = 1/3 * 5/8
  CHECK(*measure_of_ball(*shift, markov, pair).exact == Rat(5, 24));
}

TEST_CASE("converging semiorbits") {
  auto ident = make_system("identity");
  auto v = converging_semiorbit_check(*ident, pv_scalar(Rat(2, 7)), 16, Rat(1, 8));
  CHECK(v.holds());

  auto circle = make_system("doubling-circle");
  auto vc = converging_semiorbit_check(*circle, pv_scalar(Rat(1, 3)), 16, Rat(1, 8));
  CHECK(vc.fails());  // orbit alternates 1/3, 2/3

  auto e319 = make_system("ex319");
  auto vq = converging_semiorbit_check(*e319, e319->parse_point("q(1,4,0)"), 16, Rat(1, 8));
  CHECK(vq.fails());

  // membership in A(x, y, n, m)
  auto vm = converging_pair_membership(*ident, pv_scalar(Rat(1, 3)), pv_scalar(Rat(1, 3)),
                                       pv_scalar(Rat(1, 3)), 4, 0, 12);
  CHECK(vm.holds());
}

TEST_CASE("asymptotic pairs on the 2-shift") {
  auto shift = make_system("shift");
  BiSeq y;  // ...111.000...
  y.left = "1";
  y.core = "";
  y.right = "0";
  y.offset = 0;
  auto p = pv(BiSeq::constant('0'));
  auto q = pv(BiSeq::constant('1'));
  auto v = asymptotic_pair_check(*shift, pv(y), p, q, 16, Rat(1, 8));
  CHECK(v.holds());

  auto triv = asymptotic_pair_check(*shift, p, p, p, 16, Rat(1, 8));
  CHECK(triv.holds());

  auto v2 = asymptotic_pair_check(*shift, pv(BiSeq::periodic("01")), p, p, 16, Rat(1, 8));
  CHECK(v2.fails());
  CHECK_THROWS_AS(
      asymptotic_pair_check(*make_system("squaring"), pv_scalar(Rat(1, 2)),
                            pv_scalar(Rat(0)), pv_scalar(Rat(0)), 8, Rat(1, 8)),
      Error);
}

TEST_CASE("local stable and unstable sets") {
  auto squaring = make_system("squaring");
  CHECK(local_stable_membership(*squaring, pv_scalar(Rat(1, 10)), pv_scalar(Rat(0)),
                                Rat(1, 5), 10)
            .holds());
  CHECK(local_stable_membership(*squaring, pv_scalar(Rat(1, 10)), pv_scalar(Rat(1, 10)),
                                Rat(1, 100), 10)
            .holds());

  auto dbl = make_system("doubling-line");
  auto v = local_stable_membership(*dbl, pv_scalar(Rat(1)), pv_scalar(Rat(11, 10)),
                                   Rat(1, 20), 6);
  CHECK(v.fails());
  CHECK(v.witness["i"].get<long long>() >= 0);

  CHECK_THROWS_AS(local_unstable_membership(*squaring, pv_scalar(Rat(1, 10)),
                                            pv_scalar(Rat(0)), Rat(1, 5), 10),
                  Error);
  // unstable on the doubling line contracts backwards
  CHECK(local_unstable_membership(*dbl, pv_scalar(Rat(1)), pv_scalar(Rat(21, 20)),
                                  Rat(1, 10), 10)
            .holds());
}

TEST_CASE("sink check") {
  auto shift = make_system("shift");
  auto v = sink_check(*shift, pv(seeded_center(2)), Rat(1, 2), 8);
  CHECK(v.fails());  // far-forward flips sit in the unstable cylinder
  auto w = shift->parse_point(v.witness.get<std::string>());
  CHECK(local_unstable_membership(*shift, w, pv(seeded_center(2)), Rat(1, 2), 8).holds());

  auto Y = make_system("ex325y");
  auto vy = sink_check(*Y, Y->parse_point("x0"), Rat(1, 10), 8);
  CHECK(vy.holds());
  CHECK(vy.limit_certified);  // isolated point of an identity system

  auto vwide = sink_check(*shift, pv(seeded_center(2)), Rat(2), 8);
  CHECK(vwide.fails());
}

TEST_CASE("canonical coordinates") {
  auto shift = make_system("shift");
  auto v = canonical_coordinates_check(*shift, Rat(1, 2), {Rat(1, 4)}, 12, 8, 21);
  CHECK(v.holds());

  auto X = make_system("ex325x");
  auto vx = canonical_coordinates_check(*X, pow2(-20), {pow2(-10)}, 60, 8, 21);
  CHECK(vx.fails());
}

TEST_CASE("periodic restriction expansivity") {
  auto shift = make_system("shift");
  auto v = periodic_restriction_expansivity(*shift, default_delta_grid(), 4, 8);
  CHECK(v.holds());
  CHECK(v.limit_certified);

  auto X = make_system("ex325x");
  auto vx = periodic_restriction_expansivity(*X, default_delta_grid(), 1, 8);
  CHECK(vx.fails());

  auto vs = periodic_restriction_expansivity(*make_system("squaring"), default_delta_grid(),
                                             1, 8);
  CHECK(vs.holds());
}
