#include "pdyn/entropy.hpp"

#include "oracles.hpp"
#include "pdyn/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace pdyn;

TEST_CASE("separated sets on the 2-shift: s_n = 2^n, oracle-checked") {
  auto shift = make_system("shift");
  for (long long n = 1; n <= 8; ++n) {
    auto s = separated_set(*shift, shift->whole_space(), 0, n, Rat(1, 2),
                           SeparationMode::ExactMaximum);
    CHECK((long long)s.points.size() == (1LL << n));
    CHECK((long long)s.points.size() == oracle::brute_force_separated_count((int)n, Rat(1, 2)));
    // invariant re-validation with the real metric
    for (size_t i = 0; i < s.points.size(); ++i)
      for (size_t j = i + 1; j < s.points.size(); ++j)
        CHECK(bowen_distance(*shift, s.points[i], s.points[j], n) > Rat(1, 2));
  }
  // greedy never exceeds exact
  for (long long n : {3LL, 5LL}) {
    auto g = separated_set(*shift, shift->whole_space(), 0, n, Rat(1, 2),
                           SeparationMode::GreedyMaximal);
    auto e = separated_set(*shift, shift->whole_space(), 0, n, Rat(1, 2),
                           SeparationMode::ExactMaximum);
    CHECK(g.points.size() <= e.points.size());
  }
}

TEST_CASE("separated sets degenerate cases") {
  auto shift = make_system("shift");
  // eps >= diameter: singleton
  auto s = separated_set(*shift, shift->whole_space(), 0, 1, Rat(2),
                         SeparationMode::ExactMaximum);
  CHECK(s.points.size() == 1);

  // identity map: d_n = d; all spread-out candidates survive
  auto ident = make_system("identity");
  auto si = separated_set(*ident, ident->whole_space(), 64, 4, Rat(1, 100),
                          SeparationMode::GreedyMaximal);
  CHECK(si.points.size() > 30);
  auto si2 = separated_set(*ident, ident->whole_space(), 64, 1, Rat(2),
                           SeparationMode::GreedyMaximal);
  CHECK(si2.points.size() == 1);
}

TEST_CASE("monotone sweep matches an all-pairs greedy oracle on the squaring map") {
  auto squaring = make_system("squaring");
  for (long long n : {4LL, 8LL}) {
    auto fast = separated_set(*squaring, squaring->whole_space(), 256, n, Rat(1, 8),
                              SeparationMode::GreedyMaximal, 5);
    // oracle: same grid, greedy with separation checked against every kept point
    std::vector<double> grid;
    for (int i = 0; i < 256; ++i) grid.push_back((double)i / 255.0);
    std::vector<double> kept;
    for (double v : grid) {
      bool ok = true;
      for (double w : kept) {
        double dn = 0, a = v, b = w;
        for (long long t = 0; t < n; ++t) {
          dn = std::max(dn, std::abs(a - b));
          a *= a;
          b *= b;
        }
        if (!(dn > 0.125)) ok = false;
      }
      if (ok) kept.push_back(v);
    }
    CHECK(fast.points.size() == kept.size());
  }
}

TEST_CASE("entropy of the full 2-shift is exactly log 2") {
  auto shift = make_system("shift");
  auto est = entropy_estimate(*shift, shift->whole_space(), 0, {Rat(1, 2)}, 12,
                              SeparationMode::ExactMaximum);
  CHECK(est.exact_fit);
  CHECK(est.exact_zero_residual);
  CHECK(est.exact_slope_log2 == "1/1");
  CHECK(est.fitted_rate == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  // the rate column is identically log 2
  for (auto& row : est.table) CHECK(row.rate == std::log(2.0));
}

TEST_CASE("squaring map rate collapses toward zero") {
  auto squaring = make_system("squaring");
  auto est = entropy_estimate(*squaring, squaring->whole_space(), 512,
                              default_eps_schedule(), 16, SeparationMode::GreedyMaximal, 3);
  CHECK(est.fitted_rate <= 0.02);
  CHECK(est.fitted_rate >= -0.02);
}

TEST_CASE("doubling line restricted to [0,1] shows rate near log 2") {
  auto dbl = make_system("doubling-line");
  auto est = entropy_estimate(*dbl, interval(Rat(0), Rat(1), true, true), (1 << 22) + 1,
                              {pow2(-6)}, 12, SeparationMode::GreedyMaximal, 3);
  CHECK(est.fitted_rate > 0.67);
  CHECK(est.fitted_rate < 0.70);
}

TEST_CASE("entropy certificate from two specification points") {
  auto shift = make_system("shift");
  auto x = pv(BiSeq::constant('0'));
  auto y = pv(BiSeq::constant('1'));
  auto cert = entropy_certificate_from_spec_points(*shift, x, y, Rat(3, 10), 4, 6);
  CHECK(cert.family.size() == 128);
  CHECK(cert.separation_steps == 28);
  CHECK(cert.bound == doctest::Approx(std::log(2.0) / 4).epsilon(1e-15));
  CHECK(cert.separations.size() == 128 * 127 / 2);

  auto j = entropy_certificate_to_json(*shift, cert);
  std::vector<std::string> errors;
  CHECK(verify_entropy_certificate(j, &errors));
  CHECK(errors.empty());

  // tamper detection: flip a coordinate of one tracer
  json bad = j;
  std::string enc = bad["family"][3].get<std::string>();
  auto pt = as_biseq(shift->parse_point(enc));
  pt.set_symbol(0, pt.at(0) == '0' ? '1' : '0');
  bad["family"][3] = pt.encode();
  errors.clear();
  CHECK(!verify_entropy_certificate(bad, &errors));
  CHECK(!errors.empty());

  // empty family is a shape error
  json empty = j;
  empty["family"] = json::array();
  CHECK(!verify_entropy_certificate(empty, nullptr));
}

TEST_CASE("entropy certificate n = 0 and precondition guards") {
  auto shift = make_system("shift");
  auto x = pv(BiSeq::constant('0'));
  auto y = pv(BiSeq::constant('1'));
  auto cert = entropy_certificate_from_spec_points(*shift, x, y, Rat(3, 10), 6, 0);
  CHECK(cert.family.size() == 2);
  // separation at time 0 from d(x,y) > 3 eps minus tracing errors
  CHECK(verify_entropy_certificate(entropy_certificate_to_json(*shift, cert), nullptr));

  CHECK_THROWS_AS(entropy_certificate_from_spec_points(*shift, x, x, Rat(3, 10), 4, 2),
                  Error);
  CHECK_THROWS_AS(entropy_certificate_from_spec_points(*shift, x, y, Rat(1, 2), 4, 2),
                  Error);  // d(x,y) = 1 is not > 3/2
}

TEST_CASE("certificate bound stays below the measured shift entropy") {
  auto shift = make_system("shift");
  auto est = entropy_estimate(*shift, shift->whole_space(), 0, {Rat(1, 2)}, 10,
                              SeparationMode::ExactMaximum);
  for (long long M : {4LL, 6LL}) {
    for (long long n : {2LL, 4LL}) {
      auto cert = entropy_certificate_from_spec_points(
          *shift, pv(BiSeq::constant('0')), pv(BiSeq::constant('1')), Rat(3, 10), M, n);
      CHECK(cert.bound <= est.fitted_rate + est.fit_residual + 1e-12);
    }
  }
}
