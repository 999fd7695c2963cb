#pragma once

#include "pdyn/ball.hpp"
#include "pdyn/measure.hpp"
#include "pdyn/system.hpp"
#include "pdyn/verdict.hpp"

#include <optional>
#include <vector>

namespace pdyn {

// Geometric grid 2^0 .. 2^-16.
std::vector<Rat> default_delta_grid();

DynamicalBall gamma_ball(const System& sys, const PointValue& x, const Rat& delta,
                         const WindowSpec& window, int candidate_budget = 512,
                         uint64_t seed = 0);

DynamicalBall phi_ball(const System& sys, const PointValue& x, const Rat& delta, long long T,
                       int candidate_budget = 512, uint64_t seed = 0);

DynamicalBall gamma_subgroup_ball(const System& sys, const PointValue& x, const Rat& delta,
                                  long long m, long long T, int candidate_budget = 512,
                                  uint64_t seed = 0);

struct ExpansivityResult {
  std::optional<Rat> delta_x;  // largest accepted grid delta, if any
  Verdict verdict;
};
ExpansivityResult pointwise_expansivity_verdict(const System& sys, const PointValue& x,
                                                const std::vector<Rat>& delta_grid, long long T,
                                                int budget = 512, uint64_t seed = 0);

struct CardinalityResult {
  enum class Kind { Exact, LowerBound, Infinite } kind;
  long long count = 0;                 // meaningless for Infinite
  std::optional<Rat> epsilon_x;        // min_{y in ball, y != x} d(x,y); the
                                       // derived expansivity constant when the
                                       // ball is finite
  json certificate;                    // Infinite: machine-checkable reason
};
CardinalityResult n_expansive_cardinality(const System& sys, const PointValue& x,
                                          const Rat& delta, long long T, int budget = 512,
                                          uint64_t seed = 0);

Verdict mu_generator_check(const System& sys, const std::vector<Region>& cover,
                           const PointValue& x, const MeasureModel& mu, long long T);

struct BallMeasure {
  std::optional<Rat> exact;  // cylinder balls under Bernoulli/Markov
  double estimate = 0;       // always filled (exact value when available)
  double half_width_95 = 0;  // 0 for exact results
};
BallMeasure measure_of_ball(const System& sys, const MeasureModel& mu, const DynamicalBall& b);

Verdict converging_semiorbit_check(const System& sys, const PointValue& x, long long T,
                                   const Rat& tol);

// z in A(x, y, n, m) up to horizon T: max{d(f^-i z, x), d(f^i z, y)} <= 1/n
// for m <= i <= T.
Verdict converging_pair_membership(const System& sys, const PointValue& z, const PointValue& x,
                                   const PointValue& y, long long n, long long m, long long T);

Verdict asymptotic_pair_check(const System& sys, const PointValue& y, const PointValue& p,
                              const PointValue& q, long long T, const Rat& tol);

Verdict local_stable_membership(const System& sys, const PointValue& y, const PointValue& x,
                                const Rat& delta, long long T);
Verdict local_unstable_membership(const System& sys, const PointValue& y, const PointValue& x,
                                  const Rat& delta, long long T);

Verdict sink_check(const System& sys, const PointValue& x, const Rat& delta, long long T,
                   int budget = 512, uint64_t seed = 0);

Verdict canonical_coordinates_check(const System& sys, const Rat& eps,
                                    const std::vector<Rat>& delta_grid, int pair_budget,
                                    long long T, uint64_t seed = 0);

Verdict periodic_restriction_expansivity(const System& sys, const std::vector<Rat>& delta_grid,
                                         long long period_bound, long long T);

}  // namespace pdyn
