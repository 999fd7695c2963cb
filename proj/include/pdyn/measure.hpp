#pragma once

#include "pdyn/rational.hpp"
#include "pdyn/region.hpp"

#include <cstdint>
#include <map>
#include <variant>
#include <vector>

namespace pdyn {

// Product measure on a full shift: independent coordinates, P(symbol s) = probs[s].
struct BernoulliMeasure {
  std::vector<Rat> probs;  // nonnegative, sums exactly to 1
};

// Stationary Markov measure: stochastic matrix P with stationary vector pi
// (pi P = pi, both exact).
struct MarkovMeasure {
  std::vector<std::vector<Rat>> P;
  std::vector<Rat> pi;
};

// Sampling stand-in for measures without cylinder algebra.
struct EmpiricalSampler {
  Region region;
  uint64_t seed = 0;
  int samples = 100000;
};

using MeasureModel = std::variant<BernoulliMeasure, MarkovMeasure, EmpiricalSampler>;

// Validating constructors; throw Error(PreconditionViolation) on bad inputs.
BernoulliMeasure make_bernoulli(std::vector<Rat> probs);
MarkovMeasure make_markov(std::vector<std::vector<Rat>> P, std::vector<Rat> pi);

int measure_alphabet(const MeasureModel& m);  // 0 for EmpiricalSampler

// Exact measure of the cylinder fixing the given coordinates. Empty
// constraint set measures the whole space (1).
Rat cylinder_measure(const MeasureModel& m, const std::map<long long, char>& constraints);

// 95% Wilson interval half-width for `hits` successes out of `n`.
double wilson_half_width(long long hits, long long n);

}  // namespace pdyn
