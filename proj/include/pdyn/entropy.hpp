#pragma once

#include "pdyn/region.hpp"
#include "pdyn/system.hpp"
#include "pdyn/verdict.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pdyn {

enum class SeparationMode { GreedyMaximal, ExactMaximum };

struct SeparatedSet {
  std::vector<PointValue> points;
  long long n = 1;
  Rat epsilon;
  SeparationMode mode = SeparationMode::GreedyMaximal;
  bool exact = false;  // counts certified (exact metric + exhaustive candidates)
};

// Largest (n, eps)-separated subset of candidates drawn from K. Greedy gives
// a lower bound on s_n; ExactMaximum runs branch-and-bound on the conflict
// graph (candidate sets <= 2^16, else BudgetExceeded).
SeparatedSet separated_set(const System& sys, const Region& K, int budget, long long n,
                           const Rat& epsilon, SeparationMode mode, uint64_t seed = 0);

// Bowen metric d_n(x, y) = max_{0 <= i < n} d(f^i x, f^i y), exact.
Rat bowen_distance(const System& sys, const PointValue& x, const PointValue& y, long long n);

struct EntropyEstimate {
  struct Row {
    Rat epsilon;
    long long n;
    long long count;
    double rate;  // (1/n) ln s_n
  };
  std::vector<Row> table;
  double fitted_rate = 0;   // max over eps of the ln s_n slope on n in [n_max/2, n_max]
  double fit_residual = 0;  // rms residual of the winning fit
  Rat best_epsilon;
  bool exact_fit = false;           // winning fit done in exact arithmetic
  std::string exact_slope_log2;     // slope of log2 s_n as "num/den" when exact
  bool exact_zero_residual = false; // residual is exactly zero
};

EntropyEstimate entropy_estimate(const System& sys, const Region& K, int budget,
                                 const std::vector<Rat>& eps_schedule, long long n_max,
                                 SeparationMode mode, uint64_t seed = 0);

std::vector<Rat> default_eps_schedule();  // 2^-1 .. 2^-8

// Theorem-4.15-style constructive lower bound: 2^(n+1) tracers of the
// {x,y}-tuples at times 0, M, ..., nM, pairwise ((n+1)M, eps)-separated,
// giving bound log(2)/M.
struct EntropyCertificate {
  std::string system_id;
  PointValue x, y;
  Rat epsilon;
  long long M = 1, n = 0;
  std::vector<PointValue> family;  // 2^(n+1) tracers, tuple-code order
  json separations;                // per pair: {i, j, time, distance}
  long long separation_steps = 0;  // (n+1) M
  double bound = 0;                // log 2 / M
};

EntropyCertificate entropy_certificate_from_spec_points(const System& sys,
                                                        const PointValue& x,
                                                        const PointValue& y, const Rat& eps,
                                                        long long M, long long n);

json entropy_certificate_to_json(const System& sys, const EntropyCertificate& cert);

// Recomputes every claimed separation from the raw points; fills `errors`
// with one line per failing pair.
bool verify_entropy_certificate(const json& cert, std::vector<std::string>* errors);

}  // namespace pdyn
