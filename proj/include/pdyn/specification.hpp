#pragma once

#include "pdyn/trace.hpp"

#include <vector>

namespace pdyn {

// Specification request: orbit segments [a_j, b_j] of points x_j, pairwise
// gaps >= gap_M, to be eps-traced simultaneously by a single point:
// d(f^i(y), f^i(x_j)) < eps for a_j <= i <= b_j.
struct SpecSegments {
  struct Segment {
    long long a = 0, b = 0;
    PointValue x;
  };
  std::vector<Segment> segments;
  long long gap_M = 1;
  Rat epsilon;
};

// Validates ordering, gaps and the through-point; throws PreconditionViolation.
void validate_spec(const System& sys, const SpecSegments& spec,
                   const PointValue* through = nullptr);

// Direct coordinate bookkeeping on the full shift: segment windows
// [a_j - R, b_j + R] with R = strict agreement radius of eps, zero filler,
// optional periodization with period b_k + gap_M. Exact verification.
TraceOutcome specification_trace_symbolic(const System& sys, const SpecSegments& spec,
                                          bool periodic);

// Theorem-style gluing: connector points found by mixing transitions turn the
// request into a delta-pseudo-orbit through x, which is then traced.
TraceOutcome specification_trace_glued(const System& sys, const PointValue& x,
                                       const SpecSegments& spec, uint64_t seed = 0);

Verdict specification_point_verdict(const System& sys, const PointValue& x,
                                    const Rat& epsilon, const std::vector<long long>& M_grid,
                                    int battery_count, long long horizon, uint64_t seed);

// Deterministic battery of k ∈ {1,2,3} segment templates through x; always
// includes a far-point + return-to-x template.
std::vector<SpecSegments> default_battery(const System& sys, const PointValue& x,
                                          const Rat& epsilon, long long M, int count,
                                          long long horizon, uint64_t seed);

// Orbit targets f^i(x_j) for every constrained index of the spec, as
// (index, point) pairs sorted by index.
std::vector<std::pair<long long, PointValue>> spec_targets(const System& sys,
                                                           const SpecSegments& spec);

// max over constrained indices of d(f^i(tracer), f^i(x_j)), verified exactly
// or by outward interval arithmetic; nullopt if it cannot be bounded < eps.
std::optional<Rat> verified_spec_error(const System& sys, const PointValue& tracer,
                                       const SpecSegments& spec);

}  // namespace pdyn
