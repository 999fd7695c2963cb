#pragma once

#include "pdyn/mixing.hpp"
#include "pdyn/specification.hpp"
#include "pdyn/system.hpp"
#include "pdyn/verdict.hpp"

#include <optional>

namespace pdyn {

// Certified sensitivity witness: a point y inside every tested radius whose
// orbit leaves the delta_x tube within T steps.
struct SensitivityWitness {
  Rat delta_x;
  PointValue y;       // witness from the smallest tested radius
  long long n;
  Rat realized;       // d(f^n(x), f^n(y)) > delta_x
};
std::optional<SensitivityWitness> sensitivity_witness(const System& sys, const PointValue& x,
                                                      const std::vector<Rat>& radii,
                                                      long long T, int budget, uint64_t seed);

// Sensitivity-constant construction from a transitive point and a periodic
// point q off x's orbit: eta = delta/8 with delta = 2 d(x, O(q)), realized by
// one side of the disjunction d(f^nj(p), f^nj(x)) > eta or
// d(f^nj(x), f^nj(y)) > eta.
struct SensitivityConstruction {
  bool ok = false;
  Rat eta;
  json witness;  // p, y, k, n, j, side, distance
  json failure;  // reason when !ok (NoPeriodicInNeighborhood / NoTransitiveVisit)
};
SensitivityConstruction sensitivity_constant_from_periodic(const System& sys,
                                                           const PointValue& x,
                                                           const PointValue& q,
                                                           const Region& N, long long T,
                                                           uint64_t seed);

// A periodic point in the deleted open ball around x, via enumeration or the
// periodic specification tracer (with the far-point branch when x itself is
// periodic).
std::optional<PointValue> periodic_point_in_deleted_ball(const System& sys,
                                                         const PointValue& x,
                                                         const Rat& radius);

Verdict dense_periodic_at_point(const System& sys, const PointValue& x,
                                const std::vector<Rat>& radii, long long period_bound,
                                uint64_t seed = 0);

struct DevaneyReport {
  Verdict overall;
  Verdict transitive;
  Verdict dense_periodic;
  std::optional<SensitivityWitness> sensitivity;
};
DevaneyReport devaney_point_verdict(const System& sys, const PointValue& x,
                                    const std::vector<Rat>& radii,
                                    const std::vector<Region>& probes, long long n_max,
                                    long long period_bound, long long T, int budget,
                                    uint64_t seed);

}  // namespace pdyn
