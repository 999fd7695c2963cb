#pragma once

#include "pdyn/system.hpp"

#include <vector>

namespace pdyn {

// delta-pseudo-orbit: d(f(points[i]), points[i+1]) < delta for every step.
// "Through x" means points[0] = x.
struct PseudoOrbit {
  Rat delta;
  std::vector<PointValue> points;
};

// Validates the defining inequality; throws Error(PreconditionViolation).
PseudoOrbit make_pseudo_orbit(const System& sys, Rat delta, std::vector<PointValue> points);

bool pseudo_orbit_valid(const System& sys, const PseudoOrbit& po);

// A valid delta-pseudo-orbit through x: each true image is perturbed by less
// than delta/2 inside the system's point class. Deterministic per seed.
PseudoOrbit perturbed_orbit(const System& sys, const PointValue& x, const Rat& delta,
                            int length, uint64_t seed);

}  // namespace pdyn
