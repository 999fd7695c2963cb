#pragma once

#include "pdyn/system.hpp"
#include "pdyn/verdict.hpp"

#include <vector>

namespace pdyn {

struct TransitionResult {
  enum class Kind { Found, CertifiedNever, Inconclusive } kind =
      Kind::Inconclusive;
  long long N = -1;  // Found: least N with f^n(U) meeting V for all N <= n <= n_max
  json certificate;  // CertifiedNever: f^n(U) n V = empty for every n >= 0
  json detail;
};

// Least transition time for f^n(U) n V != empty, held through n_max. Exact on
// shifts (cylinder word algebra) and on exact-interval-image systems; a
// FailureCertificate is only emitted with a machine-checkable monotone
// escape/collapse argument.
TransitionResult mixing_transition_time(const System& sys, const Region& U, const Region& V,
                                        long long n_max);

Verdict mixing_point_verdict(const System& sys, const PointValue& x,
                             const std::vector<Rat>& radii, const std::vector<Region>& probes,
                             long long n_max);

Verdict transitive_point_verdict(const System& sys, const PointValue& x,
                                 const std::vector<Rat>& radii,
                                 const std::vector<Region>& probes, long long n_max);

// Deterministic probe battery: canonical regions plus seeded ones.
std::vector<Region> default_probe_regions(const System& sys, int count, uint64_t seed);

}  // namespace pdyn
