#pragma once

#include "pdyn/pseudo_orbit.hpp"
#include "pdyn/system.hpp"
#include "pdyn/verdict.hpp"

#include <optional>
#include <variant>

namespace pdyn {

struct TraceResult {
  PointValue tracer;
  Rat max_error;  // sup over constrained indices of d(f^i(tracer), target_i);
                  // an upper bound when interval verification was used
  std::optional<long long> period;
  std::string strategy;
  bool exact = false;
};

struct TraceFailure {
  bool certified = false;  // true: a machine-checkable emptiness certificate exists
  json certificate;
  std::optional<PointValue> best_candidate;
  Rat best_error = Rat(-1);
};

using TraceOutcome = std::variant<TraceResult, TraceFailure>;

inline bool trace_succeeded(const TraceOutcome& o) {
  return std::holds_alternative<TraceResult>(o);
}

// eps-tracing of a pseudo-orbit: strategy ladder is exact-orbit, symbolic
// splice (shifts), circle digit reconstruction, backward preimage interval
// chain (exact interval maps), then seeded search. Every success is
// re-verified before being returned; failure is a value, never an exception.
TraceOutcome trace(const System& sys, const PseudoOrbit& po, const Rat& epsilon,
                   uint64_t seed = 0);

// d(f^i(tracer), targets[i]) < eps for all i, verified exactly or by outward
// interval arithmetic; nullopt when the bound could not be certified either
// way (never happens on the systems in the zoo).
std::optional<Rat> verified_orbit_error(const System& sys, const PointValue& tracer,
                                        const std::vector<PointValue>& targets,
                                        const Rat& epsilon);

Verdict shadowable_point_verdict(const System& sys, const PointValue& x, const Rat& epsilon,
                                 const std::vector<Rat>& delta_grid, int trials, int length,
                                 uint64_t seed);

}  // namespace pdyn
