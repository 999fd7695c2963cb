#pragma once

#include "pdyn/errors.hpp"
#include "pdyn/point.hpp"
#include "pdyn/rational.hpp"
#include "pdyn/region.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pdyn {

using json = nlohmann::json;

struct Capabilities {
  bool invertible = false;
  bool exact_symbolic = false;
  bool exact_interval_image = false;
  bool enumerates_periodic = false;
  bool compact = false;
};

// Closed interval with exact rational endpoints.
struct ExactInterval {
  Rat lo, hi;
};

// A dynamical system: state set + metric + forward map (+ inverse when
// invertible). All implementations are immutable after construction; any
// method may be called concurrently. Randomized methods take explicit seeds.
class System {
 public:
  virtual ~System() = default;

  virtual std::string id() const = 0;
  virtual Capabilities caps() const = 0;

  // f^n(p); n < 0 requires caps().invertible.
  virtual PointValue iterate(const PointValue& p, long long n) const = 0;

  // Exact for symbolic and exact-scalar systems (metric_exact() true);
  // float-backed metrics return the dyadic value of the double.
  virtual Rat distance(const PointValue& p, const PointValue& q) const = 0;
  virtual bool metric_exact() const { return true; }

  bool equal_points(const PointValue& p, const PointValue& q) const {
    return distance(p, q) == 0;
  }

  virtual bool in_domain(const PointValue& p) const = 0;

  // Exact f^n(R) as a finite union of closed intervals (piecewise monotone
  // interval maps only). Throws CapabilityMissing otherwise.
  virtual std::vector<ExactInterval> interval_image(const ExactInterval& r, long long n) const;

  // All p with f^period(p) = p (not necessarily prime period).
  virtual std::vector<PointValue> periodic_points(long long period) const;

  // The complete periodic-point set over all periods, when finite and known
  // in closed form (e.g. {0,1} for the squaring map).
  virtual std::optional<std::vector<PointValue>> periodic_points_all() const {
    return std::nullopt;
  }

  // Deterministic per seed; every returned point lies in r.
  virtual std::vector<PointValue> sample(const Region& r, int count, uint64_t seed) const = 0;

  // A region covering the whole state set (the working window for noncompact
  // systems), suitable as a sampling domain.
  virtual Region whole_space() const = 0;

  // Candidate pool for explicit dynamical-ball search around x: seeded samples
  // plus structured candidates a sampler would miss (coordinate flips,
  // E-points, neighbor enumerations). Sets *exhaustive when the pool provably
  // contains every point of the space within `delta` of x.
  virtual std::vector<PointValue> ball_candidates(const PointValue& x, const Rat& delta,
                                                  int budget, uint64_t seed,
                                                  bool* exhaustive) const;

  virtual bool is_identity_map() const { return false; }

  // Values the space accumulates at; used by infinite-cardinality
  // certificates on identity-like systems. May name values outside the space.
  virtual std::vector<Rat> accumulation_values() const { return {}; }

  // System-specific certificate that the infinite-horizon ball around x at
  // radius delta is infinite (Example 3.19's E-point tails).
  virtual std::optional<json> infinite_gamma_certificate(const PointValue& x,
                                                         const Rat& delta) const;

  // Machine-checkable proof that f^n(image) never meets [v_lo, v_hi] for any
  // n >= 0 (monotone escape/collapse arguments on interval maps).
  virtual std::optional<json> escape_certificate(const ExactInterval& image,
                                                 const ExactInterval& v) const;

  virtual std::optional<Rat> diameter() const { return std::nullopt; }
  virtual int alphabet_size() const { return 0; }  // shifts only

  virtual std::string encode_point(const PointValue& p) const = 0;
  virtual PointValue parse_point(const std::string& text) const = 0;

  // double-precision mirrors for scalar systems (budget-bound search paths)
  virtual double approx_value(const PointValue& p) const;
  virtual double approx_map(double x) const;
};

using SystemPtr = std::shared_ptr<const System>;

// Known ids: shift (alphabet=k), oneshift (alphabet=k), doubling-line
// (window=W), squaring, tent, identity, doubling-circle, ex325x, ex325y,
// ex319. Unknown keys in params are schema violations.
SystemPtr make_system(const std::string& id,
                      const std::map<std::string, std::string>& params = {});

// Example 3.19 compound space X = Y u E over an explicit base system with a
// designated periodic point p of prime period t. The base must be a full
// shift in this build. Throws NotPeriodic / PeriodNotPrime.
SystemPtr make_example_3_19(SystemPtr base, const PointValue& p, int prime_period);

std::vector<std::string> system_ids();

}  // namespace pdyn
