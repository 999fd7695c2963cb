#include "pdyn/rng.hpp"
#include "pdyn/system.hpp"

#include <algorithm>
#include <cmath>

namespace pdyn {
namespace detail {

namespace {

// Example 3.25 space: {a=1, b=-1} u {x_i = tanh(i) : i in Z} in R, identity
// map. Points are stored as the 53-bit dyadic of tanh(i), so index recovery
// by atanh rounding is deterministic.
// tanh(i) collides with 1.0 in double precision from i = 20 on, so the
// representable window ends at 18.
constexpr long long kTanhSampleWindow = 18;
constexpr long long kTanhEnumWindow = 18;

Rat tanh_value(long long i) { return rat_from_double(std::tanh(static_cast<double>(i))); }

}  // namespace

class Ex325 final : public System {
 public:
  explicit Ex325(bool with_endpoints) : with_endpoints_(with_endpoints) {}

  std::string id() const override { return with_endpoints_ ? "ex325x" : "ex325y"; }

  Capabilities caps() const override {
    return {.invertible = true,
            .exact_symbolic = false,
            .exact_interval_image = false,
            .enumerates_periodic = true,
            .compact = with_endpoints_};
  }

  PointValue iterate(const PointValue& p, long long) const override {
    if (!in_domain(p)) throw Error("DomainViolation", "not a point of " + id());
    return p;  // identity map
  }

  Rat distance(const PointValue& p, const PointValue& q) const override {
    return abs(as_scalar(p).value - as_scalar(q).value);
  }

  bool metric_exact() const override { return false; }  // tanh values are rounded

  bool in_domain(const PointValue& p) const override {
    const auto* s = std::get_if<ScalarV>(&p);
    if (!s) return false;
    if (s->value == 1 || s->value == -1) return with_endpoints_;
    long long i = index_of(s->value);
    return std::llabs(i) <= (1LL << 30) && tanh_value(i) == s->value;
  }

  std::vector<PointValue> periodic_points(long long period) const override {
    if (period < 1) throw Error("PreconditionViolation", "period must be >= 1");
    // every point is fixed; enumeration is restricted to the documented window
    std::vector<PointValue> out;
    if (with_endpoints_) {
      out.push_back(point_a());
      out.push_back(point_b());
    }
    for (long long i = -kTanhEnumWindow; i <= kTanhEnumWindow; ++i)
      out.push_back(pv_scalar(tanh_value(i), false));
    return out;
  }

  std::vector<PointValue> sample(const Region& r, int count, uint64_t seed) const override {
    // deterministic sweep of the (finite) enumeration; seed rotates the start
    auto all = enumerate_window(kTanhSampleWindow);
    std::vector<PointValue> in;
    for (auto& p : all)
      if (region_contains(r, p)) in.push_back(p);
    if (in.empty()) throw Error("EmptyRegion", "no points of " + id() + " in region");
    (void)seed;  // the sweep is the same for every seed
    std::vector<PointValue> out;
    for (int i = 0; i < count; ++i)
      out.push_back(in[static_cast<size_t>(i) % in.size()]);
    return out;
  }

  std::vector<PointValue> ball_candidates(const PointValue& x, const Rat& delta, int,
                                          uint64_t, bool* exhaustive) const override {
    auto all = enumerate_window(kTanhSampleWindow);
    std::vector<PointValue> out;
    for (auto& p : all)
      if (distance(x, p) <= delta) out.push_back(p);
    if (exhaustive) {
      // Points beyond the window sit within 2^-90 of an endpoint value; the
      // pool is complete unless the ball reaches into such a tail.
      const Rat margin = pow2(-50);
      const Rat& v = as_scalar(x).value;
      bool tails_clear = abs(v - 1) > delta + margin && abs(v + 1) > delta + margin;
      *exhaustive = tails_clear;
    }
    return out;
  }

  bool is_identity_map() const override { return true; }

  std::vector<Rat> accumulation_values() const override { return {Rat(1), Rat(-1)}; }

  std::optional<json> infinite_gamma_certificate(const PointValue& x,
                                                 const Rat& delta) const override {
    // Identity map: the dynamical ball is the static ball. Distances to the
    // x_i tail increase strictly toward |v -+ 1|, so the whole tail sits in
    // the ball exactly when that limit is <= delta.
    const Rat& v = as_scalar(x).value;
    for (const Rat& acc : {Rat(1), Rat(-1)}) {
      if (abs(v - acc) <= delta) {
        json cert;
        cert["kind"] = "accumulation_tail";
        cert["value"] = rat_to_string(acc);
        cert["limit_distance"] = rat_to_string(abs(v - acc));
        cert["note"] = "identity map: every x_i close enough to the limit stays in the ball";
        return cert;
      }
    }
    return std::nullopt;
  }

  Region whole_space() const override { return interval(Rat(-1), Rat(1), true, true); }

  std::optional<Rat> diameter() const override { return Rat(2); }

  double approx_value(const PointValue& p) const override {
    return rat_to_double(as_scalar(p).value);
  }
  double approx_map(double x) const override { return x; }

  std::string encode_point(const PointValue& p) const override {
    const Rat& v = as_scalar(p).value;
    if (v == 1) return "a";
    if (v == -1) return "b";
    return "x" + std::to_string(index_of(v));
  }

  PointValue parse_point(const std::string& text) const override {
    if (text == "a") {
      if (!with_endpoints_) throw Error("DomainViolation", "a is not a point of Y");
      return point_a();
    }
    if (text == "b") {
      if (!with_endpoints_) throw Error("DomainViolation", "b is not a point of Y");
      return point_b();
    }
    if (!text.empty() && text[0] == 'x')
      return pv_scalar(tanh_value(std::stoll(text.substr(1))), false);
    throw Error("ParseError", "expected a, b or x<i>, got '" + text + "'");
  }

  static PointValue point_a() { return pv_scalar(Rat(1), true); }
  static PointValue point_b() { return pv_scalar(Rat(-1), true); }
  static PointValue point_xi(long long i) { return pv_scalar(tanh_value(i), false); }

 private:
  static long long index_of(const Rat& v) {
    double d = rat_to_double(v);
    if (d >= 1.0 || d <= -1.0) return d > 0 ? (1LL << 40) : -(1LL << 40);
    return std::llround(std::atanh(d));
  }

  std::vector<PointValue> enumerate_window(long long w) const {
    std::vector<PointValue> out;
    if (with_endpoints_) {
      out.push_back(point_a());
      out.push_back(point_b());
    }
    for (long long i = -w; i <= w; ++i) out.push_back(pv_scalar(tanh_value(i), false));
    return out;
  }

  bool region_contains(const Region& r, const PointValue& p) const {
    const Rat& v = as_scalar(p).value;
    if (const auto* iv = std::get_if<IntervalRegion>(&r)) {
      if (v < iv->lo || (v == iv->lo && !iv->lo_closed)) return false;
      if (v > iv->hi || (v == iv->hi && !iv->hi_closed)) return false;
      return true;
    }
    if (const auto* bl = std::get_if<BallRegion>(&r)) {
      Rat d = distance(bl->center, p);
      return bl->open ? d < bl->radius : d <= bl->radius;
    }
    throw Error("EmptyRegion", "cylinder regions are not Example-3.25 regions");
  }

  bool with_endpoints_;
};

SystemPtr make_ex325(bool with_endpoints) { return std::make_shared<Ex325>(with_endpoints); }

}  // namespace detail
}  // namespace pdyn
