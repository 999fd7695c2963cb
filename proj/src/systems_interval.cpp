#include "pdyn/rng.hpp"
#include "pdyn/system.hpp"

#include <algorithm>
#include <cmath>

namespace pdyn {
namespace detail {

namespace {

// Exact iterates degrade to 53-bit dyadics once representations outgrow this;
// the point is then flagged inexact (documented float fallback).
constexpr size_t kExactBitBudget = 1 << 14;

std::vector<ExactInterval> merge_intervals(std::vector<ExactInterval> v) {
  std::sort(v.begin(), v.end(),
            [](const ExactInterval& a, const ExactInterval& b) { return a.lo < b.lo; });
  std::vector<ExactInterval> out;
  for (auto& iv : v) {
    if (!out.empty() && iv.lo <= out.back().hi)
      out.back().hi = std::max(out.back().hi, iv.hi);
    else
      out.push_back(iv);
  }
  return out;
}

}  // namespace

// Shared chassis for scalar interval systems. The domain is [lo, hi] with an
// optional open right end at +inf (doubling line); sampling and regions are
// clipped to [lo, sample_hi].
class ScalarSystem : public System {
 public:
  ScalarSystem(Rat lo, std::optional<Rat> hi, Rat sample_hi)
      : lo_(std::move(lo)), hi_(std::move(hi)), sample_hi_(std::move(sample_hi)) {}

  PointValue iterate(const PointValue& p, long long n) const override {
    const ScalarV& s = as_scalar(p);
    if (!in_domain(p)) throw Error("DomainViolation", "point outside domain of " + id());
    if (n < 0 && !caps().invertible)
      throw Error("NegativeIterateOnNonInvertible", id() + " is not invertible");
    Rat v = s.value;
    bool exact = s.exact;
    for (long long i = 0; i < std::llabs(n); ++i) {
      v = n >= 0 ? map_rat(v) : inverse_rat(v);
      if (rat_bits(v) > kExactBitBudget) {
        v = rat_from_double(rat_to_double(v));
        exact = false;
      }
      if (!exact && v > sample_hi_ && !hi_)
        throw Error("DomainViolation", "inexact iterate left the working window");
    }
    return pv_scalar(v, exact);
  }

  Rat distance(const PointValue& p, const PointValue& q) const override {
    return abs(as_scalar(p).value - as_scalar(q).value);
  }

  bool in_domain(const PointValue& p) const override {
    const auto* s = std::get_if<ScalarV>(&p);
    if (!s) return false;
    if (s->value < lo_) return false;
    return !hi_ || s->value <= *hi_;
  }

  std::vector<ExactInterval> interval_image(const ExactInterval& r, long long n) const override {
    if (!caps().exact_interval_image)
      throw Error("CapabilityMissing", id() + " has no exact interval images");
    if (n < 0) throw Error("PreconditionViolation", "interval_image wants n >= 1");
    if (r.lo > r.hi) throw Error("EmptyRegion", "interval lo > hi");
    std::vector<ExactInterval> cur{r};
    for (long long i = 0; i < n; ++i) {
      std::vector<ExactInterval> next;
      for (auto& iv : cur)
        for (auto& im : image_once(iv)) {
          if (rat_bits(im.lo) > kExactBitBudget || rat_bits(im.hi) > kExactBitBudget)
            throw Error("BudgetExceeded", "exact interval endpoints outgrew the bit budget");
          next.push_back(im);
        }
      cur = merge_intervals(std::move(next));
    }
    return cur;
  }

  std::vector<PointValue> sample(const Region& r, int count, uint64_t seed) const override {
    Rat a = lo_, b = sample_hi_;
    if (const auto* iv = std::get_if<IntervalRegion>(&r)) {
      a = std::max(a, iv->lo);
      b = std::min(b, iv->hi);
    } else if (const auto* bl = std::get_if<BallRegion>(&r)) {
      const Rat& c = as_scalar(bl->center).value;
      a = std::max(a, Rat(c - bl->radius));
      b = std::min(b, Rat(c + bl->radius));
      if (hi_) b = std::min(b, *hi_);
    } else {
      throw Error("EmptyRegion", "cylinder regions are not scalar regions");
    }
    if (a > b || (a == b && count > 1))
      throw Error("EmptyRegion", "empty scalar region");
    std::vector<PointValue> out;
    SplitMix64 rng(seed);
    Rat width = b - a;
    for (int i = 0; i < count; ++i) {
      // stratified dyadic offsets keep samples spread and exactly rational
      Rat u = (Rat(i) + rng.unit_dyadic(30)) / Rat(count);
      Rat v = a + u * width;
      if (v == a) v += width / pow2(40);  // keep off the left boundary of open regions
      out.push_back(pv_scalar(v, true));
    }
    return out;
  }

  Region whole_space() const override { return interval(lo_, sample_hi_, true, true); }

  double approx_value(const PointValue& p) const override {
    return rat_to_double(as_scalar(p).value);
  }

  std::string encode_point(const PointValue& p) const override {
    const ScalarV& s = as_scalar(p);
    return (s.exact ? "" : "~") + rat_to_string(s.value);
  }

  PointValue parse_point(const std::string& text) const override {
    bool exact = true;
    std::string t = text;
    if (!t.empty() && t[0] == '~') {
      exact = false;
      t = t.substr(1);
    }
    auto p = pv_scalar(rat_from_string(t), exact);
    if (!in_domain(p)) throw Error("DomainViolation", "scalar outside domain of " + id());
    return p;
  }

 protected:
  virtual Rat map_rat(const Rat& v) const = 0;
  virtual Rat inverse_rat(const Rat&) const {
    throw Error("NegativeIterateOnNonInvertible", id() + " is not invertible");
  }
  virtual std::vector<ExactInterval> image_once(const ExactInterval& iv) const {
    return {{map_rat(iv.lo), map_rat(iv.hi)}};  // monotone increasing default
  }

  Rat lo_;
  std::optional<Rat> hi_;
  Rat sample_hi_;
};

class DoublingLine final : public ScalarSystem {
 public:
  explicit DoublingLine(Rat window)
      : ScalarSystem(Rat(0), std::nullopt, std::move(window)) {}

  std::string id() const override { return "doubling-line"; }
  Capabilities caps() const override {
    return {.invertible = true,
            .exact_symbolic = false,
            .exact_interval_image = true,
            .enumerates_periodic = true,
            .compact = false};
  }
  std::vector<PointValue> periodic_points(long long period) const override {
    if (period < 1) throw Error("PreconditionViolation", "period must be >= 1");
    return {pv_scalar(Rat(0))};  // 2^n x = x on [0,inf) only at 0
  }
  std::optional<std::vector<PointValue>> periodic_points_all() const override {
    return std::vector<PointValue>{pv_scalar(Rat(0))};
  }
  double approx_map(double x) const override { return 2 * x; }

  std::optional<json> escape_certificate(const ExactInterval& image,
                                         const ExactInterval& v) const override {
    // f(x) = 2x >= x on [0, inf): the image never comes back below its inf
    if (image.lo > v.hi) {
      json cert;
      cert["kind"] = "escape_up";
      cert["image_lo"] = rat_to_string(image.lo);
      cert["v_hi"] = rat_to_string(v.hi);
      cert["invariant"] = "f(x) = 2x >= x on [0,inf), so inf f^n(U) is nondecreasing";
      return cert;
    }
    return std::nullopt;
  }

 protected:
  Rat map_rat(const Rat& v) const override { return v * 2; }
  Rat inverse_rat(const Rat& v) const override { return v / 2; }
};

class Squaring final : public ScalarSystem {
 public:
  Squaring() : ScalarSystem(Rat(0), Rat(1), Rat(1)) {}

  std::string id() const override { return "squaring"; }
  Capabilities caps() const override {
    // Topologically a homeomorphism of [0,1], but sqrt is not exact on
    // rationals, so the inverse is not exposed.
    return {.invertible = false,
            .exact_symbolic = false,
            .exact_interval_image = true,
            .enumerates_periodic = true,
            .compact = true};
  }
  std::vector<PointValue> periodic_points(long long period) const override {
    if (period < 1) throw Error("PreconditionViolation", "period must be >= 1");
    return {pv_scalar(Rat(0)), pv_scalar(Rat(1))};  // x^(2^m) = x on [0,1]
  }
  std::optional<std::vector<PointValue>> periodic_points_all() const override {
    return std::vector<PointValue>{pv_scalar(Rat(0)), pv_scalar(Rat(1))};
  }
  std::optional<Rat> diameter() const override { return Rat(1); }
  double approx_map(double x) const override { return x * x; }

  std::optional<json> escape_certificate(const ExactInterval& image,
                                         const ExactInterval& v) const override {
    // x^2 <= x on [0,1]: the image never climbs back above its sup
    if (image.hi < v.lo) {
      json cert;
      cert["kind"] = "collapse_down";
      cert["image_hi"] = rat_to_string(image.hi);
      cert["v_lo"] = rat_to_string(v.lo);
      cert["invariant"] = "x^2 <= x on [0,1], so sup f^n(U) is nonincreasing";
      return cert;
    }
    return std::nullopt;
  }

 protected:
  Rat map_rat(const Rat& v) const override { return v * v; }
};

class Tent final : public ScalarSystem {
 public:
  Tent() : ScalarSystem(Rat(0), Rat(1), Rat(1)) {}

  std::string id() const override { return "tent"; }
  Capabilities caps() const override {
    return {.invertible = false,
            .exact_symbolic = false,
            .exact_interval_image = true,
            .enumerates_periodic = false,
            .compact = true};
  }
  std::optional<Rat> diameter() const override { return Rat(1); }
  double approx_map(double x) const override { return x <= 0.5 ? 2 * x : 2 - 2 * x; }

 protected:
  Rat map_rat(const Rat& v) const override {
    return v <= Rat(1, 2) ? v * 2 : Rat(2) - v * 2;
  }
  std::vector<ExactInterval> image_once(const ExactInterval& iv) const override {
    const Rat half(1, 2);
    if (iv.hi <= half) return {{iv.lo * 2, iv.hi * 2}};
    if (iv.lo >= half) return {{Rat(2) - iv.hi * 2, Rat(2) - iv.lo * 2}};
    // straddles the kink: both monotone pieces, closed per convention
    return merge_intervals({{iv.lo * 2, Rat(1)}, {Rat(2) - iv.hi * 2, Rat(1)}});
  }
};

class IdentityInterval final : public ScalarSystem {
 public:
  IdentityInterval() : ScalarSystem(Rat(0), Rat(1), Rat(1)) {}

  std::string id() const override { return "identity"; }
  Capabilities caps() const override {
    return {.invertible = true,
            .exact_symbolic = false,
            .exact_interval_image = true,
            .enumerates_periodic = false,
            .compact = true};
  }
  bool is_identity_map() const override { return true; }
  std::optional<Rat> diameter() const override { return Rat(1); }
  double approx_map(double x) const override { return x; }

  std::optional<json> escape_certificate(const ExactInterval& image,
                                         const ExactInterval& v) const override {
    if (image.hi < v.lo || image.lo > v.hi) {
      json cert;
      cert["kind"] = "static_disjoint";
      cert["invariant"] = "identity map: the image never moves";
      return cert;
    }
    return std::nullopt;
  }

 protected:
  Rat map_rat(const Rat& v) const override { return v; }
  Rat inverse_rat(const Rat& v) const override { return v; }
};

SystemPtr make_doubling_line(const Rat& window) {
  return std::make_shared<DoublingLine>(window);
}
SystemPtr make_squaring() { return std::make_shared<Squaring>(); }
SystemPtr make_tent() { return std::make_shared<Tent>(); }
SystemPtr make_identity_interval() { return std::make_shared<IdentityInterval>(); }

}  // namespace detail
}  // namespace pdyn
