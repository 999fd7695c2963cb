#include "pdyn/rng.hpp"
#include "pdyn/system.hpp"

#include <algorithm>

namespace pdyn {
namespace detail {

// x -> 2x mod 1 on R/Z, represented on [0, 1). Exact on rationals; the arc
// metric min(|x-y|, 1-|x-y|) is exact.
class DoublingCircle final : public System {
 public:
  std::string id() const override { return "doubling-circle"; }

  Capabilities caps() const override {
    return {.invertible = false,
            .exact_symbolic = false,
            .exact_interval_image = true,
            .enumerates_periodic = true,
            .compact = true};
  }

  PointValue iterate(const PointValue& p, long long n) const override {
    if (n < 0)
      throw Error("NegativeIterateOnNonInvertible", "doubling circle is 2-to-1");
    if (!in_domain(p)) throw Error("DomainViolation", "point outside [0,1)");
    Rat v = as_scalar(p).value;
    for (long long i = 0; i < n; ++i) v = wrap(v * 2);
    return pv_scalar(v, as_scalar(p).exact);
  }

  Rat distance(const PointValue& p, const PointValue& q) const override {
    Rat d = abs(as_scalar(p).value - as_scalar(q).value);
    return std::min(d, Rat(1) - d);
  }

  bool in_domain(const PointValue& p) const override {
    const auto* s = std::get_if<ScalarV>(&p);
    return s && s->value >= 0 && s->value < 1;
  }

  std::vector<ExactInterval> interval_image(const ExactInterval& r, long long n) const override {
    if (r.lo > r.hi) throw Error("EmptyRegion", "interval lo > hi");
    std::vector<ExactInterval> cur{r};
    for (long long i = 0; i < n; ++i) {
      std::vector<ExactInterval> next;
      for (auto& iv : cur) {
        if (iv.hi - iv.lo >= Rat(1, 2)) {
          next.push_back({Rat(0), Rat(1)});  // image covers the whole circle
          continue;
        }
        Rat lo = iv.lo * 2, hi = iv.hi * 2;
        Rat shift = Rat(0);
        while (lo - shift >= 1) shift += 1;
        lo -= shift;
        hi -= shift;
        if (hi <= 1)
          next.push_back({lo, hi});
        else {
          next.push_back({lo, Rat(1)});
          next.push_back({Rat(0), hi - 1});
        }
      }
      std::sort(next.begin(), next.end(),
                [](const ExactInterval& a, const ExactInterval& b) { return a.lo < b.lo; });
      std::vector<ExactInterval> merged;
      for (auto& iv : next) {
        if (!merged.empty() && iv.lo <= merged.back().hi)
          merged.back().hi = std::max(merged.back().hi, iv.hi);
        else
          merged.push_back(iv);
      }
      cur = std::move(merged);
    }
    return cur;
  }

  std::vector<PointValue> periodic_points(long long period) const override {
    if (period < 1) throw Error("PreconditionViolation", "period must be >= 1");
    if (period > 20) throw Error("BudgetExceeded", "period too large to enumerate");
    // 2^m x = x (mod 1)  <=>  x = j / (2^m - 1)
    long long q = (1LL << period) - 1;
    std::vector<PointValue> out;
    for (long long j = 0; j < q; ++j) out.push_back(pv_scalar(Rat(j, q)));
    return out;
  }

  std::vector<PointValue> sample(const Region& r, int count, uint64_t seed) const override {
    Rat a(0), b(1);
    bool is_ball = false;
    Rat center(0), radius(0);
    if (const auto* iv = std::get_if<IntervalRegion>(&r)) {
      a = std::max(a, iv->lo);
      b = std::min(b, iv->hi);
    } else if (const auto* bl = std::get_if<BallRegion>(&r)) {
      is_ball = true;
      center = as_scalar(bl->center).value;
      radius = bl->radius;
    } else {
      throw Error("EmptyRegion", "cylinder regions are not circle regions");
    }
    std::vector<PointValue> out;
    SplitMix64 rng(seed);
    for (int i = 0; i < count; ++i) {
      Rat v;
      if (is_ball) {
        Rat u = rng.unit_dyadic(40) * radius * 2 - radius;
        v = wrap(center + u + 1);
      } else {
        if (a >= b) throw Error("EmptyRegion", "empty circle arc");
        v = a + (Rat(i) + rng.unit_dyadic(30)) / Rat(count) * (b - a);
        if (v >= 1) v = wrap(v);
      }
      out.push_back(pv_scalar(v, true));
    }
    return out;
  }

  Region whole_space() const override { return interval(Rat(0), Rat(1), true, false); }

  std::optional<Rat> diameter() const override { return Rat(1, 2); }

  double approx_value(const PointValue& p) const override {
    return rat_to_double(as_scalar(p).value);
  }
  double approx_map(double x) const override {
    double y = 2 * x;
    return y - std::floor(y);
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
    if (!in_domain(p)) throw Error("DomainViolation", "circle point outside [0,1)");
    return p;
  }

 private:
  static Rat wrap(Rat v) {
    while (v >= 1) v -= 1;
    while (v < 0) v += 1;
    return v;
  }
};

SystemPtr make_doubling_circle() { return std::make_shared<DoublingCircle>(); }

}  // namespace detail
}  // namespace pdyn
