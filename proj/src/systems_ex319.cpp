#include "pdyn/rng.hpp"
#include "pdyn/system.hpp"

#include <algorithm>

namespace pdyn {

namespace {

long long pos_mod(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

// Example 3.19: X = Y u E over a base system g on Y with designated periodic
// point p of prime period t. E-points are q(i,k,j), i in {1,2,3}, k >= 1,
// 0 <= j < t. The metric is the paper's six-case function; the cross-index
// gap (i != l and (k,m or j,r differ)) falls back to the sixth case, flagged
// as an interpretation.
class Ex319 final : public System {
 public:
  Ex319(SystemPtr base, BiSeq p, int t) : base_(std::move(base)), t_(t) {
    orbit_.reserve(static_cast<size_t>(t));
    for (int j = 0; j < t; ++j) orbit_.push_back(as_biseq(base_->iterate(pv(p), j)));
  }

  std::string id() const override { return "ex319"; }

  Capabilities caps() const override {
    return {.invertible = true,
            .exact_symbolic = true,
            .exact_interval_image = false,
            .enumerates_periodic = false,
            .compact = true};
  }

  PointValue iterate(const PointValue& pt, long long n) const override {
    E319 e = coerce(pt);
    if (auto* y = std::get_if<BiSeq>(&e.v)) return wrap_like(pt, base_->iterate(pv(*y), n));
    const EIdx& q = std::get<EIdx>(e.v);
    EIdx out{q.i, q.k, static_cast<int>(pos_mod(q.j + n, t_))};
    return PointValue(E319{out});
  }

  Rat distance(const PointValue& pa, const PointValue& pb) const override {
    E319 a = coerce(pa), b = coerce(pb);
    if (!a.is_e() && !b.is_e())
      return base_->distance(pv(std::get<BiSeq>(a.v)), pv(std::get<BiSeq>(b.v)));
    if (a.is_e() && !b.is_e()) return e_to_y(std::get<EIdx>(a.v), std::get<BiSeq>(b.v));
    if (!a.is_e() && b.is_e()) return e_to_y(std::get<EIdx>(b.v), std::get<BiSeq>(a.v));
    const EIdx& q1 = std::get<EIdx>(a.v);
    const EIdx& q2 = std::get<EIdx>(b.v);
    if (q1 == q2) return Rat(0);
    if (q1.i != q2.i && q1.k == q2.k && q1.j == q2.j) return Rat(1, q1.k);
    // sixth case, also covering the paper's undefined cross-index pairs
    return Rat(1, q1.k) + Rat(1, q2.k) + d0_orbit(q1.j, q2.j);
  }

  bool in_domain(const PointValue& pt) const override {
    if (const auto* e = std::get_if<E319>(&pt)) {
      if (const auto* q = std::get_if<EIdx>(&e->v))
        return q->i >= 1 && q->i <= 3 && q->k >= 1 && q->j >= 0 && q->j < t_;
      return base_->in_domain(pv(std::get<BiSeq>(e->v)));
    }
    if (std::holds_alternative<BiSeq>(pt)) return base_->in_domain(pt);
    return false;
  }

  std::vector<PointValue> sample(const Region& r, int count, uint64_t seed) const override {
    const auto* bl = std::get_if<BallRegion>(&r);
    if (!bl) throw Error("EmptyRegion", "Example-3.19 regions are balls");
    std::vector<PointValue> pool;
    for (auto& p : e_points_within(bl->center, bl->radius, bl->open)) pool.push_back(p);
    // base-ball samples lifted to Y-points, when the center is a Y-point
    E319 c = coerce(bl->center);
    if (!c.is_e()) {
      auto ys = base_->sample(ball(pv(std::get<BiSeq>(c.v)), bl->radius, bl->open),
                              std::max(count / 2, 4), shard_seed(seed, 1));
      for (auto& y : ys) pool.push_back(PointValue(E319{as_biseq(y)}));
    }
    std::vector<PointValue> filtered;
    for (auto& p : pool) {
      Rat d = distance(p, bl->center);
      if (bl->open ? d < bl->radius : d <= bl->radius) filtered.push_back(p);
    }
    if (filtered.empty()) throw Error("EmptyRegion", "no Example-3.19 points in ball");
    std::vector<PointValue> out;
    SplitMix64 rng(seed);
    for (int i = 0; i < count; ++i) out.push_back(filtered[rng.below(filtered.size())]);
    return out;
  }

  std::vector<PointValue> ball_candidates(const PointValue& x, const Rat& delta, int budget,
                                          uint64_t seed, bool* exhaustive) const override {
    if (exhaustive) *exhaustive = false;
    std::vector<PointValue> out;
    out.push_back(x);
    for (auto& p : e_points_within(x, delta, false)) out.push_back(p);
    E319 c = coerce(x);
    if (!c.is_e()) {
      bool dummy = false;
      auto ys = base_->ball_candidates(pv(std::get<BiSeq>(c.v)), delta,
                                       std::max(budget - (int)out.size(), 8), seed, &dummy);
      for (auto& y : ys) out.push_back(PointValue(E319{as_biseq(y)}));
    }
    return out;
  }

  std::optional<json> infinite_gamma_certificate(const PointValue& x,
                                                 const Rat& delta) const override {
    // At a point of O(p), every q(i,k,j) with orbit-aligned j sits at constant
    // distance 1/k along the whole orbit, so each k >= ceil(1/delta) puts
    // three points in the infinite-horizon ball.
    E319 c = coerce(x);
    if (c.is_e()) return std::nullopt;
    const BiSeq& y = std::get<BiSeq>(c.v);
    for (int s = 0; s < t_; ++s) {
      if (biseq_equal(y, orbit_[static_cast<size_t>(s)])) {
        long long K = 1;
        while (Rat(1, K) > delta && K < (1LL << 40)) ++K;
        json cert;
        cert["kind"] = "e_point_tail";
        cert["aligned_j"] = s;
        cert["first_k"] = K;
        cert["witnesses"] = {encode_e(EIdx{1, K, s}), encode_e(EIdx{2, K, s}),
                             encode_e(EIdx{3, K, s})};
        cert["note"] = "d(f^n x, f^n q(i,k,j)) = 1/k for all n when j is orbit-aligned";
        return cert;
      }
    }
    return std::nullopt;
  }

  std::optional<Rat> diameter() const override {
    // 1/k + 1/m + d0 terms are bounded by 2 + diam(Y)
    auto dy = base_->diameter();
    return dy ? std::optional<Rat>(*dy + 2) : std::nullopt;
  }

  Region whole_space() const override {
    return ball(PointValue(E319{orbit_[0]}), *diameter() + 1, false);
  }

  std::string encode_point(const PointValue& pt) const override {
    E319 e = coerce(pt);
    if (e.is_e()) return encode_e(std::get<EIdx>(e.v));
    return "Y:" + base_->encode_point(pv(std::get<BiSeq>(e.v)));
  }

  PointValue parse_point(const std::string& text) const override {
    if (text.rfind("Y:", 0) == 0)
      return PointValue(E319{as_biseq(base_->parse_point(text.substr(2)))});
    if (text.size() > 2 && text[0] == 'q' && text[1] == '(') {
      auto inner = text.substr(2, text.size() - 3);
      auto c1 = inner.find(',');
      auto c2 = inner.rfind(',');
      if (c1 == std::string::npos || c2 == c1)
        throw Error("ParseError", "expected q(i,k,j), got '" + text + "'");
      EIdx q{std::stoi(inner.substr(0, c1)), std::stoll(inner.substr(c1 + 1, c2 - c1 - 1)),
             std::stoi(inner.substr(c2 + 1))};
      auto p = PointValue(E319{q});
      if (!in_domain(p)) throw Error("DomainViolation", "E-point indices out of range");
      return p;
    }
    throw Error("ParseError", "expected Y:<seq> or q(i,k,j), got '" + text + "'");
  }

  const System& base() const { return *base_; }
  int prime_period() const { return t_; }
  PointValue designated_p() const { return PointValue(E319{orbit_[0]}); }

 private:
  static std::string encode_e(const EIdx& q) {
    return "q(" + std::to_string(q.i) + "," + std::to_string(q.k) + "," +
           std::to_string(q.j) + ")";
  }

  E319 coerce(const PointValue& pt) const {
    if (const auto* e = std::get_if<E319>(&pt)) return *e;
    if (const auto* y = std::get_if<BiSeq>(&pt)) return E319{*y};
    throw Error("MixedSystemPoints", "not an Example-3.19 point");
  }

  // preserve the caller's wrapping (E319 vs raw base point)
  PointValue wrap_like(const PointValue& original, const PointValue& base_result) const {
    if (std::holds_alternative<E319>(original)) return PointValue(E319{as_biseq(base_result)});
    return base_result;
  }

  Rat e_to_y(const EIdx& q, const BiSeq& b) const {
    return Rat(1, q.k) + base_->distance(pv(orbit_[static_cast<size_t>(q.j)]), pv(b));
  }

  Rat d0_orbit(int j, int r) const {
    return base_->distance(pv(orbit_[static_cast<size_t>(j)]),
                           pv(orbit_[static_cast<size_t>(r)]));
  }

  std::vector<PointValue> e_points_within(const PointValue& center, const Rat& radius,
                                          bool open) const {
    std::vector<PointValue> out;
    long long k_hi = 1;
    while (Rat(1, k_hi) >= radius && k_hi < 256) ++k_hi;
    k_hi = std::min(k_hi + 64, (long long)512);
    for (long long k = 1; k <= k_hi; ++k)
      for (int i = 1; i <= 3; ++i)
        for (int j = 0; j < t_; ++j) {
          PointValue cand(E319{EIdx{i, k, j}});
          Rat d = distance(cand, center);
          if (open ? d < radius : d <= radius) out.push_back(cand);
        }
    return out;
  }

  SystemPtr base_;
  int t_;
  std::vector<BiSeq> orbit_;  // g^j(p), j = 0..t-1
};

}  // namespace

SystemPtr make_example_3_19(SystemPtr base, const PointValue& p, int prime_period) {
  if (!base->caps().exact_symbolic || !base->caps().compact || !base->caps().invertible)
    throw Error("CapabilityMissing",
                "Example 3.19 base must be an exact symbolic compact homeomorphism");
  if (prime_period < 1) throw Error("PreconditionViolation", "period must be >= 1");
  const BiSeq& seq = as_biseq(p);
  if (!biseq_equal(as_biseq(base->iterate(p, prime_period)), seq))
    throw Error("NotPeriodic", "designated point is not fixed by f^t");
  for (int s = 1; s < prime_period; ++s)
    if (biseq_equal(as_biseq(base->iterate(p, s)), seq))
      throw Error("PeriodNotPrime", "f^" + std::to_string(s) + "(p) = p with s < t");
  return std::make_shared<Ex319>(std::move(base), seq, prime_period);
}

}  // namespace pdyn
