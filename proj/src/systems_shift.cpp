#include "pdyn/rng.hpp"
#include "pdyn/system.hpp"

#include <algorithm>

namespace pdyn {
namespace detail {

namespace {

void check_alphabet(int k) {
  if (k < 2 || k > 10)
    throw Error("SchemaViolation", "shift alphabet size must be in [2,10]");
}

char sym(int v) { return static_cast<char>('0' + v); }

std::string random_word(SplitMix64& rng, int k, int len) {
  std::string w;
  for (int i = 0; i < len; ++i) w += sym(static_cast<int>(rng.below(k)));
  return w;
}

// words 0..k^len-1 in lexicographic order
std::vector<std::string> all_words(int k, int len, long long cap = 1 << 16) {
  long long total = 1;
  for (int i = 0; i < len; ++i) {
    total *= k;
    if (total > cap) throw Error("BudgetExceeded", "word enumeration too large");
  }
  std::vector<std::string> out;
  out.reserve(static_cast<size_t>(total));
  std::string w(static_cast<size_t>(len), '0');
  for (long long v = 0; v < total; ++v) {
    long long x = v;
    for (int i = len - 1; i >= 0; --i) {
      w[static_cast<size_t>(i)] = sym(static_cast<int>(x % k));
      x /= k;
    }
    out.push_back(w);
  }
  return out;
}

}  // namespace

class FullShift final : public System {
 public:
  explicit FullShift(int k) : k_(k) { check_alphabet(k); }

  std::string id() const override { return "shift"; }
  int alphabet_size() const override { return k_; }

  Capabilities caps() const override {
    return {.invertible = true,
            .exact_symbolic = true,
            .exact_interval_image = false,
            .enumerates_periodic = true,
            .compact = true};
  }

  PointValue iterate(const PointValue& p, long long n) const override {
    return pv(as_biseq(p).shifted(n));
  }

  Rat distance(const PointValue& p, const PointValue& q) const override {
    return biseq_distance(as_biseq(p), as_biseq(q));
  }

  bool in_domain(const PointValue& p) const override {
    const auto* s = std::get_if<BiSeq>(&p);
    if (!s) return false;
    auto ok = [&](const std::string& w) {
      return std::all_of(w.begin(), w.end(),
                         [&](char c) { return c >= '0' && c < '0' + k_; });
    };
    return ok(s->left) && ok(s->core) && ok(s->right);
  }

  std::vector<PointValue> periodic_points(long long period) const override {
    if (period < 1) throw Error("PreconditionViolation", "period must be >= 1");
    std::vector<PointValue> out;
    for (auto& w : all_words(k_, static_cast<int>(period)))
      out.push_back(pv(BiSeq::periodic(w)));
    return out;
  }

  std::vector<PointValue> sample(const Region& r, int count, uint64_t seed) const override {
    std::vector<PointValue> out;
    SplitMix64 rng(seed);
    for (int i = 0; i < count; ++i) {
      BiSeq s;
      int w = 6;
      s.core = random_word(rng, k_, 2 * w + 1);
      s.offset = -w;
      s.left = random_word(rng, k_, 1 + static_cast<int>(rng.below(3)));
      s.right = random_word(rng, k_, 1 + static_cast<int>(rng.below(3)));
      if (const auto* cy = std::get_if<CylinderRegion>(&r)) {
        for (size_t j = 0; j < cy->word.size(); ++j)
          s.set_symbol(cy->start + static_cast<long long>(j), cy->word[j]);
      } else if (const auto* b = std::get_if<BallRegion>(&r)) {
        // force agreement with the center out to the radius that pins the
        // distance inside the ball
        int rad = b->open ? strict_agreement_radius(b->radius)
                          : std::max(log2_ceil_inv(b->radius) - 1, 0);
        const BiSeq& c = as_biseq(b->center);
        for (long long n = -rad; n <= rad; ++n) s.set_symbol(n, c.at(n));
      } else {
        throw Error("EmptyRegion", "interval regions are not shift regions");
      }
      out.push_back(pv(s));
    }
    return out;
  }

  std::vector<PointValue> ball_candidates(const PointValue& x, const Rat& delta, int budget,
                                          uint64_t seed, bool* exhaustive) const override {
    if (exhaustive) *exhaustive = false;
    const BiSeq& c = as_biseq(x);
    std::vector<PointValue> out;
    out.push_back(x);
    int rad = std::max(log2_ceil_inv(delta) - 1, 0);
    // single-coordinate flips across the constrained window and just beyond
    for (long long n = -(rad + 3); n <= rad + 3 && (int)out.size() < budget; ++n) {
      BiSeq f = c;
      char cur = f.at(n);
      f.set_symbol(n, cur == '0' ? '1' : '0');
      out.push_back(pv(f));
    }
    // periodizations of center windows (nearby periodic points)
    for (int w = 1; w <= 4; ++w)
      out.push_back(pv(BiSeq::periodic(c.window(-w, w))));
    auto sampled = sample(ball(x, delta, false), std::max(budget - (int)out.size(), 0), seed);
    out.insert(out.end(), sampled.begin(), sampled.end());
    return out;
  }

  Region whole_space() const override { return cylinder(0, ""); }

  std::optional<Rat> diameter() const override { return Rat(1); }

  std::string encode_point(const PointValue& p) const override {
    return as_biseq(p).encode();
  }

  PointValue parse_point(const std::string& text) const override {
    auto p = pv(BiSeq::decode(text));
    if (!in_domain(p)) throw Error("DomainViolation", "symbols outside alphabet");
    return p;
  }

 private:
  int k_;
};

class OneSidedShift final : public System {
 public:
  explicit OneSidedShift(int k) : k_(k) { check_alphabet(k); }

  std::string id() const override { return "oneshift"; }
  int alphabet_size() const override { return k_; }

  Capabilities caps() const override {
    return {.invertible = false,
            .exact_symbolic = true,
            .exact_interval_image = false,
            .enumerates_periodic = true,
            .compact = true};
  }

  PointValue iterate(const PointValue& p, long long n) const override {
    if (n < 0)
      throw Error("NegativeIterateOnNonInvertible", "one-sided shift is not invertible");
    return pv(as_oneseq(p).shifted(n));
  }

  Rat distance(const PointValue& p, const PointValue& q) const override {
    return oneseq_distance(as_oneseq(p), as_oneseq(q));
  }

  bool in_domain(const PointValue& p) const override {
    const auto* s = std::get_if<OneSeq>(&p);
    if (!s) return false;
    auto ok = [&](const std::string& w) {
      return std::all_of(w.begin(), w.end(),
                         [&](char c) { return c >= '0' && c < '0' + k_; });
    };
    return ok(s->core) && ok(s->tail);
  }

  std::vector<PointValue> periodic_points(long long period) const override {
    if (period < 1) throw Error("PreconditionViolation", "period must be >= 1");
    std::vector<PointValue> out;
    for (auto& w : all_words(k_, static_cast<int>(period)))
      out.push_back(pv(OneSeq{"", w}));
    return out;
  }

  std::vector<PointValue> sample(const Region& r, int count, uint64_t seed) const override {
    std::vector<PointValue> out;
    SplitMix64 rng(seed);
    for (int i = 0; i < count; ++i) {
      OneSeq s;
      s.core = random_word(rng, k_, 12);
      s.tail = random_word(rng, k_, 1 + static_cast<int>(rng.below(3)));
      if (const auto* cy = std::get_if<CylinderRegion>(&r)) {
        if (cy->start < 0) throw Error("EmptyRegion", "negative cylinder on one-sided shift");
        for (size_t j = 0; j < cy->word.size(); ++j)
          s.set_symbol(cy->start + static_cast<long long>(j), cy->word[j]);
      } else if (const auto* b = std::get_if<BallRegion>(&r)) {
        int rad = b->open ? strict_agreement_radius(b->radius)
                          : std::max(log2_ceil_inv(b->radius) - 1, 0);
        const OneSeq& c = as_oneseq(b->center);
        for (long long n = 0; n <= rad; ++n) s.set_symbol(n, c.at(n));
      } else {
        throw Error("EmptyRegion", "interval regions are not shift regions");
      }
      out.push_back(pv(s));
    }
    return out;
  }

  Region whole_space() const override { return cylinder(0, ""); }

  std::optional<Rat> diameter() const override { return Rat(1); }

  std::string encode_point(const PointValue& p) const override {
    return as_oneseq(p).encode();
  }

  PointValue parse_point(const std::string& text) const override {
    auto p = pv(OneSeq::decode(text));
    if (!in_domain(p)) throw Error("DomainViolation", "symbols outside alphabet");
    return p;
  }

 private:
  int k_;
};

SystemPtr make_full_shift(int k) { return std::make_shared<FullShift>(k); }
SystemPtr make_one_sided_shift(int k) { return std::make_shared<OneSidedShift>(k); }

}  // namespace detail
}  // namespace pdyn
