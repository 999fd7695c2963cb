#pragma once

// Internal exact/directed-rounding interval helpers shared by the tracing and
// specification machinery. Inner preimages are sound for exhibiting points,
// outer ones for refuting their existence.

#include "pdyn/system.hpp"

#include <algorithm>
#include <vector>

namespace pdyn::ival {

inline Rat dyadic_floor(const Rat& r, int bits) {
  BigInt scaled = numerator(r) * (BigInt(1) << bits) / denominator(r);
  if (r < 0 && Rat(scaled, BigInt(1) << bits) != r) scaled -= 1;
  return Rat(scaled, BigInt(1) << bits);
}

inline Rat dyadic_ceil(const Rat& r, int bits) { return -dyadic_floor(-r, bits); }

// rational bounds on sqrt(v) with absolute error < 2^-bits
inline Rat sqrt_lower(const Rat& v, int bits) {
  if (v <= 0) return Rat(0);
  BigInt scaled = numerator(v) * (BigInt(1) << (2 * bits)) / denominator(v);
  BigInt s = sqrt(scaled);
  return Rat(s, BigInt(1) << bits);
}

inline Rat sqrt_upper(const Rat& v, int bits) {
  if (v <= 0) return Rat(0);
  BigInt scaled = numerator(v) * (BigInt(1) << (2 * bits)) / denominator(v) + 1;
  BigInt s = sqrt(scaled) + 1;
  return Rat(s, BigInt(1) << bits);
}

struct RInt {
  Rat lo, hi;
  bool empty() const { return lo > hi; }
};

inline RInt intersect(const RInt& a, const RInt& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

constexpr int kSqrtBits = 160;
constexpr int kClampBits = 128;

inline bool has_interval_preimages(const System& sys) {
  const std::string id = sys.id();
  return id == "identity" || id == "doubling-line" || id == "squaring" || id == "tent";
}

inline std::vector<RInt> preimage_once(const System& sys, const RInt& v, bool inner) {
  const std::string id = sys.id();
  if (v.empty()) return {};
  if (id == "identity") return {v};
  if (id == "doubling-line") return {{v.lo / 2, v.hi / 2}};
  if (id == "squaring") {
    RInt c{std::max(v.lo, Rat(0)), std::min(v.hi, Rat(1))};
    if (c.empty()) return {};
    Rat margin = Rat(1, BigInt(1) << (kSqrtBits - 2));
    if (inner) {
      RInt r{sqrt_upper(c.lo, kSqrtBits), sqrt_lower(c.hi, kSqrtBits)};
      if (r.hi - r.lo < margin) return {};
      return {r};
    }
    return {{sqrt_lower(c.lo, kSqrtBits), sqrt_upper(c.hi, kSqrtBits)}};
  }
  if (id == "tent") {
    RInt c{std::max(v.lo, Rat(0)), std::min(v.hi, Rat(1))};
    if (c.empty()) return {};
    return {{c.lo / 2, c.hi / 2}, {(Rat(2) - c.hi) / 2, (Rat(2) - c.lo) / 2}};
  }
  return {};
}

// One forward step of the hull, outward-clamped so widths stay bounded over
// long walks (f^n of a point on the squaring map would otherwise outgrow any
// exact representation).
inline RInt image_once_clamped(const System& sys, const RInt& v) {
  auto im = sys.interval_image({v.lo, v.hi}, 1);
  return {dyadic_floor(im.front().lo, kClampBits), dyadic_ceil(im.back().hi, kClampBits)};
}

}  // namespace pdyn::ival
