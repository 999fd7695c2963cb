#pragma once

// Brute-force oracles, deliberately independent of the library's cylinder /
// agreement-radius code paths: raw char-array scans only.

#include "pdyn/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

using pdyn::Rat;

// Two-sided word on the window [-W, W]; index i <-> buf[i + W].
struct Window {
  int W;
  std::string buf;  // length 2W+1
  char at(int n) const { return buf[static_cast<size_t>(n + W)]; }
};

// d(sigma^s a, sigma^s b) over coordinates visible in the windows, treating
// symbols outside as agreeing (callers pick W large enough that the tails
// agree by construction).
inline Rat shifted_distance(const Window& a, const Window& b, int s) {
  auto differs = [&](int n) {
    if (n < -a.W || n > a.W) return false;  // tails agree by construction
    return a.at(n) != b.at(n);
  };
  for (int m = 0; m <= 2 * a.W; ++m)
    if (differs(s + m) || differs(s - m)) return pdyn::pow2(-m);
  return Rat(0);
}

// All assignments of the window [-Tp, Tp] of `center` (everything outside
// stays equal to center) that satisfy d(sigma^n x, sigma^n y) <= delta for
// |n| <= T. Returned as the set of constrained positions that every passing
// word agrees on with the center, i.e. the brute-force cylinder.
inline std::map<long long, char> brute_force_gamma_cylinder(const Window& center, int T,
                                                            const Rat& delta, int Tp,
                                                            int alphabet) {
  std::vector<int> free_pos;
  for (int n = -Tp; n <= Tp; ++n) free_pos.push_back(n);
  size_t count = 1;
  for (size_t i = 0; i < free_pos.size(); ++i) count *= static_cast<size_t>(alphabet);

  std::vector<bool> always_agrees(free_pos.size(), true);
  for (size_t code = 0; code < count; ++code) {
    Window cand = center;
    size_t c = code;
    for (size_t i = 0; i < free_pos.size(); ++i) {
      cand.buf[static_cast<size_t>(free_pos[i] + center.W)] =
          static_cast<char>('0' + c % static_cast<size_t>(alphabet));
      c /= static_cast<size_t>(alphabet);
    }
    bool pass = true;
    for (int n = -T; n <= T && pass; ++n)
      if (shifted_distance(center, cand, n) > delta) pass = false;
    if (!pass) continue;
    for (size_t i = 0; i < free_pos.size(); ++i)
      if (cand.at(free_pos[i]) != center.at(free_pos[i])) always_agrees[i] = false;
  }
  std::map<long long, char> constraints;
  for (size_t i = 0; i < free_pos.size(); ++i)
    if (always_agrees[i]) constraints[free_pos[i]] = center.at(free_pos[i]);
  return constraints;
}

// Largest (n, eps)-separated subset of the 2^n window words, by direct
// pairwise scan (words embedded as 0-padded two-sided sequences).
inline long long brute_force_separated_count(int n, const Rat& eps) {
  int W = 2 * n + 4;
  std::vector<Window> pts;
  for (long long v = 0; v < (1LL << n); ++v) {
    Window w{W, std::string(static_cast<size_t>(2 * W + 1), '0')};
    for (int i = 0; i < n; ++i)
      if ((v >> i) & 1) w.buf[static_cast<size_t>(i + W)] = '1';
    pts.push_back(std::move(w));
  }
  // d_n(x, y) = max_{0 <= s < n} d(sigma^s x, sigma^s y)
  auto dn = [&](const Window& a, const Window& b) {
    Rat best(0);
    for (int s = 0; s < n; ++s) {
      Rat d = shifted_distance(a, b, s);
      if (d > best) best = d;
    }
    return best;
  };
  // greedy is exact here iff all pairs separate; verify all pairs instead
  long long kept = 0;
  std::vector<size_t> chosen;
  for (size_t i = 0; i < pts.size(); ++i) {
    bool ok = true;
    for (size_t j : chosen)
      if (dn(pts[i], pts[j]) <= eps) {
        ok = false;
        break;
      }
    if (ok) {
      chosen.push_back(i);
      ++kept;
    }
  }
  return kept;
}

}  // namespace oracle
