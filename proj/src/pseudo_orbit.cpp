#include "pdyn/pseudo_orbit.hpp"

#include "pdyn/rng.hpp"

#include <algorithm>

namespace pdyn {

namespace {

// smallest m with 2^-m < eps (first flippable coordinate distance)
int first_free_coordinate(const Rat& eps) { return strict_agreement_radius(eps) + 1; }

PointValue perturb(const System& sys, const PointValue& p, const Rat& bound,
                   SplitMix64& rng) {
  // keep a seeded fraction of steps unperturbed
  if (rng.below(4) == 0) return p;

  if (const auto* bs = std::get_if<BiSeq>(&p)) {
    BiSeq z = *bs;
    int m = first_free_coordinate(bound);
    for (int j = 0; j < 3; ++j) {
      long long n = m + static_cast<long long>(rng.below(4));
      if (rng.coin()) n = -n;
      char cur = z.at(n);
      z.set_symbol(n, cur == '0' ? '1' : '0');
    }
    return pv(z);
  }
  if (const auto* os = std::get_if<OneSeq>(&p)) {
    OneSeq z = *os;
    int m = first_free_coordinate(bound);
    for (int j = 0; j < 2; ++j) {
      long long n = m + static_cast<long long>(rng.below(4));
      char cur = z.at(n);
      z.set_symbol(n, cur == '0' ? '1' : '0');
    }
    return pv(z);
  }
  if (std::holds_alternative<ScalarV>(p)) {
    // dyadic offset in (-bound/2, bound/2); reflected back into the domain
    Rat u = (rng.unit_dyadic(40) - Rat(1, 2)) * bound;
    for (int attempt = 0; attempt < 2; ++attempt) {
      PointValue cand = pv_scalar(as_scalar(p).value + u, as_scalar(p).exact);
      if (sys.in_domain(cand)) return cand;
      u = -u;
    }
    return p;  // boundary-pinned points stay exact
  }
  // Example 3.19: switch the E-point branch index when that move is small
  // enough; otherwise keep the exact image (a true orbit is always a valid
  // pseudo-orbit)
  const E319& e = as_e319(p);
  if (e.is_e()) {
    const EIdx& q = std::get<EIdx>(e.v);
    if (Rat(1, q.k) < bound) {
      EIdx moved{1 + static_cast<int>(rng.below(3)), q.k, q.j};
      return PointValue(E319{moved});
    }
    return p;
  }
  BiSeq z = std::get<BiSeq>(e.v);
  int m = first_free_coordinate(bound);
  long long n = m + static_cast<long long>(rng.below(4));
  if (rng.coin()) n = -n;
  char cur = z.at(n);
  z.set_symbol(n, cur == '0' ? '1' : '0');
  return PointValue(E319{z});
}

}  // namespace

PseudoOrbit make_pseudo_orbit(const System& sys, Rat delta, std::vector<PointValue> points) {
  if (delta <= 0) throw Error("PreconditionViolation", "delta must be positive");
  if (points.size() < 2) throw Error("PreconditionViolation", "pseudo-orbits have length >= 2");
  PseudoOrbit po{std::move(delta), std::move(points)};
  if (!pseudo_orbit_valid(sys, po))
    throw Error("PreconditionViolation", "step violates d(f(x_i), x_{i+1}) < delta");
  return po;
}

bool pseudo_orbit_valid(const System& sys, const PseudoOrbit& po) {
  for (size_t i = 0; i + 1 < po.points.size(); ++i) {
    auto img = sys.iterate(po.points[i], 1);
    if (!(sys.distance(img, po.points[i + 1]) < po.delta)) return false;
  }
  return true;
}

PseudoOrbit perturbed_orbit(const System& sys, const PointValue& x, const Rat& delta,
                            int length, uint64_t seed) {
  if (delta <= 0) throw Error("PreconditionViolation", "delta must be positive");
  if (length < 2) throw Error("PreconditionViolation", "length must be >= 2");
  if (!sys.in_domain(x)) throw Error("DomainViolation", "through-point outside the domain");
  SplitMix64 rng(seed);
  Rat half = delta / 2;
  std::vector<PointValue> pts;
  pts.push_back(x);
  for (int i = 1; i < length; ++i) {
    auto img = sys.iterate(pts.back(), 1);
    pts.push_back(perturb(sys, img, half, rng));
  }
  return make_pseudo_orbit(sys, delta, std::move(pts));
}

}  // namespace pdyn
