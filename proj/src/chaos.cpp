#include "pdyn/chaos.hpp"

#include "pdyn/rng.hpp"

#include <algorithm>

namespace pdyn {

namespace {

bool is_two_sided_shift(const System& sys) {
  return sys.caps().exact_symbolic && sys.alphabet_size() > 0 && sys.caps().invertible;
}

Rat pow2_floor_of(const Rat& v) {
  // largest power of two strictly below v
  if (v <= 0) throw Error("PreconditionViolation", "positive value expected");
  Rat p(1);
  while (p >= v) p /= 2;
  while (p * 2 < v) p *= 2;
  return p;
}

}  // namespace

std::optional<SensitivityWitness> sensitivity_witness(const System& sys, const PointValue& x,
                                                      const std::vector<Rat>& radii,
                                                      long long T, int budget, uint64_t seed) {
  if (radii.empty()) throw Error("PreconditionViolation", "no radii");
  Rat r_max(0);
  for (auto& r : radii) r_max = std::max(r_max, r);
  Rat r_min = radii.front();
  for (auto& r : radii) r_min = std::min(r_min, r);

  std::optional<Rat> weakest;  // min over radii of the best realized distance
  std::optional<SensitivityWitness> from_smallest;

  for (auto& r : radii) {
    auto cands = sys.ball_candidates(x, r, budget, seed, nullptr);
    Rat best(0);
    PointValue best_y = x;
    long long best_n = 0;
    for (auto& y : cands) {
      if (sys.equal_points(x, y)) continue;
      if (sys.distance(x, y) >= r) continue;  // witnesses live inside the open ball
      PointValue fx = x, fy = y;
      for (long long n = 1; n <= T; ++n) {
        fx = sys.iterate(fx, 1);
        fy = sys.iterate(fy, 1);
        Rat d = sys.distance(fx, fy);
        if (d > best) {
          best = d;
          best_y = y;
          best_n = n;
        }
      }
    }
    if (!weakest || best < *weakest) weakest = best;
    if (r == r_min && best > 0)
      from_smallest = SensitivityWitness{Rat(0), best_y, best_n, best};
  }
  // separation must clear the smallest neighborhood's own scale, otherwise
  // the evidence is vacuous (identity-like maps)
  (void)r_max;
  if (!weakest || !from_smallest || *weakest <= r_min * 2) return std::nullopt;
  SensitivityWitness w = *from_smallest;
  w.delta_x = pow2_floor_of(*weakest);
  if (!(w.realized > w.delta_x)) return std::nullopt;
  return w;
}

std::optional<PointValue> periodic_point_in_deleted_ball(const System& sys,
                                                         const PointValue& x,
                                                         const Rat& radius) {
  if (radius <= 0) throw Error("PreconditionViolation", "radius must be positive");
  if (is_two_sided_shift(sys)) {
    // periodic specification tracer on the single segment [0, 2]
    SpecSegments spec;
    spec.epsilon = radius / 2;
    int R = strict_agreement_radius(spec.epsilon);
    spec.gap_M = 2 * R + 1;
    spec.segments = {{0, 2, x}};
    auto out = specification_trace_symbolic(sys, spec, true);
    if (trace_succeeded(out)) {
      auto& r = std::get<TraceResult>(out);
      if (!sys.equal_points(r.tracer, x) && sys.distance(r.tracer, x) < radius)
        return r.tracer;
    }
    // x itself came back (periodic center): far-point branch. The second
    // segment pins the tracer to a far sequence at time M, pushing it off x.
    SpecSegments two;
    two.epsilon = radius / 2;
    int R2 = strict_agreement_radius(two.epsilon);
    two.gap_M = 2 * R2 + 1;
    const BiSeq& xs = as_biseq(x);
    BiSeq far = BiSeq::constant(xs.at(two.gap_M) == '0' ? '1' : '0');
    two.segments = {{0, 0, x}, {two.gap_M, two.gap_M, pv(far)}};
    auto out2 = specification_trace_symbolic(sys, two, true);
    if (trace_succeeded(out2)) {
      auto& r = std::get<TraceResult>(out2);
      if (!sys.equal_points(r.tracer, x) && sys.distance(r.tracer, x) < radius)
        return r.tracer;
    }
    return std::nullopt;
  }
  if (sys.caps().enumerates_periodic) {
    for (long long m = 1; m <= 12; ++m) {
      std::vector<PointValue> pts;
      try {
        pts = sys.periodic_points(m);
      } catch (const Error&) {
        break;
      }
      for (auto& p : pts) {
        if (sys.equal_points(p, x)) continue;
        if (sys.distance(p, x) < radius) return p;
      }
      if (sys.periodic_points_all()) break;  // higher periods add nothing
    }
    return std::nullopt;
  }
  if (sys.is_identity_map()) {
    // every point is fixed; any distinct point of the deleted ball works
    try {
      auto cands = sys.sample(ball(x, radius, true), 16, 23);
      for (auto& p : cands)
        if (!sys.equal_points(p, x)) return p;
    } catch (const Error&) {
    }
    return std::nullopt;
  }
  return std::nullopt;
}

Verdict dense_periodic_at_point(const System& sys, const PointValue& x,
                                const std::vector<Rat>& radii, long long period_bound,
                                uint64_t seed) {
  if (radii.empty()) throw Error("PreconditionViolation", "no radii");
  json params;
  params["period_bound"] = period_bound;
  params["seed"] = seed;
  Verdict v = make_verdict("dense-periodic", Outcome::Holds, params);
  v.exact = sys.metric_exact();
  json found = json::array();
  for (auto& r : radii) {
    auto p = periodic_point_in_deleted_ball(sys, x, r);
    if (p) {
      found.push_back({{"radius", rat_to_string(r)}, {"point", sys.encode_point(*p)}});
      continue;
    }
    if (auto all = sys.periodic_points_all()) {
      // the complete periodic set misses the deleted ball: certified failure
      bool any = false;
      for (auto& q : *all)
        if (!sys.equal_points(q, x) && sys.distance(q, x) < r) any = true;
      if (!any) {
        v.outcome = Outcome::Fails;
        v.witness = {{"radius", rat_to_string(r)},
                     {"periodic_points", all->size()},
                     {"note", "the full periodic set lies outside the deleted ball"}};
        v.limit_certified = true;
        v.detail["found"] = found;
        return v;
      }
    }
    v.outcome = Outcome::Inconclusive;
    v.witness = {{"radius", rat_to_string(r)}};
    v.detail["found"] = found;
    return v;
  }
  v.detail["found"] = found;
  return v;
}

SensitivityConstruction sensitivity_constant_from_periodic(const System& sys,
                                                           const PointValue& x,
                                                           const PointValue& q,
                                                           const Region& N, long long T,
                                                           uint64_t seed) {
  SensitivityConstruction res;
  // verify q periodic and find its least period
  long long q_period = 0;
  {
    PointValue cur = q;
    for (long long m = 1; m <= 64; ++m) {
      cur = sys.iterate(cur, 1);
      if (sys.equal_points(cur, q)) {
        q_period = m;
        break;
      }
    }
  }
  if (q_period == 0) throw Error("NotPeriodic", "q is not periodic within period 64");

  // delta = 2 d(x, O(q)) must be positive
  Rat dist_orbit;
  {
    PointValue cur = q;
    dist_orbit = sys.distance(x, q);
    for (long long i = 1; i < q_period; ++i) {
      cur = sys.iterate(cur, 1);
      dist_orbit = std::min(dist_orbit, sys.distance(x, cur));
    }
  }
  if (dist_orbit == 0)
    throw Error("PreconditionViolation", "x lies on the orbit of q (delta = 0)");
  Rat delta = dist_orbit * 2;
  Rat eta = delta / 8;
  res.eta = eta;

  const auto* nb = std::get_if<BallRegion>(&N);
  if (!nb) throw Error("PreconditionViolation", "N must be a ball around x");
  Rat rho = std::min(nb->radius, eta);

  // periodic p in N' = N n B_eta(x), distinct from x
  auto p = periodic_point_in_deleted_ball(sys, x, rho);
  if (!p) {
    res.failure = {{"code", "NoPeriodicInNeighborhood"}};
    return res;
  }
  long long n = 0;  // prime period of p
  {
    PointValue cur = *p;
    for (long long m = 1; m <= 4096 && n == 0; ++m) {
      cur = sys.iterate(cur, 1);
      if (sys.equal_points(cur, *p)) n = m;
    }
  }
  if (n == 0) {
    res.failure = {{"code", "NoPeriodicInNeighborhood"}, {"note", "period of p unresolved"}};
    return res;
  }

  // transitive visit: y in N' with f^k(y) in W = cap_i f^-i(B_eta(f^i(q)))
  std::optional<PointValue> y;
  long long k = 0;
  if (is_two_sided_shift(sys)) {
    const BiSeq& xs = as_biseq(x);
    const BiSeq& qs = as_biseq(q);
    long long Rn = strict_agreement_radius(rho);
    long long Rw = strict_agreement_radius(eta);
    BiSeq z = BiSeq::constant('0');
    for (long long m = -Rn; m <= Rn; ++m) z.set_symbol(m, xs.at(m));
    k = Rn + Rw + 1;
    for (long long m = -Rw; m <= n + Rw; ++m) z.set_symbol(k + m, qs.at(m));
    y = pv(z);
  } else if (sys.id() == "doubling-circle") {
    // binary splice: x's leading bits, then q's expansion
    Rat vx = as_scalar(x).value;
    Rat vq = as_scalar(q).value;
    int B = strict_agreement_radius(rho) + 2;
    int G = static_cast<int>(n) + strict_agreement_radius(eta) + 3;
    Rat t(0);
    Rat cur = vx;
    for (int i = 0; i < B; ++i) {
      int bit = cur >= Rat(1, 2) ? 1 : 0;
      t += Rat(bit) * pow2(-(i + 1));
      cur = cur * 2 - bit;
    }
    Rat cq = vq;
    for (int i = 0; i < G; ++i) {
      int bit = cq >= Rat(1, 2) ? 1 : 0;
      t += Rat(bit) * pow2(-(B + i + 1));
      cq = cq * 2 - bit;
    }
    k = B;
    y = pv_scalar(t, true);
  } else {
    // seeded search
    for (int attempt = 0; attempt < 256 && !y; ++attempt) {
      auto cand = sys.sample(ball(x, rho, true), 1, shard_seed(seed, attempt))[0];
      PointValue cur = cand;
      for (long long step = 1; step <= T; ++step) {
        cur = sys.iterate(cur, 1);
        PointValue w = cur, qo = q;
        bool in_w = true;
        for (long long i = 0; i <= n && in_w; ++i) {
          if (i > 0) {
            w = sys.iterate(w, 1);
            qo = sys.iterate(qo, 1);
          }
          if (!(sys.distance(w, qo) < eta)) in_w = false;
        }
        if (in_w) {
          y = cand;
          k = step;
          break;
        }
      }
    }
  }
  if (!y || k < 1) {
    res.failure = {{"code", "NoTransitiveVisit"}};
    return res;
  }
  if (!(sys.distance(x, *y) < eta)) {
    res.failure = {{"code", "NoTransitiveVisit"}, {"note", "constructed y left B_eta(x)"}};
    return res;
  }

  long long j = k / n + 1;
  long long nj = n * j;
  Rat d1 = sys.distance(sys.iterate(*p, nj), sys.iterate(x, nj));
  Rat d2 = sys.distance(sys.iterate(x, nj), sys.iterate(*y, nj));
  const char* side = nullptr;
  Rat realized;
  if (d1 > eta && d1 >= d2) {
    side = "periodic";
    realized = d1;
  } else if (d2 > eta) {
    side = "transitive";
    realized = d2;
  } else if (d1 > eta) {
    side = "periodic";
    realized = d1;
  } else {
    res.failure = {{"code", "DisjunctionFailed"},
                   {"d1", rat_to_string(d1)},
                   {"d2", rat_to_string(d2)}};
    return res;
  }
  res.ok = true;
  res.witness = {{"p", sys.encode_point(*p)},
                 {"y", sys.encode_point(*y)},
                 {"k", k},
                 {"n", n},
                 {"j", j},
                 {"nj", nj},
                 {"delta", rat_to_string(delta)},
                 {"side", side},
                 {"distance", rat_to_string(realized)}};
  (void)seed;
  return res;
}

DevaneyReport devaney_point_verdict(const System& sys, const PointValue& x,
                                    const std::vector<Rat>& radii,
                                    const std::vector<Region>& probes, long long n_max,
                                    long long period_bound, long long T, int budget,
                                    uint64_t seed) {
  DevaneyReport rep{make_verdict("devaney-point", Outcome::Holds, json::object()),
                    transitive_point_verdict(sys, x, radii, probes, n_max),
                    dense_periodic_at_point(sys, x, radii, period_bound, seed),
                    sensitivity_witness(sys, x, radii, T, budget, seed)};
  Outcome sens = rep.sensitivity ? Outcome::Holds : Outcome::Inconclusive;
  Outcome worst = Outcome::Holds;
  for (Outcome o : {rep.transitive.outcome, rep.dense_periodic.outcome, sens}) {
    if (o == Outcome::Fails)
      worst = Outcome::Fails;
    else if (o == Outcome::Inconclusive && worst == Outcome::Holds)
      worst = Outcome::Inconclusive;
  }
  rep.overall.outcome = worst;
  rep.overall.exact = sys.metric_exact();
  rep.overall.detail["transitive"] = outcome_name(rep.transitive.outcome);
  rep.overall.detail["dense_periodic"] = outcome_name(rep.dense_periodic.outcome);
  rep.overall.detail["sensitivity"] = outcome_name(sens);
  if (rep.sensitivity) {
    rep.overall.detail["sensitivity_delta"] = rat_to_string(rep.sensitivity->delta_x);
    rep.overall.detail["sensitivity_witness"] = sys.encode_point(rep.sensitivity->y);
  }
  return rep;
}

}  // namespace pdyn
