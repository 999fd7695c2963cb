#include "pdyn/expansivity.hpp"

#include "pdyn/rng.hpp"

#include <algorithm>
#include <set>

namespace pdyn {

std::vector<long long> WindowSpec::indices() const {
  std::vector<long long> out;
  switch (kind) {
    case Kind::TwoSided:
      for (long long n = -T; n <= T; ++n) out.push_back(n);
      break;
    case Kind::OneSided:
      for (long long n = 0; n <= T; ++n) out.push_back(n);
      break;
    case Kind::Subgroup:
      for (long long n = -T; n <= T; ++n) out.push_back(m * n);
      break;
  }
  return out;
}

Rat window_orbit_max(const System& sys, const PointValue& x, const PointValue& y,
                     const WindowSpec& w, const Rat* stop_above) {
  Rat best = sys.distance(x, y);
  if (stop_above && best > *stop_above) return best;
  long long step = w.kind == WindowSpec::Kind::Subgroup ? w.m : 1;
  // forward arm
  PointValue fx = x, fy = y;
  for (long long n = 1; n <= w.T; ++n) {
    fx = sys.iterate(fx, step);
    fy = sys.iterate(fy, step);
    Rat d = sys.distance(fx, fy);
    if (d > best) best = d;
    if (stop_above && best > *stop_above) return best;
  }
  if (w.kind == WindowSpec::Kind::OneSided) return best;
  // backward arm
  PointValue bx = x, by = y;
  for (long long n = 1; n <= w.T; ++n) {
    bx = sys.iterate(bx, -step);
    by = sys.iterate(by, -step);
    Rat d = sys.distance(bx, by);
    if (d > best) best = d;
    if (stop_above && best > *stop_above) return best;
  }
  return best;
}

bool within_on_window(const System& sys, const PointValue& x, const PointValue& y,
                      const WindowSpec& w, const Rat& delta) {
  return window_orbit_max(sys, x, y, w, &delta) <= delta;
}

bool ball_contains(const System& sys, const DynamicalBall& ball, const PointValue& y) {
  return within_on_window(sys, ball.center, y, ball.window, ball.delta);
}

bool cylinder_subset(const CylinderRep& a, const CylinderRep& b) {
  for (auto& [idx, c] : b.constraints) {
    auto it = a.constraints.find(idx);
    if (it == a.constraints.end() || it->second != c) return false;
  }
  return true;
}

std::vector<Rat> default_delta_grid() {
  std::vector<Rat> g;
  for (int e = 0; e <= 16; ++e) g.push_back(pow2(-e));
  return g;
}

namespace {

// plain full shift / one-sided shift (cylinder algebra applies)
bool is_plain_shift(const System& sys) {
  return sys.caps().exact_symbolic && sys.alphabet_size() > 0;
}

bool region_contains_closed(const System& sys, const Region& r, const PointValue& p) {
  if (const auto* bl = std::get_if<BallRegion>(&r))
    return sys.distance(bl->center, p) <= bl->radius;  // closure of the ball
  if (const auto* iv = std::get_if<IntervalRegion>(&r)) {
    const Rat& v = as_scalar(p).value;
    return v >= iv->lo && v <= iv->hi;
  }
  const auto& cy = std::get<CylinderRegion>(r);
  if (const auto* bs = std::get_if<BiSeq>(&p)) {
    for (size_t j = 0; j < cy.word.size(); ++j)
      if (bs->at(cy.start + (long long)j) != cy.word[j]) return false;
    return true;
  }
  const OneSeq& os = as_oneseq(p);
  for (size_t j = 0; j < cy.word.size(); ++j)
    if (os.at(cy.start + (long long)j) != cy.word[j]) return false;
  return true;
}

// Coordinate constraints forcing d(sigma^n x, sigma^n y) <= delta for each n
// in the window, under the dyadic metric: agreement out to radius L-1 around
// n, where L is the least integer with 2^-L <= delta.
CylinderRep shift_cylinder(const PointValue& x, const Rat& delta, const WindowSpec& w) {
  CylinderRep rep;
  int L = log2_ceil_inv(delta);
  if (L == 0) {
    rep.collapses_in_limit = false;  // delta >= 1: nothing is ever constrained
    return rep;
  }
  long long rad = L - 1;
  const bool one_sided_pt = std::holds_alternative<OneSeq>(x);
  auto symbol_at = [&](long long n) {
    return one_sided_pt ? as_oneseq(x).at(n) : as_biseq(x).at(n);
  };
  for (long long n : w.indices()) {
    long long lo, hi;
    if (one_sided_pt) {
      // one-sided metric: first disagreement index >= L, i.e. agreement on
      // the forward window [n, n+L-1]
      lo = n;
      hi = n + rad;
    } else {
      lo = n - rad;
      hi = n + rad;
    }
    for (long long j = std::max(lo, one_sided_pt ? 0LL : lo); j <= hi; ++j)
      rep.constraints[j] = symbol_at(j);
  }
  switch (w.kind) {
    case WindowSpec::Kind::TwoSided:
    case WindowSpec::Kind::OneSided:
      rep.collapses_in_limit = true;  // constrained radius grows with T
      break;
    case WindowSpec::Kind::Subgroup:
      rep.collapses_in_limit = 2 * rad + 1 >= w.m;  // windows around m n tile Z
      break;
  }
  return rep;
}

DynamicalBall explicit_ball(const System& sys, const PointValue& x, const Rat& delta,
                            const WindowSpec& w, int budget, uint64_t seed) {
  bool exhaustive = false;
  auto cands = sys.ball_candidates(x, delta, budget, seed, &exhaustive);
  ExplicitRep rep;
  rep.candidates_tested = static_cast<int>(cands.size());
  rep.exhaustive = exhaustive;
  auto known = [&](const PointValue& y) {
    for (auto& p : rep.points)
      if (sys.equal_points(p, y)) return true;
    return false;
  };
  for (auto& y : cands) {
    if (!within_on_window(sys, x, y, w, delta)) continue;
    if (!known(y)) rep.points.push_back(y);
  }
  if (!known(x)) rep.points.push_back(x);
  return DynamicalBall{x, delta, w, std::move(rep)};
}

}  // namespace

DynamicalBall gamma_ball(const System& sys, const PointValue& x, const Rat& delta,
                         const WindowSpec& window, int candidate_budget, uint64_t seed) {
  if (delta <= 0) throw Error("PreconditionViolation", "delta must be positive");
  if (window.T < 0) throw Error("PreconditionViolation", "horizon must be >= 0");
  if (window.kind != WindowSpec::Kind::OneSided && !sys.caps().invertible)
    throw Error("NonInvertibleTwoSided", "two-sided window on a non-invertible system");
  if (is_plain_shift(sys))
    return DynamicalBall{x, delta, window, shift_cylinder(x, delta, window)};
  return explicit_ball(sys, x, delta, window, candidate_budget, seed);
}

DynamicalBall phi_ball(const System& sys, const PointValue& x, const Rat& delta, long long T,
                       int candidate_budget, uint64_t seed) {
  return gamma_ball(sys, x, delta, WindowSpec::one_sided(T), candidate_budget, seed);
}

DynamicalBall gamma_subgroup_ball(const System& sys, const PointValue& x, const Rat& delta,
                                  long long m, long long T, int candidate_budget,
                                  uint64_t seed) {
  if (m == 0) throw Error("PreconditionViolation", "subgroup generator m must be nonzero");
  return gamma_ball(sys, x, delta, WindowSpec::subgroup(std::llabs(m), T), candidate_budget,
                    seed);
}

ExpansivityResult pointwise_expansivity_verdict(const System& sys, const PointValue& x,
                                                const std::vector<Rat>& delta_grid, long long T,
                                                int budget, uint64_t seed) {
  if (delta_grid.empty()) throw Error("PreconditionViolation", "empty delta grid");
  json params;
  params["T"] = T;
  params["budget"] = budget;
  params["seed"] = seed;
  json per_delta = json::array();

  std::optional<Rat> accepted;
  bool accepted_limit = false;
  json last_witness;
  bool last_fail_certified = false;
  // positively-expansive reading for non-invertible systems
  WindowSpec w = sys.caps().invertible ? WindowSpec::two_sided(T) : WindowSpec::one_sided(T);

  for (const Rat& delta : delta_grid) {
    json row;
    row["delta"] = rat_to_string(delta);
    if (auto cert = sys.infinite_gamma_certificate(x, delta)) {
      row["result"] = "fails";
      row["certificate"] = *cert;
      last_witness = *cert;
      last_fail_certified = true;
      per_delta.push_back(row);
      continue;
    }
    auto b = gamma_ball(sys, x, delta, w, budget, seed);
    if (b.is_cylinder()) {
      if (b.cylinder().collapses_in_limit) {
        row["result"] = "holds";
        per_delta.push_back(row);
        if (!accepted) {
          accepted = delta;
          accepted_limit = true;
        }
        continue;
      }
      row["result"] = "fails";  // delta >= 1 on a shift: ball is the whole space
      auto other = sys.ball_candidates(x, delta, 8, seed, nullptr);
      for (auto& y : other)
        if (!sys.equal_points(x, y)) {
          last_witness = sys.encode_point(y);
          break;
        }
      last_fail_certified = true;
      per_delta.push_back(row);
      continue;
    }
    const auto& rep = b.explicit_rep();
    const PointValue* offender = nullptr;
    for (auto& y : rep.points)
      if (!sys.equal_points(x, y)) {
        offender = &y;
        break;
      }
    if (!offender) {
      row["result"] = "holds";
      per_delta.push_back(row);
      if (!accepted) {
        accepted = delta;
        accepted_limit = rep.exhaustive && sys.is_identity_map();
      }
      continue;
    }
    row["result"] = "fails";
    row["witness"] = sys.encode_point(*offender);
    last_witness = sys.encode_point(*offender);
    last_fail_certified = sys.is_identity_map();  // static balls: offender persists
    per_delta.push_back(row);
  }

  Verdict v = make_verdict("pointwise-expansivity", Outcome::Inconclusive, params);
  v.detail["per_delta"] = per_delta;
  v.exact = sys.metric_exact();
  if (accepted) {
    v.outcome = Outcome::Holds;
    v.limit_certified = accepted_limit;
    v.detail["delta_x"] = rat_to_string(*accepted);
  } else if (last_fail_certified) {
    v.outcome = Outcome::Fails;
    v.witness = last_witness;
  } else {
    v.outcome = Outcome::Inconclusive;
    if (!last_witness.is_null()) v.witness = last_witness;
  }
  return {accepted, v};
}

CardinalityResult n_expansive_cardinality(const System& sys, const PointValue& x,
                                          const Rat& delta, long long T, int budget,
                                          uint64_t seed) {
  if (delta <= 0) throw Error("PreconditionViolation", "delta must be positive");
  CardinalityResult res{CardinalityResult::Kind::LowerBound, 0, std::nullopt, json()};
  if (auto cert = sys.infinite_gamma_certificate(x, delta)) {
    res.kind = CardinalityResult::Kind::Infinite;
    res.certificate = *cert;
    return res;
  }
  auto b = gamma_ball(sys, x, delta,
                      sys.caps().invertible ? WindowSpec::two_sided(T)
                                            : WindowSpec::one_sided(T),
                      budget, seed);
  if (b.is_cylinder()) {
    if (b.cylinder().collapses_in_limit) {
      res.kind = CardinalityResult::Kind::Exact;
      res.count = 1;
      res.epsilon_x = delta;
      return res;
    }
    res.kind = CardinalityResult::Kind::Infinite;
    res.certificate["kind"] = "no_constraints";
    res.certificate["note"] = "delta is at least the diameter: no coordinate is constrained";
    return res;
  }
  const auto& rep = b.explicit_rep();
  res.kind = rep.exhaustive ? CardinalityResult::Kind::Exact
                            : CardinalityResult::Kind::LowerBound;
  res.count = static_cast<long long>(rep.points.size());
  std::optional<Rat> eps;
  for (auto& y : rep.points) {
    if (sys.equal_points(x, y)) continue;
    Rat d = sys.distance(x, y);
    if (!eps || d < *eps) eps = d;
  }
  res.epsilon_x = eps ? eps : std::optional<Rat>(delta);
  return res;
}

Verdict mu_generator_check(const System& sys, const std::vector<Region>& cover,
                           const PointValue& x, const MeasureModel& mu, long long T) {
  if (cover.empty()) throw Error("NotACover", "empty cover");
  if (cover.size() > 8) throw Error("BudgetExceeded", "covers larger than 8 elements rejected");
  if (T > 10) throw Error("BudgetExceeded", "mu-generator horizon capped at 10");
  if (!is_plain_shift(sys))
    throw Error("CapabilityMissing", "mu-generator cylinder algebra is shift-only");
  if (!sys.caps().invertible)
    throw Error("NonInvertible", "mu-generator needs the two-sided orbit");
  if (measure_alphabet(mu) != sys.alphabet_size())
    throw Error("MeasureSystemMismatch", "measure alphabet mismatch");

  // cover sanity check on sampled points
  auto pts = sys.sample(sys.whole_space(), 128, 17);
  for (auto& p : pts) {
    bool covered = false;
    for (auto& r : cover)
      if (region_contains_closed(sys, r, p)) covered = true;
    if (!covered)
      throw Error("NotACover", "sampled point " + sys.encode_point(p) + " lies in no element");
  }

  // constraint footprint of f^-n(closure U): cylinder shifted by +n; closed
  // balls widen to their forced-agreement cylinder
  auto element_constraints = [&](const Region& r) -> std::map<long long, char> {
    std::map<long long, char> cs;
    if (const auto* cy = std::get_if<CylinderRegion>(&r)) {
      for (size_t j = 0; j < cy->word.size(); ++j)
        cs[cy->start + (long long)j] = cy->word[j];
      return cs;
    }
    if (const auto* bl = std::get_if<BallRegion>(&r)) {
      int L = log2_ceil_inv(bl->radius);
      long long rad = L - 1;
      if (L == 0) return cs;  // whole space
      const BiSeq& c = as_biseq(bl->center);
      for (long long j = -rad; j <= rad; ++j) cs[j] = c.at(j);
      return cs;
    }
    throw Error("NotACover", "interval elements are not shift regions");
  };

  json params;
  params["T"] = T;
  params["cover_size"] = cover.size();

  // m_max(t) = largest measure over admissible constraint sequences at horizon t
  std::vector<Rat> m_max;
  json stalled_witness;
  for (long long t = 0; t <= T; ++t) {
    // admissible cover elements per time index
    std::vector<std::vector<size_t>> admissible;
    long long total = 1;
    for (long long n = -t; n <= t; ++n) {
      auto fx = sys.iterate(x, n);
      std::vector<size_t> idx;
      for (size_t e = 0; e < cover.size(); ++e)
        if (region_contains_closed(sys, cover[e], fx)) idx.push_back(e);
      if (idx.empty()) throw Error("NotACover", "orbit point lies in no closed element");
      admissible.push_back(std::move(idx));
      total *= static_cast<long long>(admissible.back().size());
      if (total > (1 << 16))
        throw Error("BudgetExceeded", "admissible bi-sequence space too large");
    }
    Rat best(-1);
    std::vector<size_t> best_choice;
    std::vector<size_t> choice(admissible.size(), 0);
    // enumerate the product of admissible elements
    while (true) {
      std::map<long long, char> merged;
      bool empty_set = false;
      for (size_t slot = 0; slot < admissible.size(); ++slot) {
        long long n = -t + static_cast<long long>(slot);
        auto cs = element_constraints(cover[admissible[slot][choice[slot]]]);
        for (auto& [j, c] : cs) {
          auto [it, inserted] = merged.emplace(j + n, c);
          if (!inserted && it->second != c) {
            empty_set = true;
            break;
          }
        }
        if (empty_set) break;
      }
      Rat meas = empty_set ? Rat(0) : cylinder_measure(mu, merged);
      if (meas > best) {
        best = meas;
        best_choice.assign(choice.begin(), choice.end());
      }
      size_t slot = 0;
      while (slot < choice.size() && ++choice[slot] == admissible[slot].size()) {
        choice[slot] = 0;
        ++slot;
      }
      if (slot == choice.size()) break;
    }
    m_max.push_back(best);
    if (t >= 1 && best == m_max[static_cast<size_t>(t - 1)] && best > 0) {
      json w;
      w["horizon"] = t;
      w["measure"] = rat_to_string(best);
      w["elements"] = best_choice;
      stalled_witness = w;
    }
  }

  Verdict v = make_verdict("mu-generator-check", Outcome::Inconclusive, params);
  v.exact = true;
  json table = json::array();
  for (size_t t = 0; t < m_max.size(); ++t)
    table.push_back({{"t", t}, {"m_max", rat_to_string(m_max[t])}});
  v.detail["max_measure_by_horizon"] = table;
  Rat last = m_max.back();
  if (last == 0) {
    v.outcome = Outcome::Holds;
    v.limit_certified = true;  // horizon sets only shrink
    return v;
  }
  if (T == 0) return v;  // inconclusive unless already zero
  bool strictly_decreasing = true;
  for (long long t = std::max<long long>(1, T / 2); t <= T; ++t)
    if (!(m_max[static_cast<size_t>(t)] < m_max[static_cast<size_t>(t - 1)]))
      strictly_decreasing = false;
  if (strictly_decreasing) {
    v.outcome = Outcome::Holds;
    return v;
  }
  v.outcome = Outcome::Fails;
  v.witness = stalled_witness;
  return v;
}

BallMeasure measure_of_ball(const System& sys, const MeasureModel& mu,
                            const DynamicalBall& b) {
  BallMeasure out;
  if (b.is_cylinder()) {
    if (std::holds_alternative<EmpiricalSampler>(mu))
      throw Error("MeasureSystemMismatch",
                  "cylinder balls need a Bernoulli or Markov measure");
    if (measure_alphabet(mu) != sys.alphabet_size())
      throw Error("MeasureSystemMismatch", "measure alphabet mismatch");
    Rat m = cylinder_measure(mu, b.cylinder().constraints);
    out.exact = m;
    out.estimate = rat_to_double(m);
    out.half_width_95 = 0;
    return out;
  }
  const auto* es = std::get_if<EmpiricalSampler>(&mu);
  if (!es)
    throw Error("MeasureSystemMismatch",
                "explicit-point balls are estimated with an EmpiricalSampler");
  auto pts = sys.sample(es->region, es->samples, es->seed);
  long long hits = 0;
  for (auto& p : pts)
    if (ball_contains(sys, b, p)) ++hits;
  out.estimate = static_cast<double>(hits) / static_cast<double>(pts.size());
  out.half_width_95 = wilson_half_width(hits, static_cast<long long>(pts.size()));
  return out;
}

Verdict converging_semiorbit_check(const System& sys, const PointValue& x, long long T,
                                   const Rat& tol) {
  json params;
  params["T"] = T;
  params["tol"] = rat_to_string(tol);
  Verdict v = make_verdict("converging-semiorbit", Outcome::Inconclusive, params);
  v.exact = sys.metric_exact();

  auto tail_diameter = [&](bool forward, long long from, json* witness) {
    // diameter of {f^(+-i)(x) : from <= i <= T}
    std::vector<PointValue> tail;
    PointValue p = sys.iterate(x, forward ? from : -from);
    tail.push_back(p);
    for (long long i = from + 1; i <= T; ++i) {
      p = sys.iterate(p, forward ? 1 : -1);
      tail.push_back(p);
    }
    Rat best(0);
    for (size_t a = 0; a < tail.size(); ++a)
      for (size_t c = a + 1; c < tail.size(); ++c) {
        Rat d = sys.distance(tail[a], tail[c]);
        if (d > best) {
          best = d;
          if (witness)
            *witness = {{"i", from + (long long)a},
                        {"j", from + (long long)c},
                        {"distance", rat_to_string(d)}};
        }
      }
    return best;
  };

  long long m = T / 2;
  json fwd_witness;
  Rat fwd = tail_diameter(true, m, &fwd_witness);
  if (fwd > tol) {
    v.outcome = Outcome::Fails;
    v.witness = {{"side", "omega"}, {"pair", fwd_witness}};
    return v;
  }
  if (!sys.caps().invertible) {
    // alpha side unverifiable; the omega side alone cannot certify "holds"
    v.detail["note"] = "omega tail settled; alpha side needs an invertible system";
    return v;
  }
  json bwd_witness;
  Rat bwd = tail_diameter(false, m, &bwd_witness);
  if (bwd > tol) {
    v.outcome = Outcome::Fails;
    v.witness = {{"side", "alpha"}, {"pair", bwd_witness}};
    return v;
  }
  // report minimal m achieving both
  long long m_min = m;
  while (m_min > 0 && tail_diameter(true, m_min - 1, nullptr) <= tol &&
         tail_diameter(false, m_min - 1, nullptr) <= tol)
    --m_min;
  v.outcome = Outcome::Holds;
  v.detail["m"] = m_min;
  v.detail["omega_representative"] = sys.encode_point(sys.iterate(x, T));
  v.detail["alpha_representative"] = sys.encode_point(sys.iterate(x, -T));
  return v;
}

Verdict converging_pair_membership(const System& sys, const PointValue& z, const PointValue& x,
                                   const PointValue& y, long long n, long long m, long long T) {
  if (!sys.caps().invertible) throw Error("NonInvertible", "A(x,y,n,m) needs f^-1");
  if (n < 1 || m < 0) throw Error("PreconditionViolation", "need n >= 1, m >= 0");
  json params;
  params["n"] = n;
  params["m"] = m;
  params["T"] = T;
  Verdict v = make_verdict("converging-pair-membership", Outcome::Holds, params);
  v.exact = sys.metric_exact();
  Rat bound(1, n);
  PointValue fz = sys.iterate(z, m), bz = sys.iterate(z, -m);
  for (long long i = m; i <= T; ++i) {
    if (i > m) {
      fz = sys.iterate(fz, 1);
      bz = sys.iterate(bz, -1);
    }
    Rat df = sys.distance(bz, x);  // d(f^-i z, x)
    Rat db = sys.distance(fz, y);  // d(f^i z, y)
    if (df > bound || db > bound) {
      v.outcome = Outcome::Fails;
      v.witness = {{"i", i},
                   {"d_backward", rat_to_string(df)},
                   {"d_forward", rat_to_string(db)}};
      return v;
    }
  }
  return v;
}

Verdict asymptotic_pair_check(const System& sys, const PointValue& y, const PointValue& p,
                              const PointValue& q, long long T, const Rat& tol) {
  if (!sys.caps().invertible) throw Error("NonInvertible", "asymptotic pairs need f^-1");
  json params;
  params["T"] = T;
  params["tol"] = rat_to_string(tol);
  Verdict v = make_verdict("asymptotic-pair", Outcome::Inconclusive, params);
  v.exact = sys.metric_exact();

  // forward deviations from p's orbit, backward deviations from q's orbit
  std::vector<Rat> fwd, bwd;
  PointValue fy = y, fp = p, by = y, bq = q;
  fwd.push_back(sys.distance(fy, fp));
  bwd.push_back(sys.distance(by, bq));
  for (long long i = 1; i <= T; ++i) {
    fy = sys.iterate(fy, 1);
    fp = sys.iterate(fp, 1);
    by = sys.iterate(by, -1);
    bq = sys.iterate(bq, -1);
    fwd.push_back(sys.distance(fy, fp));
    bwd.push_back(sys.distance(by, bq));
  }
  auto ok_from = [&](const std::vector<Rat>& dev, long long N) {
    for (long long i = N; i <= T; ++i)
      if (dev[static_cast<size_t>(i)] > tol) return false;
    return true;
  };
  for (long long N = 0; N <= T / 2; ++N) {
    if (ok_from(fwd, N) && ok_from(bwd, N)) {
      v.outcome = Outcome::Holds;
      v.detail["N"] = N;
      return v;
    }
  }
  // witness: the violation that blocks the largest admissible N
  long long N = T / 2;
  for (long long i = N; i <= T; ++i) {
    if (fwd[static_cast<size_t>(i)] > tol) {
      v.outcome = Outcome::Fails;
      v.witness = {{"side", "forward"}, {"i", i}, {"distance", rat_to_string(fwd[(size_t)i])}};
      return v;
    }
    if (bwd[static_cast<size_t>(i)] > tol) {
      v.outcome = Outcome::Fails;
      v.witness = {{"side", "backward"}, {"i", -i}, {"distance", rat_to_string(bwd[(size_t)i])}};
      return v;
    }
  }
  return v;
}

namespace {

Verdict local_set_membership(const System& sys, const PointValue& y, const PointValue& x,
                             const Rat& delta, long long T, bool stable) {
  if (!stable && !sys.caps().invertible)
    throw Error("NonInvertible", "local unstable sets need f^-1");
  json params;
  params["delta"] = rat_to_string(delta);
  params["T"] = T;
  Verdict v = make_verdict(stable ? "local-stable-membership" : "local-unstable-membership",
                           Outcome::Holds, params);
  v.exact = sys.metric_exact();
  PointValue fx = x, fy = y;
  for (long long i = 0; i <= T; ++i) {
    if (i > 0) {
      fx = sys.iterate(fx, stable ? 1 : -1);
      fy = sys.iterate(fy, stable ? 1 : -1);
    }
    Rat d = sys.distance(fx, fy);
    if (d > delta) {
      v.outcome = Outcome::Fails;
      v.witness = {{"i", stable ? i : -i}, {"distance", rat_to_string(d)}};
      return v;
    }
  }
  return v;
}

}  // namespace

Verdict local_stable_membership(const System& sys, const PointValue& y, const PointValue& x,
                                const Rat& delta, long long T) {
  return local_set_membership(sys, y, x, delta, T, true);
}

Verdict local_unstable_membership(const System& sys, const PointValue& y, const PointValue& x,
                                  const Rat& delta, long long T) {
  return local_set_membership(sys, y, x, delta, T, false);
}

Verdict sink_check(const System& sys, const PointValue& x, const Rat& delta, long long T,
                   int budget, uint64_t seed) {
  if (!sys.caps().invertible) throw Error("NonInvertible", "sinks are about unstable sets");
  json params;
  params["delta"] = rat_to_string(delta);
  params["T"] = T;
  params["budget"] = budget;
  params["seed"] = seed;
  Verdict v = make_verdict("sink-check", Outcome::Holds, params);
  v.exact = sys.metric_exact();
  bool exhaustive = false;
  auto cands = sys.ball_candidates(x, delta, budget, seed, &exhaustive);
  for (auto& y : cands) {
    if (sys.equal_points(x, y)) continue;
    if (local_unstable_membership(sys, y, x, delta, T).holds()) {
      v.outcome = Outcome::Fails;
      v.witness = sys.encode_point(y);
      return v;
    }
  }
  v.limit_certified = exhaustive && sys.is_identity_map();
  v.detail["candidates"] = cands.size();
  return v;
}

Verdict canonical_coordinates_check(const System& sys, const Rat& eps,
                                    const std::vector<Rat>& delta_grid, int pair_budget,
                                    long long T, uint64_t seed) {
  if (!sys.caps().invertible) throw Error("NonInvertible", "canonical coordinates need f^-1");
  if (delta_grid.empty()) throw Error("PreconditionViolation", "empty delta grid");
  json params;
  params["eps"] = rat_to_string(eps);
  params["T"] = T;
  params["pairs"] = pair_budget;
  params["seed"] = seed;
  Verdict v = make_verdict("canonical-coordinates", Outcome::Inconclusive, params);
  v.exact = sys.metric_exact();

  // Deterministic sweep over enumerable points first (covers accumulation
  // points of the 3.25 space), then seeded samples.
  std::vector<PointValue> anchors;
  if (sys.caps().enumerates_periodic) {
    try {
      for (auto& p : sys.periodic_points(1)) {
        anchors.push_back(p);
        if ((int)anchors.size() >= pair_budget) break;
      }
    } catch (const Error&) {
    }
  }

  for (const Rat& delta : delta_grid) {
    bool all_ok = true;
    bool certified_fail = false;
    json fail_witness;
    for (int i = 0; i < pair_budget; ++i) {
      uint64_t s = shard_seed(seed, static_cast<uint64_t>(i));
      PointValue a = i < (int)anchors.size() ? anchors[static_cast<size_t>(i)]
                                             : sys.sample(sys.whole_space(), 1, s)[0];
      PointValue b;
      try {
        // most demanding sampled partner: the farthest one inside delta
        auto partners = sys.sample(ball(a, delta, true), 8, shard_seed(s, 1));
        b = partners[0];
        Rat best(-1);
        for (auto& cand : partners) {
          Rat d = sys.distance(a, cand);
          if (d < delta && d > best) {
            best = d;
            b = cand;
          }
        }
      } catch (const Error&) {
        continue;  // no partner within delta: vacuous pair
      }
      if (sys.distance(a, b) >= delta) continue;

      bool found = false;
      if (is_plain_shift(sys) && std::holds_alternative<BiSeq>(a)) {
        // exact intersection point: future of a, past of b
        const BiSeq& xa = as_biseq(a);
        const BiSeq& xb = as_biseq(b);
        BiSeq z = xa;
        long long lo = std::min({xb.offset, xa.offset, 0LL}) - 1;
        long long hi = std::max(0LL, xa.offset + (long long)xa.core.size());
        z.ensure_core_covers(lo, hi);
        for (long long n = lo; n < 0; ++n) z.set_symbol(n, xb.at(n));
        z.left = xb.window(lo - (long long)xb.left.size(), lo - 1);
        if (local_stable_membership(sys, pv(z), a, eps, T).holds() &&
            local_unstable_membership(sys, pv(z), b, eps, T).holds())
          found = true;
      }
      if (!found) {
        bool exhaustive = false;
        auto cands = sys.ball_candidates(a, eps, 128, shard_seed(s, 2), &exhaustive);
        auto more = sys.ball_candidates(b, eps, 128, shard_seed(s, 3), nullptr);
        cands.insert(cands.end(), more.begin(), more.end());
        for (auto& z : cands) {
          if (local_stable_membership(sys, z, a, eps, T).holds() &&
              local_unstable_membership(sys, z, b, eps, T).holds()) {
            found = true;
            break;
          }
        }
        bool triangle_empty = sys.is_identity_map() && sys.distance(a, b) > eps * 2;
        if (!found && (triangle_empty || (exhaustive && sys.is_identity_map()))) {
          // identity map: the local sets are static eps-balls, and
          // d(a,b) > 2 eps makes their intersection empty outright
          certified_fail = true;
          fail_witness = {{"x", sys.encode_point(a)},
                          {"y", sys.encode_point(b)},
                          {"distance", rat_to_string(sys.distance(a, b))}};
        }
      }
      if (!found) {
        all_ok = false;
        if (!certified_fail)
          fail_witness = {{"x", sys.encode_point(a)}, {"y", sys.encode_point(b)}};
        break;
      }
    }
    if (all_ok) {
      v.outcome = Outcome::Holds;
      v.detail["delta"] = rat_to_string(delta);
      return v;
    }
    if (certified_fail) {
      v.outcome = Outcome::Fails;
      v.witness = fail_witness;
      v.detail["delta"] = rat_to_string(delta);
      return v;
    }
    v.witness = fail_witness;
  }
  return v;
}

Verdict periodic_restriction_expansivity(const System& sys, const std::vector<Rat>& delta_grid,
                                         long long period_bound, long long T) {
  if (!sys.caps().enumerates_periodic)
    throw Error("CapabilityMissing", "needs periodic-point enumeration");
  if (delta_grid.empty()) throw Error("PreconditionViolation", "empty delta grid");
  json params;
  params["period_bound"] = period_bound;
  params["T"] = T;

  struct Entry {
    PointValue p;
    long long period;
  };
  std::vector<Entry> pts;
  auto known = [&](const PointValue& p) {
    for (auto& e : pts)
      if (sys.equal_points(e.p, p)) return true;
    return false;
  };
  for (long long m = 1; m <= period_bound; ++m)
    for (auto& p : sys.periodic_points(m))
      if (!known(p)) pts.push_back({p, m});
  if (pts.size() > 700) throw Error("BudgetExceeded", "too many periodic points to compare");

  Verdict v = make_verdict("periodic-restriction-expansivity", Outcome::Holds, params);
  v.exact = sys.metric_exact();
  v.limit_certified = true;  // lcm windows decide the full orbit exactly
  Rat delta_min = delta_grid.back();

  for (size_t a = 0; a < pts.size(); ++a) {
    // delta_p must separate p from every other enumerated periodic point
    Rat needed(0);
    const Entry* blocker = nullptr;
    for (size_t b = 0; b < pts.size(); ++b) {
      if (a == b) continue;
      long long l = std::lcm(pts[a].period, pts[b].period);
      long long window = std::min<long long>(std::max(l, T), 1024);
      Rat stop = delta_min;
      Rat sup = window_orbit_max(sys, pts[a].p, pts[b].p,
                                 WindowSpec::one_sided(window), &stop);
      // invertible systems: also look back when periods do not cover
      if (sup <= delta_min && sys.caps().invertible)
        sup = window_orbit_max(sys, pts[a].p, pts[b].p, WindowSpec::two_sided(window), &stop);
      if (sup <= delta_min) {
        blocker = &pts[b];
        break;
      }
    }
    if (blocker) {
      v.outcome = Outcome::Fails;
      v.witness = {{"p", sys.encode_point(pts[a].p)},
                   {"q", sys.encode_point(blocker->p)},
                   {"note", "orbit distance never exceeds the smallest grid delta"}};
      return v;
    }
  }
  v.detail["points_checked"] = pts.size();
  return v;
}

}  // namespace pdyn
