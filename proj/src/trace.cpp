#include "pdyn/trace.hpp"

#include "pdyn/rng.hpp"

#include "interval_ops.hpp"

#include <algorithm>

namespace pdyn {

namespace {

using ival::RInt;
using ival::intersect;
using ival::preimage_once;
using ival::has_interval_preimages;
using ival::dyadic_floor;
using ival::dyadic_ceil;
using ival::kClampBits;

// --- strategies ---------------------------------------------------------

std::optional<PointValue> splice_tracer(const PseudoOrbit& po) {
  const auto* first = std::get_if<BiSeq>(&po.points.front());
  if (first) {
    const long long L = static_cast<long long>(po.points.size());
    const BiSeq& last = as_biseq(po.points.back());
    // context must reach past the final point's core so the appended right
    // period reads from its periodic tail
    const long long C =
        std::max<long long>(12, last.offset + (long long)last.core.size() + 1);
    BiSeq z = *first;
    z.ensure_core_covers(-C, L - 1 + C);
    for (long long i = 0; i < L; ++i) z.set_symbol(i, as_biseq(po.points[(size_t)i]).at(0));
    // continue the final point's future beyond the written stretch
    for (long long n = L; n <= L - 1 + C; ++n) z.set_symbol(n, last.at(n - (L - 1)));
    z.right = last.window(C + 1, C + (long long)last.right.size());
    return pv(z);
  }
  if (const auto* f1 = std::get_if<OneSeq>(&po.points.front())) {
    const long long L = static_cast<long long>(po.points.size());
    const OneSeq& last = as_oneseq(po.points.back());
    const long long C = std::max<long long>(12, (long long)last.core.size() + 1);
    OneSeq z = *f1;
    z.ensure_core_covers(L - 1 + C);
    for (long long i = 0; i < L; ++i) z.set_symbol(i, as_oneseq(po.points[(size_t)i]).at(0));
    for (long long n = L; n <= L - 1 + C; ++n) z.set_symbol(n, last.at(n - (L - 1)));
    z.tail = last.window(C + 1, C + (long long)last.tail.size());
    return pv(z);
  }
  return std::nullopt;
}

std::optional<PointValue> circle_digit_tracer(const System& sys, const PseudoOrbit& po) {
  if (sys.id() != "doubling-circle") return std::nullopt;
  // backward fold: t_i = (b_i + t_{i+1}) / 2 reproduces the digit stream
  Rat t = as_scalar(po.points.back()).value;
  for (size_t i = po.points.size() - 1; i-- > 0;) {
    int b = as_scalar(po.points[i]).value >= Rat(1, 2) ? 1 : 0;
    t = (Rat(b) + t) / 2;
  }
  return pv_scalar(t, true);
}

std::optional<PointValue> interval_chain_tracer(const System& sys, const PseudoOrbit& po,
                                                const Rat& eps) {
  if (!has_interval_preimages(sys)) return std::nullopt;
  Rat slack = eps - eps / 64;  // strict inequality headroom
  const long long L = static_cast<long long>(po.points.size());
  std::vector<RInt> layer{{as_scalar(po.points[(size_t)L - 1]).value - slack,
                           as_scalar(po.points[(size_t)L - 1]).value + slack}};
  for (long long i = L - 2; i >= 0; --i) {
    std::vector<RInt> pulled;
    for (auto& iv : layer)
      for (auto& p : preimage_once(sys, iv, /*inner=*/true)) pulled.push_back(p);
    const Rat& c = as_scalar(po.points[(size_t)i]).value;
    RInt target{c - slack, c + slack};
    std::vector<RInt> next;
    for (auto& p : pulled) {
      RInt cut = intersect(p, target);
      if (!cut.empty()) next.push_back(cut);
    }
    if (next.size() > 64) next.resize(64);
    if (next.empty()) return std::nullopt;
    layer = std::move(next);
  }
  Rat mid = (layer[0].lo + layer[0].hi) / 2;
  Rat rounded = dyadic_floor(mid, 200);
  return pv_scalar(rounded >= layer[0].lo ? rounded : mid, true);
}

// Outward variant proving that no point eps-traces the pseudo-orbit.
std::optional<json> interval_chain_refutation(const System& sys, const PseudoOrbit& po,
                                              const Rat& eps) {
  if (!has_interval_preimages(sys)) return std::nullopt;
  const long long L = static_cast<long long>(po.points.size());
  std::vector<RInt> layer{{as_scalar(po.points[(size_t)L - 1]).value - eps,
                           as_scalar(po.points[(size_t)L - 1]).value + eps}};
  json steps = json::array();
  for (long long i = L - 2; i >= 0; --i) {
    std::vector<RInt> pulled;
    for (auto& iv : layer)
      for (auto& p : preimage_once(sys, iv, /*inner=*/false)) pulled.push_back(p);
    const Rat& c = as_scalar(po.points[(size_t)i]).value;
    RInt target{c - eps, c + eps};
    std::vector<RInt> next;
    for (auto& p : pulled) {
      RInt cut = intersect(p, target);
      if (!cut.empty()) next.push_back(cut);
    }
    if (next.size() > 64) return std::nullopt;  // refutation bookkeeping overflow
    json row;
    row["index"] = i;
    row["pieces"] = next.size();
    steps.push_back(row);
    if (next.empty()) {
      json cert;
      cert["kind"] = "empty_preimage_chain";
      cert["eps"] = rat_to_string(eps);
      cert["empty_at_index"] = i;
      cert["note"] = "outward-rounded backward chain has no admissible point";
      cert["steps"] = steps;
      return cert;
    }
    layer = std::move(next);
  }
  return std::nullopt;  // chain stayed nonempty: no refutation
}

}  // namespace

std::optional<Rat> verified_orbit_error(const System& sys, const PointValue& tracer,
                                        const std::vector<PointValue>& targets,
                                        const Rat& epsilon) {
  const std::string id = sys.id();
  if (id == "squaring" || id == "tent") {
    // exact orbits blow up in bit size: verify with clamped outward interval
    // arithmetic instead
    Rat t = as_scalar(tracer).value;
    RInt iv{dyadic_floor(t, kClampBits), dyadic_ceil(t, kClampBits)};
    Rat worst(0);
    for (size_t i = 0; i < targets.size(); ++i) {
      if (i > 0) {
        auto im = sys.interval_image({iv.lo, iv.hi}, 1);
        // images of a point interval stay connected on these maps
        iv = {dyadic_floor(im.front().lo, kClampBits), dyadic_ceil(im.back().hi, kClampBits)};
      }
      const Rat& c = as_scalar(targets[i]).value;
      Rat err = std::max(Rat(abs(iv.lo - c)), Rat(abs(iv.hi - c)));
      if (err > worst) worst = err;
      if (worst >= epsilon) return std::nullopt;
    }
    return worst;
  }
  // exact orbit evaluation everywhere else
  PointValue cur = tracer;
  Rat worst(0);
  for (size_t i = 0; i < targets.size(); ++i) {
    if (i > 0) cur = sys.iterate(cur, 1);
    Rat err = sys.distance(cur, targets[i]);
    if (err > worst) worst = err;
    if (worst >= epsilon) return std::nullopt;
  }
  return worst;
}

TraceOutcome trace(const System& sys, const PseudoOrbit& po, const Rat& epsilon,
                   uint64_t seed) {
  if (epsilon <= 0) throw Error("PreconditionViolation", "epsilon must be positive");

  auto accept = [&](const PointValue& tracer, const char* strategy)
      -> std::optional<TraceResult> {
    auto err = verified_orbit_error(sys, tracer, po.points, epsilon);
    if (!err) return std::nullopt;
    TraceResult r;
    r.tracer = tracer;
    r.max_error = *err;
    r.strategy = strategy;
    r.exact = sys.metric_exact();
    return r;
  };

  // (a) a true orbit traces itself
  bool true_orbit = true;
  {
    PointValue cur = po.points.front();
    for (size_t i = 1; i < po.points.size() && true_orbit; ++i) {
      cur = sys.iterate(cur, 1);
      if (!sys.equal_points(cur, po.points[i])) true_orbit = false;
    }
  }
  if (true_orbit) {
    if (auto r = accept(po.points.front(), "exact_orbit")) return *r;
  }

  // (b) symbolic splice on shifts
  if (sys.caps().exact_symbolic && sys.alphabet_size() > 0) {
    if (auto z = splice_tracer(po)) {
      if (auto r = accept(*z, "symbolic_splice")) return *r;
    }
  }

  // (c) circle digit reconstruction
  if (auto z = circle_digit_tracer(sys, po)) {
    if (auto r = accept(*z, "circle_digits")) return *r;
  }

  // (d) backward preimage interval chain
  if (auto z = interval_chain_tracer(sys, po, epsilon)) {
    if (auto r = accept(*z, "interval_chain")) return *r;
  }

  // (e) seeded candidate search
  TraceFailure fail;
  try {
    auto cands = sys.sample(ball(po.points.front(), epsilon, true), 128, seed);
    cands.push_back(po.points.front());
    for (auto& cand : cands) {
      if (auto r = accept(cand, "search")) return *r;
      // track the least-bad candidate by plain orbit error where computable
      PointValue cur = cand;
      Rat worst(0);
      bool measurable = true;
      for (size_t i = 0; i < po.points.size(); ++i) {
        if (i > 0) {
          try {
            cur = sys.iterate(cur, 1);
          } catch (const Error&) {
            measurable = false;
            break;
          }
        }
        worst = std::max(worst, sys.distance(cur, po.points[i]));
      }
      if (measurable && (fail.best_error < 0 || worst < fail.best_error)) {
        fail.best_error = worst;
        fail.best_candidate = cand;
      }
    }
  } catch (const Error&) {
    // sampling unavailable in this region; fall through to refutation
  }

  if (auto cert = interval_chain_refutation(sys, po, epsilon)) {
    fail.certified = true;
    fail.certificate = *cert;
  }
  return fail;
}

Verdict shadowable_point_verdict(const System& sys, const PointValue& x, const Rat& epsilon,
                                 const std::vector<Rat>& delta_grid, int trials, int length,
                                 uint64_t seed) {
  if (delta_grid.empty()) throw Error("PreconditionViolation", "empty delta grid");
  json params;
  params["epsilon"] = rat_to_string(epsilon);
  params["trials"] = trials;
  params["length"] = length;
  params["seed"] = seed;
  Verdict v = make_verdict("shadowable-point", Outcome::Inconclusive, params);
  v.exact = sys.metric_exact();

  json attempts = json::array();
  for (const Rat& delta : delta_grid) {
    if (delta >= epsilon) continue;  // tracing would be vacuous evidence
    bool all_traced = true;
    json row;
    row["delta"] = rat_to_string(delta);
    for (int t = 0; t < trials && all_traced; ++t) {
      auto po = perturbed_orbit(sys, x, delta, length, shard_seed(seed, (uint64_t)t));
      auto out = trace(sys, po, epsilon, shard_seed(seed, 0x100 + (uint64_t)t));
      if (!trace_succeeded(out)) {
        all_traced = false;
        const auto& f = std::get<TraceFailure>(out);
        row["failed_trial"] = t;
        if (f.certified) {
          // a certified untraceable delta-pseudo-orbit through x refutes
          // shadowability at this (eps, delta)
          v.witness = json{{"delta", rat_to_string(delta)},
                           {"trial", t},
                           {"certificate", f.certificate}};
          row["certified"] = true;
        }
      }
    }
    attempts.push_back(row);
    if (all_traced) {
      v.outcome = Outcome::Holds;
      v.detail["delta"] = rat_to_string(delta);
      v.detail["attempts"] = attempts;
      return v;
    }
  }
  v.detail["attempts"] = attempts;
  // failure to trace every sampled pseudo-orbit at every grid delta is only
  // a refutation when the last failure carried a certificate
  if (!v.witness.is_null()) v.outcome = Outcome::Fails;
  return v;
}

}  // namespace pdyn
