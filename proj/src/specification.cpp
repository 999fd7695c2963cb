#include "pdyn/specification.hpp"

#include "interval_ops.hpp"
#include "pdyn/rng.hpp"

#include <algorithm>
#include <map>

namespace pdyn {

namespace {

using ival::RInt;

bool is_two_sided_shift(const System& sys) {
  return sys.caps().exact_symbolic && sys.alphabet_size() > 0 && sys.caps().invertible;
}

long long last_time(const SpecSegments& spec) { return spec.segments.back().b; }

// per-index target windows [lo_i, hi_i] enclosing f^i(x_j) at each
// constrained index, computed by a clamped forward walk per segment
std::map<long long, RInt> target_windows(const System& sys, const SpecSegments& spec) {
  std::map<long long, RInt> out;
  for (auto& seg : spec.segments) {
    Rat v = as_scalar(seg.x).value;
    RInt iv{ival::dyadic_floor(v, ival::kClampBits), ival::dyadic_ceil(v, ival::kClampBits)};
    for (long long i = 1; i <= seg.b; ++i) {
      iv = ival::image_once_clamped(sys, iv);
      if (i >= seg.a) out[i] = iv;
    }
    if (seg.a == 0) out[0] = {v, v};
  }
  return out;
}

}  // namespace

void validate_spec(const System& sys, const SpecSegments& spec, const PointValue* through) {
  if (spec.segments.empty()) throw Error("PreconditionViolation", "no segments");
  if (spec.epsilon <= 0) throw Error("PreconditionViolation", "epsilon must be positive");
  if (spec.gap_M < 1) throw Error("PreconditionViolation", "gap M must be >= 1");
  long long prev_b = -1;
  bool first = true;
  for (auto& seg : spec.segments) {
    if (seg.a < 0 || seg.b < seg.a)
      throw Error("PreconditionViolation", "segment times must satisfy 0 <= a_j <= b_j");
    if (!first && seg.a - prev_b < spec.gap_M)
      throw Error("PreconditionViolation", "segment gap below M");
    if (!first && seg.a <= prev_b)
      throw Error("PreconditionViolation", "segments must be strictly ordered");
    if (!sys.in_domain(seg.x)) throw Error("DomainViolation", "segment point outside domain");
    prev_b = seg.b;
    first = false;
  }
  if (through && !sys.equal_points(spec.segments.front().x, *through))
    throw Error("PreconditionViolation", "specification request is not through x");
}

std::vector<std::pair<long long, PointValue>> spec_targets(const System& sys,
                                                           const SpecSegments& spec) {
  std::vector<std::pair<long long, PointValue>> out;
  for (auto& seg : spec.segments) {
    PointValue cur = sys.iterate(seg.x, seg.a);
    for (long long i = seg.a; i <= seg.b; ++i) {
      if (i > seg.a) cur = sys.iterate(cur, 1);
      out.emplace_back(i, cur);
    }
  }
  return out;
}

std::optional<Rat> verified_spec_error(const System& sys, const PointValue& tracer,
                                       const SpecSegments& spec) {
  const Rat& eps = spec.epsilon;
  const std::string id = sys.id();
  if (id == "squaring" || id == "tent") {
    auto targets = target_windows(sys, spec);
    Rat t = as_scalar(tracer).value;
    RInt iv{ival::dyadic_floor(t, ival::kClampBits), ival::dyadic_ceil(t, ival::kClampBits)};
    Rat worst(0);
    for (long long i = 0; i <= last_time(spec); ++i) {
      if (i > 0) iv = ival::image_once_clamped(sys, iv);
      auto it = targets.find(i);
      if (it == targets.end()) continue;
      Rat err = std::max(Rat(iv.hi - it->second.lo), Rat(it->second.hi - iv.lo));
      if (err > worst) worst = err;
      if (worst >= eps) return std::nullopt;
    }
    return worst;
  }
  PointValue cur = tracer;
  std::map<long long, std::vector<PointValue>> expect;
  for (auto& [i, p] : spec_targets(sys, spec)) expect[i].push_back(p);
  Rat worst(0);
  for (long long i = 0; i <= last_time(spec); ++i) {
    if (i > 0) cur = sys.iterate(cur, 1);
    auto it = expect.find(i);
    if (it == expect.end()) continue;
    for (auto& p : it->second) {
      Rat err = sys.distance(cur, p);
      if (err > worst) worst = err;
      if (worst >= eps) return std::nullopt;
    }
  }
  return worst;
}

TraceOutcome specification_trace_symbolic(const System& sys, const SpecSegments& spec,
                                          bool periodic) {
  validate_spec(sys, spec);
  if (!is_two_sided_shift(sys))
    throw Error("TracerUnavailable", "symbolic tracing needs a two-sided full shift");
  const int R = strict_agreement_radius(spec.epsilon);
  if (spec.gap_M < 2 * R + 1)
    throw Error("WindowOverlap", "gap M must be at least 2R+1 = " + std::to_string(2 * R + 1));

  std::optional<long long> period;
  BiSeq z;
  if (!periodic) {
    z = BiSeq::constant('0');
    for (auto& seg : spec.segments) {
      const BiSeq& xs = as_biseq(seg.x);
      for (long long n = seg.a - R; n <= seg.b + R; ++n) z.set_symbol(n, xs.at(n));
    }
  } else {
    long long P = last_time(spec) + spec.gap_M;
    std::string word(static_cast<size_t>(P), '0');
    for (auto& seg : spec.segments) {
      const BiSeq& xs = as_biseq(seg.x);
      for (long long n = seg.a - R; n <= seg.b + R; ++n) {
        long long m = ((n % P) + P) % P;
        word[static_cast<size_t>(m)] = xs.at(n);
      }
    }
    z = BiSeq::periodic(word);
    period = P;
  }

  auto err = verified_spec_error(sys, pv(z), spec);
  if (!err) {
    TraceFailure f;
    f.best_candidate = pv(z);
    return f;
  }
  TraceResult res;
  res.tracer = pv(z);
  res.max_error = *err;
  res.period = period;
  res.strategy = periodic ? "symbolic_periodic" : "symbolic";
  res.exact = true;
  if (period) {
    // periodicity is exact by construction; assert it anyway
    if (!sys.equal_points(sys.iterate(res.tracer, *period), res.tracer))
      throw Error("PreconditionViolation", "periodic tracer failed its own period check");
  }
  return res;
}

namespace {

// connector inside B(start, bound) whose g-th image lands in B(goal, bound);
// certified=empty means provably no such point at these bounds
struct ConnectorSearch {
  std::optional<PointValue> point;
  bool refuted = false;
  json certificate;
};

ConnectorSearch find_connector(const System& sys, const PointValue& start,
                               const PointValue& goal, long long g, const Rat& bound) {
  ConnectorSearch out;
  if (is_two_sided_shift(sys)) {
    const BiSeq& s = as_biseq(start);
    const BiSeq& t = as_biseq(goal);
    const long long W = strict_agreement_radius(bound);
    if (g < 2 * W + 1) return out;  // windows collide; caller raises GapTooSmall
    BiSeq y = BiSeq::constant('0');
    for (long long n = -W; n <= W; ++n) y.set_symbol(n, s.at(n));
    for (long long n = g - W; n <= g + W; ++n) y.set_symbol(n, t.at(n - g));
    out.point = pv(y);
    return out;
  }
  if (ival::has_interval_preimages(sys)) {
    Rat vs = as_scalar(start).value;
    Rat vt = as_scalar(goal).value;
    Rat inner_bound = bound - bound / 64;
    // inner chain: start ball intersected with g inner preimages of the goal ball
    std::vector<RInt> layer{{vt - inner_bound, vt + inner_bound}};
    for (long long i = 0; i < g && !layer.empty(); ++i) {
      std::vector<RInt> next;
      for (auto& iv : layer)
        for (auto& p : ival::preimage_once(sys, iv, true))
          if (!p.empty()) next.push_back(p);
      if (next.size() > 64) next.resize(64);
      layer = std::move(next);
    }
    RInt sball{vs - inner_bound, vs + inner_bound};
    for (auto& iv : layer) {
      RInt cut = ival::intersect(iv, sball);
      if (!cut.empty()) {
        out.point = pv_scalar((cut.lo + cut.hi) / 2, true);
        return out;
      }
    }
    // outer chain for a refutation
    std::vector<RInt> outer{{vt - bound, vt + bound}};
    for (long long i = 0; i < g && !outer.empty(); ++i) {
      std::vector<RInt> next;
      for (auto& iv : outer)
        for (auto& p : ival::preimage_once(sys, iv, false))
          if (!p.empty()) next.push_back(p);
      if (next.size() > 64) return out;  // bookkeeping overflow: inconclusive
      outer = std::move(next);
    }
    RInt oball{vs - bound, vs + bound};
    bool any = false;
    for (auto& iv : outer)
      if (!ival::intersect(iv, oball).empty()) any = true;
    if (!any) {
      out.refuted = true;
      out.certificate["kind"] = "connector_not_found";
      out.certificate["gap"] = g;
      out.certificate["bound"] = rat_to_string(bound);
      out.certificate["start"] = sys.encode_point(start);
      out.certificate["goal"] = sys.encode_point(goal);
      out.certificate["note"] =
          "outward preimage chain of the goal ball misses the start ball";
    }
    return out;
  }
  return out;
}

}  // namespace

TraceOutcome specification_trace_glued(const System& sys, const PointValue& x,
                                       const SpecSegments& spec, uint64_t seed) {
  validate_spec(sys, spec, &x);
  const Rat& eps = spec.epsilon;
  Rat delta = eps / 4;
  Rat half = delta / 2;

  // connector gap requirement for the constructive search
  long long min_gap = 2;
  if (is_two_sided_shift(sys)) min_gap = 2 * strict_agreement_radius(half) + 2;
  if (spec.gap_M < min_gap)
    throw Error("GapTooSmall",
                "gap M below the net transition bound " + std::to_string(min_gap));

  // assemble the case-split sequence v_i on [0, b_k]
  std::vector<PointValue> v(static_cast<size_t>(last_time(spec)) + 1, x);
  // head: orbit of x up to a_1, then orbit pieces
  {
    PointValue cur = x;
    long long head_end = spec.segments.front().a;
    for (long long i = 0; i < head_end; ++i) {
      v[static_cast<size_t>(i)] = cur;
      cur = sys.iterate(cur, 1);
    }
  }
  for (auto& seg : spec.segments) {
    PointValue cur = sys.iterate(seg.x, seg.a);
    for (long long i = seg.a; i <= seg.b; ++i) {
      v[static_cast<size_t>(i)] = cur;
      if (i < seg.b) cur = sys.iterate(cur, 1);
    }
  }
  for (size_t j = 0; j + 1 < spec.segments.size(); ++j) {
    const auto& cur_seg = spec.segments[j];
    const auto& next_seg = spec.segments[j + 1];
    long long g = next_seg.a - cur_seg.b - 1;  // connector slots
    PointValue start = sys.iterate(cur_seg.x, cur_seg.b + 1);
    PointValue goal = sys.iterate(next_seg.x, next_seg.a);
    if (g == 0) {
      // adjacent pieces: the pseudo-orbit step d(f(v_{b_j}), v_{a_{j+1}})
      // must already be < delta; re-validated below
      continue;
    }
    auto conn = find_connector(sys, start, goal, g, half);
    if (!conn.point) {
      // refutes only this construction, never the existence of a tracer
      TraceFailure f;
      f.certified = false;
      f.certificate = conn.certificate;
      return f;
    }
    PointValue cur = *conn.point;
    for (long long s = 0; s < g; ++s) {
      v[static_cast<size_t>(cur_seg.b + 1 + s)] = cur;
      cur = sys.iterate(cur, 1);
    }
  }

  PseudoOrbit po;
  try {
    po = make_pseudo_orbit(sys, delta, std::move(v));
  } catch (const Error&) {
    TraceFailure f;
    f.certificate["kind"] = "glued_sequence_not_pseudo_orbit";
    return f;
  }
  auto traced = trace(sys, po, eps / 2, seed);
  if (!trace_succeeded(traced)) {
    auto f = std::get<TraceFailure>(traced);
    // an untraceable glued pseudo-orbit is not itself a certificate that no
    // specification tracer exists
    f.certified = false;
    return f;
  }
  auto res = std::get<TraceResult>(traced);
  auto err = verified_spec_error(sys, res.tracer, spec);
  if (!err) {
    TraceFailure f;
    f.best_candidate = res.tracer;
    return f;
  }
  res.max_error = *err;
  res.strategy = "glued";
  return res;
}

std::vector<SpecSegments> default_battery(const System& sys, const PointValue& x,
                                          const Rat& epsilon, long long M, int count,
                                          long long horizon, uint64_t seed) {
  // deterministic far points: the sampled points most distant from x
  auto pool = sys.sample(sys.whole_space(), 12, shard_seed(seed, 9));
  std::sort(pool.begin(), pool.end(), [&](const PointValue& a, const PointValue& b) {
    return sys.distance(x, a) > sys.distance(x, b);
  });
  std::vector<PointValue> far;
  for (auto& p : pool)
    if (sys.distance(x, p) > epsilon * 2) far.push_back(p);
  if (far.empty()) far.push_back(pool.front());

  auto far_at = [&](size_t i) { return far[i % far.size()]; };
  std::vector<SpecSegments> battery;
  auto add = [&](std::vector<SpecSegments::Segment> segs) {
    if ((int)battery.size() >= count) return;
    if (segs.back().b > horizon) return;
    SpecSegments s;
    s.segments = std::move(segs);
    s.gap_M = M;
    s.epsilon = epsilon;
    battery.push_back(std::move(s));
  };

  add({{0, std::min<long long>(4, horizon), x}});
  add({{0, 1, x}, {1 + M, 2 + M, far_at(0)}});
  // far point then return to x: the template that separates mixing-like
  // systems from monotone ones
  add({{0, 0, x}, {M, M, far_at(0)}, {2 * M, 2 * M, x}});
  add({{0, 2, x}, {2 + M, 4 + M, far_at(1)}});
  add({{0, 0, x}, {M, M + 1, far_at(1)}, {2 * M + 1, 2 * M + 2, far_at(2)}});
  SplitMix64 rng(shard_seed(seed, 77));
  while ((int)battery.size() < count) {
    long long b1 = static_cast<long long>(rng.below(3));
    long long a2 = b1 + M + static_cast<long long>(rng.below(3));
    long long b2 = a2 + static_cast<long long>(rng.below(3));
    add({{0, b1, x}, {a2, b2, far_at(rng.below(16))}});
    if (battery.empty()) break;  // horizon too small for anything
  }
  return battery;
}

namespace {

// inner windows: points certainly within eps of every enclosed target value
RInt allowed_inner(const RInt& target, const Rat& eps) {
  Rat slack = eps - eps / 64;
  return {target.hi - slack, target.lo + slack};
}

RInt allowed_outer(const RInt& target, const Rat& eps) {
  return {target.lo - eps, target.hi + eps};
}

// Exhibits a tracer by a backward inner-preimage sweep over the constrained
// indices (exact interval maps only).
std::optional<PointValue> spec_interval_tracer(const System& sys, const SpecSegments& spec) {
  if (!ival::has_interval_preimages(sys)) return std::nullopt;
  auto tw = target_windows(sys, spec);
  long long last = last_time(spec);
  std::vector<RInt> layer{allowed_inner(tw.at(last), spec.epsilon)};
  for (long long i = last - 1; i >= 0; --i) {
    std::vector<RInt> next;
    for (auto& iv : layer)
      for (auto& p : ival::preimage_once(sys, iv, true))
        if (!p.empty()) next.push_back(p);
    if (next.size() > 64) next.resize(64);
    auto it = tw.find(i);
    if (it != tw.end()) {
      RInt win = allowed_inner(it->second, spec.epsilon);
      std::vector<RInt> cut;
      for (auto& iv : next) {
        RInt c = ival::intersect(iv, win);
        if (!c.empty()) cut.push_back(c);
      }
      next = std::move(cut);
    }
    if (next.empty()) return std::nullopt;
    layer = std::move(next);
  }
  for (auto& iv : layer) {
    RInt dom = ival::intersect(iv, {Rat(0), iv.hi});  // state sets live in [0, inf)
    if (dom.empty()) continue;
    return pv_scalar((dom.lo + dom.hi) / 2, true);
  }
  return std::nullopt;
}

// Proves that no point eps-traces the request: outward backward sweep.
std::optional<json> spec_refutation(const System& sys, const SpecSegments& spec) {
  if (!ival::has_interval_preimages(sys)) return std::nullopt;
  auto tw = target_windows(sys, spec);
  long long last = last_time(spec);
  std::vector<RInt> layer{allowed_outer(tw.at(last), spec.epsilon)};
  for (long long i = last - 1; i >= 0; --i) {
    std::vector<RInt> next;
    for (auto& iv : layer)
      for (auto& p : ival::preimage_once(sys, iv, false))
        if (!p.empty()) next.push_back(p);
    if (next.size() > 64) return std::nullopt;  // bookkeeping overflow
    auto it = tw.find(i);
    if (it != tw.end()) {
      RInt win = allowed_outer(it->second, spec.epsilon);
      std::vector<RInt> cut;
      for (auto& iv : next) {
        RInt c = ival::intersect(iv, win);
        if (!c.empty()) cut.push_back(c);
      }
      next = std::move(cut);
    }
    if (next.empty()) {
      json cert;
      cert["kind"] = "empty_spec_chain";
      cert["eps"] = rat_to_string(spec.epsilon);
      cert["empty_at_index"] = i;
      cert["note"] =
          "outward preimage sweep over the segment windows admits no tracer";
      return cert;
    }
    layer = std::move(next);
  }
  return std::nullopt;
}

}  // namespace

Verdict specification_point_verdict(const System& sys, const PointValue& x,
                                    const Rat& epsilon, const std::vector<long long>& M_grid,
                                    int battery_count, long long horizon, uint64_t seed) {
  if (M_grid.empty()) throw Error("PreconditionViolation", "empty M grid");
  json params;
  params["epsilon"] = rat_to_string(epsilon);
  params["battery"] = battery_count;
  params["horizon"] = horizon;
  params["seed"] = seed;
  json m_list = json::array();
  for (auto m : M_grid) m_list.push_back(m);
  params["M_grid"] = m_list;

  Verdict v = make_verdict("specification-point", Outcome::Inconclusive, params);
  v.exact = sys.metric_exact();

  json trials = json::array();
  json certified_witness;
  for (long long M : M_grid) {
    auto battery = default_battery(sys, x, epsilon, M, battery_count, horizon, seed);
    if (battery.empty()) continue;
    bool all_ok = true;
    json row;
    row["M"] = M;
    row["instances"] = battery.size();
    for (size_t bi = 0; bi < battery.size(); ++bi) {
      bool traced = false;
      if (is_two_sided_shift(sys)) {
        try {
          traced = trace_succeeded(specification_trace_symbolic(sys, battery[bi], false));
        } catch (const Error&) {
        }
      }
      if (!traced) {
        try {
          traced =
              trace_succeeded(specification_trace_glued(sys, x, battery[bi],
                                                        shard_seed(seed, bi)));
        } catch (const Error&) {
          // GapTooSmall and friends: this M gives no evidence either way
        }
      }
      if (!traced) {
        if (auto t = spec_interval_tracer(sys, battery[bi])) {
          auto err = verified_spec_error(sys, *t, battery[bi]);
          traced = err.has_value();
        }
      }
      if (!traced) {
        all_ok = false;
        row["failed_instance"] = bi;
        if (auto cert = spec_refutation(sys, battery[bi])) {
          json w;
          w["M"] = M;
          w["instance"] = bi;
          w["certificate"] = *cert;
          json segs = json::array();
          for (auto& s : battery[bi].segments)
            segs.push_back({{"a", s.a}, {"b", s.b}, {"x", sys.encode_point(s.x)}});
          w["segments"] = segs;
          certified_witness = w;
          row["certified"] = true;
        }
        break;
      }
    }
    trials.push_back(row);
    if (all_ok) {
      v.outcome = Outcome::Holds;
      v.detail["M"] = M;
      v.detail["trials"] = trials;
      return v;
    }
  }
  v.detail["trials"] = trials;
  if (!certified_witness.is_null()) {
    v.outcome = Outcome::Fails;
    v.witness = certified_witness;
  }
  return v;
}

}  // namespace pdyn
