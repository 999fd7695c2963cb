#include "pdyn/mixing.hpp"

#include "pdyn/rng.hpp"

#include <algorithm>
#include <map>

namespace pdyn {

namespace {

bool is_plain_shift(const System& sys) {
  return sys.caps().exact_symbolic && sys.alphabet_size() > 0;
}

// shift region -> coordinate constraints (balls shrink to their forced-
// agreement cylinder, a sound under-approximation on the full shift)
std::map<long long, char> shift_constraints(const Region& r) {
  std::map<long long, char> cs;
  if (const auto* cy = std::get_if<CylinderRegion>(&r)) {
    for (size_t j = 0; j < cy->word.size(); ++j)
      cs[cy->start + (long long)j] = cy->word[j];
    return cs;
  }
  if (const auto* bl = std::get_if<BallRegion>(&r)) {
    long long rad = bl->open ? strict_agreement_radius(bl->radius)
                             : std::max(log2_ceil_inv(bl->radius) - 1, 0);
    if (const auto* bs = std::get_if<BiSeq>(&bl->center)) {
      for (long long j = -rad; j <= rad; ++j) cs[j] = bs->at(j);
    } else {
      const OneSeq& os = as_oneseq(bl->center);
      for (long long j = 0; j <= rad; ++j) cs[j] = os.at(j);
    }
    return cs;
  }
  throw Error("EmptyRegion", "interval regions are not shift regions");
}

// scalar region -> closed interval hull + open flags
struct IntervalProbe {
  Rat lo, hi;
  bool lo_open = false, hi_open = false;
};

IntervalProbe scalar_probe(const System& sys, const Region& r) {
  if (const auto* iv = std::get_if<IntervalRegion>(&r))
    return {iv->lo, iv->hi, !iv->lo_closed, !iv->hi_closed};
  if (const auto* bl = std::get_if<BallRegion>(&r)) {
    const Rat& c = as_scalar(bl->center).value;
    return {c - bl->radius, c + bl->radius, bl->open, bl->open};
  }
  throw Error("EmptyRegion", "cylinder regions are not scalar regions");
  (void)sys;
}

bool pieces_meet(const std::vector<ExactInterval>& pieces, const IntervalProbe& v) {
  for (auto& p : pieces) {
    bool lo_ok = v.hi_open ? p.lo < v.hi : p.lo <= v.hi;
    bool hi_ok = v.lo_open ? p.hi > v.lo : p.hi >= v.lo;
    if (lo_ok && hi_ok) return true;
  }
  return false;
}

TransitionResult shift_transition(const System& sys, const Region& U, const Region& V,
                                  long long n_max) {
  auto cu = shift_constraints(U);
  auto cv = shift_constraints(V);
  auto compatible = [&](long long n) {
    for (auto& [j, c] : cu) {
      auto it = cv.find(j - n);
      if (it != cv.end() && it->second != c) return false;
    }
    return true;
  };
  std::vector<bool> ok(static_cast<size_t>(n_max) + 1, false);
  for (long long n = 1; n <= n_max; ++n) ok[static_cast<size_t>(n)] = compatible(n);
  long long N = -1;
  for (long long n = n_max; n >= 1 && ok[static_cast<size_t>(n)]; --n) N = n;
  TransitionResult res;
  if (N < 0) {
    res.kind = TransitionResult::Kind::Inconclusive;  // n_max below the word bound
    return res;
  }
  res.kind = TransitionResult::Kind::Found;
  res.N = N;
  // beyond the word bound the shifted windows are disjoint, so the
  // intersection stays nonempty for every larger n as well
  long long structural = 0;
  if (!cu.empty() && !cv.empty())
    structural = cu.rbegin()->first - cv.begin()->first + 1;
  res.detail["holds_for_all_larger_n"] = structural <= n_max + 1;
  res.detail["word_bound"] = structural;
  (void)sys;
  return res;
}

TransitionResult interval_transition(const System& sys, const Region& U, const Region& V,
                                     long long n_max) {
  TransitionResult res;
  IntervalProbe u = scalar_probe(sys, U);
  IntervalProbe v = scalar_probe(sys, V);
  // clip U to the state set; balls near a boundary spill over it
  Region ws = sys.whole_space();
  if (const auto* hull = std::get_if<IntervalRegion>(&ws)) {
    u.lo = std::max(u.lo, hull->lo);
    if (sys.caps().compact) u.hi = std::min(u.hi, hull->hi);
  }
  if (u.lo > u.hi) throw Error("EmptyRegion", "U misses the state set");
  ExactInterval vh{v.lo, v.hi};
  std::vector<ExactInterval> pieces{{u.lo, u.hi}};
  std::vector<bool> ok;
  ok.push_back(false);  // n = 0 unused
  long long n_reached = 0;
  for (long long n = 1; n <= n_max; ++n) {
    std::vector<ExactInterval> next;
    bool budget_hit = false;
    for (auto& p : pieces) {
      try {
        for (auto& im : sys.interval_image(p, 1)) next.push_back(im);
      } catch (const Error& e) {
        if (e.code() == "BudgetExceeded") {
          budget_hit = true;
          break;
        }
        throw;
      }
    }
    if (budget_hit || next.size() > 64) {
      // exact endpoints outgrew the bit budget: keep what was verified
      res.detail["note"] = "exact images truncated at n=" + std::to_string(n - 1);
      break;
    }
    pieces = std::move(next);
    ok.push_back(pieces_meet(pieces, v));
    n_reached = n;
    if (!ok.back() && pieces.size() == 1) {
      if (auto cert = sys.escape_certificate(pieces[0], vh)) {
        res.kind = TransitionResult::Kind::CertifiedNever;
        res.N = n;
        res.certificate = *cert;
        res.certificate["from_n"] = n;
        res.certificate["image_lo"] = rat_to_string(pieces[0].lo);
        res.certificate["image_hi"] = rat_to_string(pieces[0].hi);
        return res;
      }
    }
  }
  long long N = -1;
  for (long long n = n_reached; n >= 1 && ok[static_cast<size_t>(n)]; --n) N = n;
  res.detail["n_verified"] = n_reached;
  if (N < 0 || n_reached < 1) {
    res.kind = TransitionResult::Kind::Inconclusive;
    return res;
  }
  res.kind = TransitionResult::Kind::Found;
  res.N = N;
  return res;
}

}  // namespace

TransitionResult mixing_transition_time(const System& sys, const Region& U, const Region& V,
                                        long long n_max) {
  if (n_max < 1) throw Error("PreconditionViolation", "n_max must be >= 1");
  if (is_plain_shift(sys)) return shift_transition(sys, U, V, n_max);
  if (sys.caps().exact_interval_image) return interval_transition(sys, U, V, n_max);
  TransitionResult res;
  res.kind = TransitionResult::Kind::Inconclusive;
  res.detail["note"] = "no exact transition machinery for " + sys.id();
  return res;
}

namespace {

Verdict point_verdict_impl(const System& sys, const PointValue& x,
                           const std::vector<Rat>& radii, const std::vector<Region>& probes,
                           long long n_max, bool mixing) {
  if (radii.empty() || probes.empty())
    throw Error("PreconditionViolation", "need at least one radius and one probe");
  json params;
  params["n_max"] = n_max;
  params["radii"] = json::array();
  for (auto& r : radii) params["radii"].push_back(rat_to_string(r));
  params["probes"] = probes.size();
  Verdict v =
      make_verdict(mixing ? "mixing-point" : "transitive-point", Outcome::Holds, params);
  v.exact = sys.metric_exact();

  json table = json::array();
  bool any_inconclusive = false;
  for (auto& r : radii) {
    for (size_t pi = 0; pi < probes.size(); ++pi) {
      auto res = mixing_transition_time(sys, ball(x, r, true), probes[pi], n_max);
      json row;
      row["radius"] = rat_to_string(r);
      row["probe"] = pi;
      switch (res.kind) {
        case TransitionResult::Kind::Found:
          row["N"] = res.N;
          if (!mixing) break;
          // mixing wants the whole suffix; Found already guarantees it up
          // to n_max, and shift transitions certify beyond
          break;
        case TransitionResult::Kind::CertifiedNever:
          v.outcome = Outcome::Fails;
          v.witness = json{{"radius", rat_to_string(r)},
                           {"probe", pi},
                           {"certificate", res.certificate}};
          row["certified_never"] = true;
          table.push_back(row);
          v.detail["table"] = table;
          return v;
        case TransitionResult::Kind::Inconclusive:
          any_inconclusive = true;
          row["inconclusive"] = true;
          break;
      }
      table.push_back(row);
    }
  }
  v.detail["table"] = table;
  if (any_inconclusive) v.outcome = Outcome::Inconclusive;
  return v;
}

}  // namespace

Verdict mixing_point_verdict(const System& sys, const PointValue& x,
                             const std::vector<Rat>& radii, const std::vector<Region>& probes,
                             long long n_max) {
  return point_verdict_impl(sys, x, radii, probes, n_max, true);
}

Verdict transitive_point_verdict(const System& sys, const PointValue& x,
                                 const std::vector<Rat>& radii,
                                 const std::vector<Region>& probes, long long n_max) {
  return point_verdict_impl(sys, x, radii, probes, n_max, false);
}

std::vector<Region> default_probe_regions(const System& sys, int count, uint64_t seed) {
  std::vector<Region> probes;
  if (is_plain_shift(sys)) {
    probes.push_back(cylinder(0, "000"));
    probes.push_back(cylinder(0, "111"));
    probes.push_back(cylinder(0, "010"));
    SplitMix64 rng(seed);
    while ((int)probes.size() < count) {
      std::string w;
      for (int i = 0; i < 3; ++i)
        w += static_cast<char>('0' + rng.below(std::max(sys.alphabet_size(), 2)));
      probes.push_back(cylinder(0, w));
    }
    probes.resize(static_cast<size_t>(count));
    return probes;
  }
  Region ws = sys.whole_space();
  if (const auto* hull = std::get_if<IntervalRegion>(&ws)) {
    Rat lo = hull->lo, hi = hull->hi;
    if (sys.id() == "doubling-line") hi = std::min(hi, Rat(8));
    Rat width = hi - lo;
    probes.push_back(interval(lo + width / 64, lo + width / 8));
    probes.push_back(interval(lo + width * 7 / 16, lo + width * 9 / 16));
    probes.push_back(interval(lo + width * 13 / 16, lo + width * 15 / 16));
    SplitMix64 rng(seed);
    while ((int)probes.size() < count) {
      Rat a = lo + rng.unit_dyadic(24) * width * 7 / 8;
      probes.push_back(interval(a, a + width / 16));
    }
    probes.resize(static_cast<size_t>(count));
    return probes;
  }
  // fall back to balls around sampled points
  auto pts = sys.sample(sys.whole_space(), count, seed);
  for (auto& p : pts) probes.push_back(ball(p, Rat(1, 4), true));
  return probes;
}

}  // namespace pdyn
