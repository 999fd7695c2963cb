#include "pdyn/entropy.hpp"

#include "pdyn/expansivity.hpp"
#include "pdyn/rng.hpp"
#include "pdyn/specification.hpp"

#include <algorithm>
#include <cmath>

namespace pdyn {

namespace {

bool is_plain_shift(const System& sys) {
  return sys.caps().exact_symbolic && sys.alphabet_size() > 0;
}

bool monotone_scalar(const System& sys) {
  const std::string id = sys.id();
  return id == "squaring" || id == "doubling-line" || id == "identity";
}

// shift-word candidates on the window [0, n-1], zero padding elsewhere
std::vector<std::string> window_words(const System& sys, const Region& K, long long n,
                                      long long cap) {
  int k = sys.alphabet_size();
  long long total = 1;
  for (long long i = 0; i < n; ++i) {
    total *= k;
    if (total > cap) throw Error("BudgetExceeded", "exact mode capped at 2^16 candidates");
  }
  std::map<long long, char> pinned;
  if (const auto* cy = std::get_if<CylinderRegion>(&K)) {
    for (size_t j = 0; j < cy->word.size(); ++j)
      pinned[cy->start + (long long)j] = cy->word[j];
  }
  std::vector<std::string> words;
  std::string w(static_cast<size_t>(n), '0');
  for (long long v = 0; v < total; ++v) {
    long long t = v;
    for (long long i = n - 1; i >= 0; --i) {
      w[static_cast<size_t>(i)] = static_cast<char>('0' + t % k);
      t /= k;
    }
    bool ok = true;
    for (auto& [idx, c] : pinned)
      if (idx >= 0 && idx < n && w[static_cast<size_t>(idx)] != c) ok = false;
    if (ok) words.push_back(w);
  }
  return words;
}

BiSeq word_point(const std::string& w) {
  BiSeq s = BiSeq::constant('0');
  for (size_t i = 0; i < w.size(); ++i) s.set_symbol(static_cast<long long>(i), w[i]);
  return s;
}

// maximum independent set by branch and bound; adjacency as sorted lists
struct MisSolver {
  const std::vector<std::vector<int>>& adj;
  std::vector<int> best;
  long long work = 0;
  long long work_cap;

  void run(std::vector<int> order) {
    std::vector<int> chosen;
    recurse(order, chosen);
  }

  void recurse(std::vector<int>& rem, std::vector<int>& chosen) {
    if (++work > work_cap) throw Error("BudgetExceeded", "MIS branch-and-bound work cap");
    if (chosen.size() + rem.size() <= best.size()) return;  // bound
    if (rem.empty()) {
      if (chosen.size() > best.size()) best = chosen;
      return;
    }
    // branch on the highest-degree remaining vertex
    int pick = rem[0];
    size_t pick_at = 0, pick_deg = 0;
    std::vector<char> in_rem_mark;
    {
      std::vector<char> mark(adj.size(), 0);
      for (int v : rem) mark[static_cast<size_t>(v)] = 1;
      for (size_t i = 0; i < rem.size(); ++i) {
        size_t d = 0;
        for (int u : adj[static_cast<size_t>(rem[i])])
          if (mark[static_cast<size_t>(u)]) ++d;
        if (i == 0 || d > pick_deg) {
          pick = rem[i];
          pick_at = i;
          pick_deg = d;
        }
      }
      in_rem_mark = std::move(mark);
    }
    if (pick_deg == 0) {
      // remaining graph is edgeless: take everything
      std::vector<int> all = chosen;
      all.insert(all.end(), rem.begin(), rem.end());
      if (all.size() > best.size()) best = all;
      return;
    }
    // include pick
    {
      std::vector<char> banned(adj.size(), 0);
      banned[static_cast<size_t>(pick)] = 1;
      for (int u : adj[static_cast<size_t>(pick)]) banned[static_cast<size_t>(u)] = 1;
      std::vector<int> next;
      for (int v : rem)
        if (!banned[static_cast<size_t>(v)]) next.push_back(v);
      chosen.push_back(pick);
      recurse(next, chosen);
      chosen.pop_back();
    }
    // exclude pick
    {
      std::vector<int> next = rem;
      next.erase(next.begin() + static_cast<long long>(pick_at));
      recurse(next, chosen);
    }
  }
};

}  // namespace

Rat bowen_distance(const System& sys, const PointValue& x, const PointValue& y, long long n) {
  Rat best = sys.distance(x, y);
  PointValue fx = x, fy = y;
  for (long long i = 1; i < n; ++i) {
    fx = sys.iterate(fx, 1);
    fy = sys.iterate(fy, 1);
    best = std::max(best, sys.distance(fx, fy));
  }
  return best;
}

SeparatedSet separated_set(const System& sys, const Region& K, int budget, long long n,
                           const Rat& epsilon, SeparationMode mode, uint64_t seed) {
  if (n < 1) throw Error("PreconditionViolation", "n must be >= 1");
  if (epsilon <= 0) throw Error("PreconditionViolation", "epsilon must be positive");
  SeparatedSet out;
  out.n = n;
  out.epsilon = epsilon;
  out.mode = mode;

  if (is_plain_shift(sys) && std::holds_alternative<BiSeq>(
                                 sys.sample(sys.whole_space(), 1, 1)[0])) {
    // window-word candidates: distinct words are d_n-separated at distance 1,
    // identical words coincide (zero padding everywhere else)
    auto words = window_words(sys, K, n, 1 << 16);
    if (mode == SeparationMode::ExactMaximum) {
      // conflict graph: d_n <= eps. Distinct words always reach distance 1;
      // an edge exists only if eps >= 1.
      if (epsilon >= 1) {
        out.points = {pv(word_point(words.front()))};
      } else {
        std::vector<std::vector<int>> adj(words.size());
        MisSolver solver{adj, {}, 0, 200000};
        std::vector<int> order(words.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = (int)i;
        solver.run(order);
        out.points.reserve(solver.best.size());
        for (int i : solver.best) out.points.push_back(pv(word_point(words[(size_t)i])));
      }
      out.exact = true;
      return out;
    }
    for (auto& w : words) out.points.push_back(pv(word_point(w)));
    out.exact = true;
    return out;
  }

  // scalar candidates: a deterministic uniform grid over the K interval
  // (exact rationals, endpoints included) resolves fine separation scales
  // without sampling jitter
  (void)seed;
  Rat klo, khi;
  if (const auto* iv = std::get_if<IntervalRegion>(&K)) {
    klo = iv->lo;
    khi = iv->hi;
  } else if (const auto* bl = std::get_if<BallRegion>(&K)) {
    klo = as_scalar(bl->center).value - bl->radius;
    khi = as_scalar(bl->center).value + bl->radius;
  } else {
    throw Error("EmptyRegion", "scalar separated sets need an interval or ball region");
  }
  Region ws = sys.whole_space();
  if (const auto* hull = std::get_if<IntervalRegion>(&ws)) {
    klo = std::max(klo, hull->lo);
    khi = std::min(khi, hull->hi);
  }
  if (klo > khi) throw Error("EmptyRegion", "K misses the state set");

  const long long grid = std::max<long long>(budget, 2);
  auto value_at = [&](long long i) { return Rat(klo + (khi - klo) * i / (grid - 1)); };
  double epsd = rat_to_double(epsilon);
  auto dn_values = [&](double a, double b) {
    double best = 0;
    for (long long t = 0; t < n; ++t) {
      best = std::max(best, std::abs(a - b));
      a = sys.approx_map(a);
      b = sys.approx_map(b);
    }
    return best;
  };

  const bool sweep_is_maximum = monotone_scalar(sys);
  if (mode == SeparationMode::GreedyMaximal ||
      (mode == SeparationMode::ExactMaximum && sweep_is_maximum)) {
    if (!sweep_is_maximum && grid > 8192)
      throw Error("BudgetExceeded", "generic greedy capped at 8192 candidates");
    if (sweep_is_maximum) {
      // monotone iterates: d_n(x,z) >= max(d_n(x,y), d_n(y,z)) for x < y < z,
      // so consecutive separation suffices and the left-to-right sweep is a
      // maximum selection over the grid; candidates are generated lazily and
      // only kept points get their exact rational value
      const double lo_d = rat_to_double(klo);
      const double step_d = rat_to_double(Rat((khi - klo) / (grid - 1)));
      double last = 0;
      bool have = false;
      for (long long i = 0; i < grid; ++i) {
        double v = lo_d + step_d * static_cast<double>(i);
        if (!have || dn_values(last, v) > epsd) {
          out.points.push_back(pv_scalar(value_at(i), true));
          last = v;
          have = true;
        }
      }
      return out;
    }
    // generic greedy with precomputed orbits
    std::vector<std::vector<double>> orbit(static_cast<size_t>(grid));
    for (long long i = 0; i < grid; ++i) {
      orbit[static_cast<size_t>(i)].resize(static_cast<size_t>(n));
      double v = rat_to_double(value_at(i));
      for (long long t = 0; t < n; ++t) {
        orbit[static_cast<size_t>(i)][static_cast<size_t>(t)] = v;
        v = sys.approx_map(v);
      }
    }
    auto dn = [&](size_t i, size_t j) {
      double best = 0;
      for (long long t = 0; t < n; ++t)
        best = std::max(best, std::abs(orbit[i][static_cast<size_t>(t)] -
                                       orbit[j][static_cast<size_t>(t)]));
      return best;
    };
    std::vector<size_t> kept;
    for (long long i = 0; i < grid; ++i) {
      bool ok = true;
      for (size_t j : kept)
        if (!(dn(j, static_cast<size_t>(i)) > epsd)) {
          ok = false;
          break;
        }
      if (ok) {
        kept.push_back(static_cast<size_t>(i));
        out.points.push_back(pv_scalar(value_at(i), true));
      }
    }
    return out;
  }

  // exact maximum on a non-monotone scalar map: branch and bound
  if (grid > (1 << 12))
    throw Error("BudgetExceeded", "exact mode on scalars capped at 4096 candidates");
  std::vector<std::vector<double>> orbit(static_cast<size_t>(grid));
  for (long long i = 0; i < grid; ++i) {
    orbit[static_cast<size_t>(i)].resize(static_cast<size_t>(n));
    double v = rat_to_double(value_at(i));
    for (long long t = 0; t < n; ++t) {
      orbit[static_cast<size_t>(i)][static_cast<size_t>(t)] = v;
      v = sys.approx_map(v);
    }
  }
  auto dn = [&](size_t i, size_t j) {
    double best = 0;
    for (long long t = 0; t < n; ++t)
      best = std::max(best, std::abs(orbit[i][static_cast<size_t>(t)] -
                                     orbit[j][static_cast<size_t>(t)]));
    return best;
  };
  std::vector<std::vector<int>> adj(static_cast<size_t>(grid));
  for (size_t i = 0; i < static_cast<size_t>(grid); ++i)
    for (size_t j = i + 1; j < static_cast<size_t>(grid); ++j)
      if (!(dn(i, j) > epsd)) {
        adj[i].push_back((int)j);
        adj[j].push_back((int)i);
      }
  MisSolver solver{adj, {}, 0, 2000000};
  std::vector<int> order(static_cast<size_t>(grid));
  for (size_t i = 0; i < order.size(); ++i) order[i] = (int)i;
  solver.run(order);
  for (int i : solver.best) out.points.push_back(pv_scalar(value_at(i), true));
  return out;
}

std::vector<Rat> default_eps_schedule() {
  std::vector<Rat> s;
  for (int e = 1; e <= 8; ++e) s.push_back(pow2(-e));
  return s;
}

EntropyEstimate entropy_estimate(const System& sys, const Region& K, int budget,
                                 const std::vector<Rat>& eps_schedule, long long n_max,
                                 SeparationMode mode, uint64_t seed) {
  if (n_max < 2) throw Error("PreconditionViolation", "n_max must be >= 2");
  if (eps_schedule.empty()) throw Error("PreconditionViolation", "empty schedule");
  for (size_t i = 1; i < eps_schedule.size(); ++i)
    if (!(eps_schedule[i] < eps_schedule[i - 1]))
      throw Error("PreconditionViolation", "schedule must strictly decrease");

  EntropyEstimate est;
  long long n_lo = std::max<long long>(2, n_max / 2);

  bool first = true;
  for (const Rat& eps : eps_schedule) {
    std::vector<long long> counts;
    for (long long n = 1; n <= n_max; ++n) {
      auto s = separated_set(sys, K, budget, n, eps, mode, shard_seed(seed, (uint64_t)n));
      long long c = static_cast<long long>(s.points.size());
      counts.push_back(c);
      double rate = 0;
      long long e2 = 0;
      if (c > 0 && is_power_of_two(BigInt(c), &e2))
        rate = static_cast<double>(e2) / static_cast<double>(n) * std::log(2.0);
      else if (c > 0)
        rate = std::log(static_cast<double>(c)) / static_cast<double>(n);
      est.table.push_back({eps, n, c, rate});
    }
    // fit ln s_n ~ a + b n over the upper half
    std::vector<long long> ns, e2s;
    std::vector<double> ys;
    bool all_pow2 = true;
    for (long long n = n_lo; n <= n_max; ++n) {
      long long c = counts[static_cast<size_t>(n - 1)];
      if (c <= 0) {
        all_pow2 = false;
        continue;
      }
      long long e2 = 0;
      if (!is_power_of_two(BigInt(c), &e2)) all_pow2 = false;
      ns.push_back(n);
      e2s.push_back(e2);
      ys.push_back(std::log(static_cast<double>(c)));
    }
    if (ns.size() < 2) continue;

    double slope = 0, resid = 0;
    bool exact_fit = false, zero_resid = false;
    std::string slope_str;
    if (all_pow2) {
      // exact least squares on log2 counts
      Rat nbar(0), ebar(0);
      for (size_t i = 0; i < ns.size(); ++i) {
        nbar += Rat(ns[i]);
        ebar += Rat(e2s[i]);
      }
      nbar /= (long long)ns.size();
      ebar /= (long long)ns.size();
      Rat num(0), den(0);
      for (size_t i = 0; i < ns.size(); ++i) {
        num += (Rat(ns[i]) - nbar) * (Rat(e2s[i]) - ebar);
        den += (Rat(ns[i]) - nbar) * (Rat(ns[i]) - nbar);
      }
      Rat slope_q = num / den;
      Rat intercept = ebar - slope_q * nbar;
      Rat sse(0);
      for (size_t i = 0; i < ns.size(); ++i) {
        Rat r = Rat(e2s[i]) - (intercept + slope_q * Rat(ns[i]));
        sse += r * r;
      }
      slope = rat_to_double(slope_q) * std::log(2.0);
      resid = std::sqrt(rat_to_double(sse) / (double)ns.size()) * std::log(2.0);
      exact_fit = true;
      zero_resid = sse == 0;
      slope_str = rat_to_string(slope_q);
    } else {
      double nbar = 0, ybar = 0;
      for (size_t i = 0; i < ns.size(); ++i) {
        nbar += (double)ns[i];
        ybar += ys[i];
      }
      nbar /= (double)ns.size();
      ybar /= (double)ns.size();
      double num = 0, den = 0;
      for (size_t i = 0; i < ns.size(); ++i) {
        num += ((double)ns[i] - nbar) * (ys[i] - ybar);
        den += ((double)ns[i] - nbar) * ((double)ns[i] - nbar);
      }
      slope = num / den;
      double a = ybar - slope * nbar;
      double sse = 0;
      for (size_t i = 0; i < ns.size(); ++i) {
        double r = ys[i] - (a + slope * (double)ns[i]);
        sse += r * r;
      }
      resid = std::sqrt(sse / (double)ns.size());
    }
    if (first || slope > est.fitted_rate) {
      est.fitted_rate = slope;
      est.fit_residual = resid;
      est.best_epsilon = eps;
      est.exact_fit = exact_fit;
      est.exact_zero_residual = zero_resid;
      est.exact_slope_log2 = slope_str;
      first = false;
    }
  }
  return est;
}

EntropyCertificate entropy_certificate_from_spec_points(const System& sys,
                                                        const PointValue& x,
                                                        const PointValue& y, const Rat& eps,
                                                        long long M, long long n) {
  if (sys.equal_points(x, y))
    throw Error("PreconditionViolation", "two distinct specification points required");
  if (!(sys.distance(x, y) > eps * 3))
    throw Error("PreconditionViolation", "d(x,y) must exceed 3 eps");
  if (M < 1 || n < 0) throw Error("PreconditionViolation", "need M >= 1 and n >= 0");

  // both points must pass the specification verdict at (eps, M)
  for (const PointValue* p : {&x, &y}) {
    auto v = specification_point_verdict(sys, *p, eps, {M}, 4, (3 * M + 8), 5);
    if (!v.holds())
      throw Error("TracerUnavailable",
                  "point " + sys.encode_point(*p) + " failed its specification verdict");
  }

  EntropyCertificate cert;
  cert.system_id = sys.id();
  cert.x = x;
  cert.y = y;
  cert.epsilon = eps;
  cert.M = M;
  cert.n = n;
  cert.separation_steps = (n + 1) * M;
  cert.bound = std::log(2.0) / static_cast<double>(M);

  const long long count = 1LL << (n + 1);
  for (long long code = 0; code < count; ++code) {
    SpecSegments spec;
    spec.epsilon = eps;
    spec.gap_M = M;
    for (long long i = 0; i <= n; ++i) {
      const PointValue& z = ((code >> i) & 1) ? y : x;
      spec.segments.push_back({i * M, i * M, z});
    }
    auto out = specification_trace_symbolic(sys, spec, false);
    if (!trace_succeeded(out))
      throw Error("TracerUnavailable", "tuple tracer failed for code " + std::to_string(code));
    cert.family.push_back(std::get<TraceResult>(out).tracer);
  }

  // collisions would be resolved by the surjectivity extension
  // (z_{n+1} in f^{-(n+1)M}(x)); verify distinctness first
  for (size_t i = 0; i < cert.family.size(); ++i)
    for (size_t j = i + 1; j < cert.family.size(); ++j)
      if (sys.equal_points(cert.family[i], cert.family[j])) {
        if (!sys.caps().invertible)
          throw Error("TracerUnavailable", "tracer collision and no inverse to extend with");
        // extend both tuples by a preimage segment at (n+1)M and re-trace
        for (size_t idx : {i, j}) {
          long long code = static_cast<long long>(idx);
          SpecSegments spec;
          spec.epsilon = eps;
          spec.gap_M = M;
          for (long long t = 0; t <= n; ++t) {
            const PointValue& z = ((code >> t) & 1) ? y : x;
            spec.segments.push_back({t * M, t * M, z});
          }
          const PointValue& anchor = (idx % 2) ? y : x;
          spec.segments.push_back({(n + 1) * M, (n + 1) * M,
                                   sys.iterate(anchor, -(n + 1) * M)});
          auto out = specification_trace_symbolic(sys, spec, false);
          if (!trace_succeeded(out))
            throw Error("TracerUnavailable", "extension tracer failed");
          cert.family[idx] = std::get<TraceResult>(out).tracer;
        }
      }

  // pairwise separation witnesses at threshold eps over (n+1)M steps
  json seps = json::array();
  for (size_t i = 0; i < cert.family.size(); ++i) {
    for (size_t j = i + 1; j < cert.family.size(); ++j) {
      PointValue a = cert.family[i], b = cert.family[j];
      long long best_t = -1;
      Rat best_d(0);
      for (long long t = 0; t < cert.separation_steps; ++t) {
        if (t > 0) {
          a = sys.iterate(a, 1);
          b = sys.iterate(b, 1);
        }
        Rat d = sys.distance(a, b);
        if (d > best_d) {
          best_d = d;
          best_t = t;
        }
        if (best_d > eps) break;  // witness found
      }
      if (!(best_d > eps)) {
        json w = {{"i", i}, {"j", j}, {"max_distance", rat_to_string(best_d)}};
        throw Error("SeparationFailure", "pair not separated: " + w.dump());
      }
      seps.push_back({{"i", i},
                      {"j", j},
                      {"time", best_t},
                      {"distance", rat_to_string(best_d)}});
    }
  }
  cert.separations = std::move(seps);
  return cert;
}

json entropy_certificate_to_json(const System& sys, const EntropyCertificate& cert) {
  json j;
  j["kind"] = "entropy_certificate";
  j["system"] = cert.system_id;
  j["x"] = sys.encode_point(cert.x);
  j["y"] = sys.encode_point(cert.y);
  j["epsilon"] = rat_to_string(cert.epsilon);
  j["M"] = cert.M;
  j["n"] = cert.n;
  j["separation_steps"] = cert.separation_steps;
  j["bound_log2_over_M"] = cert.bound;
  json fam = json::array();
  for (auto& p : cert.family) fam.push_back(sys.encode_point(p));
  j["family"] = fam;
  j["separations"] = cert.separations;
  return j;
}

bool verify_entropy_certificate(const json& cert, std::vector<std::string>* errors) {
  auto fail = [&](const std::string& msg) {
    if (errors) errors->push_back(msg);
    return false;
  };
  try {
    if (cert.at("kind") != "entropy_certificate") return fail("not an entropy certificate");
    auto sys = make_system(cert.at("system").get<std::string>());
    Rat eps = rat_from_string(cert.at("epsilon").get<std::string>());
    long long M = cert.at("M").get<long long>();
    long long n = cert.at("n").get<long long>();
    long long steps = cert.at("separation_steps").get<long long>();
    if (steps != (n + 1) * M) return fail("separation_steps != (n+1)M");
    auto x = sys->parse_point(cert.at("x").get<std::string>());
    auto y = sys->parse_point(cert.at("y").get<std::string>());
    if (!(sys->distance(x, y) > eps * 3)) return fail("d(x,y) <= 3 eps");
    const auto& fam_json = cert.at("family");
    if ((long long)fam_json.size() != (1LL << (n + 1)))
      return fail("family size is not 2^(n+1)");
    std::vector<PointValue> family;
    for (auto& f : fam_json) family.push_back(sys->parse_point(f.get<std::string>()));
    // every pair must appear with a re-checkable witness
    size_t expect_pairs = family.size() * (family.size() - 1) / 2;
    const auto& seps = cert.at("separations");
    if (seps.size() != expect_pairs) return fail("separation list does not cover all pairs");
    bool all_ok = true;
    for (auto& s : seps) {
      size_t i = s.at("i").get<size_t>();
      size_t j = s.at("j").get<size_t>();
      long long t = s.at("time").get<long long>();
      Rat claimed = rat_from_string(s.at("distance").get<std::string>());
      if (i >= family.size() || j >= family.size() || t < 0 || t >= steps) {
        all_ok = fail("separation entry out of range");
        continue;
      }
      Rat actual = sys->distance(sys->iterate(family[i], t), sys->iterate(family[j], t));
      if (actual != claimed) {
        all_ok = fail("pair (" + std::to_string(i) + "," + std::to_string(j) +
                      "): recomputed distance " + rat_to_string(actual) + " != claimed " +
                      rat_to_string(claimed));
      }
      if (!(actual > eps)) {
        all_ok = fail("pair (" + std::to_string(i) + "," + std::to_string(j) +
                      ") is not separated beyond eps");
      }
    }
    double bound = cert.at("bound_log2_over_M").get<double>();
    if (std::abs(bound - std::log(2.0) / (double)M) > 1e-12)
      all_ok = fail("bound field does not equal log(2)/M");
    return all_ok;
  } catch (const std::exception& e) {
    return fail(std::string("parse/shape error: ") + e.what());
  }
}

}  // namespace pdyn
