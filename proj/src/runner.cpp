#include "pdyn/runner.hpp"

#include "pdyn/chaos.hpp"
#include "pdyn/entropy.hpp"
#include "pdyn/expansivity.hpp"
#include "pdyn/mixing.hpp"
#include "pdyn/pseudo_orbit.hpp"
#include "pdyn/rng.hpp"
#include "pdyn/specification.hpp"
#include "pdyn/trace.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace pdyn {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// parameter access with strict schema accounting
struct Params {
  const std::map<std::string, std::string>& kv;
  mutable std::set<std::string> used;

  bool has(const std::string& k) const {
    bool ok = kv.count(k) > 0;
    if (ok) used.insert(k);
    return ok;
  }
  std::string require(const std::string& k) const {
    auto it = kv.find(k);
    if (it == kv.end()) throw Error("SchemaViolation", "missing parameter '" + k + "'");
    used.insert(k);
    return it->second;
  }
  std::string get(const std::string& k, const std::string& dflt) const {
    auto it = kv.find(k);
    if (it == kv.end()) return dflt;
    used.insert(k);
    return it->second;
  }
  long long get_ll(const std::string& k, long long dflt) const {
    auto it = kv.find(k);
    if (it == kv.end()) return dflt;
    used.insert(k);
    return std::stoll(it->second);
  }
  long long require_ll(const std::string& k) const { return std::stoll(require(k)); }
  Rat require_rat(const std::string& k) const { return rat_from_string(require(k)); }
  Rat get_rat(const std::string& k, const Rat& dflt) const {
    auto it = kv.find(k);
    if (it == kv.end()) return dflt;
    used.insert(k);
    return rat_from_string(it->second);
  }
  void finish() const {
    for (auto& [k, v] : kv) {
      (void)v;
      if (!used.count(k))
        throw Error("SchemaViolation", "unknown parameter '" + k + "'");
    }
  }
};

Region parse_region(const System& sys, const std::string& text) {
  if (text == "whole") return sys.whole_space();
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw Error("ParseError", "region must be whole|interval:lo,hi|ball:point,r|cylinder:start,word");
  std::string kind = text.substr(0, colon);
  std::string rest = text.substr(colon + 1);
  if (kind == "interval") {
    auto parts = split(rest, ',');
    if (parts.size() != 2) throw Error("ParseError", "interval:lo,hi");
    return interval(rat_from_string(parts[0]), rat_from_string(parts[1]), true, true);
  }
  if (kind == "ball") {
    auto comma = rest.rfind(',');
    if (comma == std::string::npos) throw Error("ParseError", "ball:point,radius");
    return ball(sys.parse_point(rest.substr(0, comma)),
                rat_from_string(rest.substr(comma + 1)), true);
  }
  if (kind == "cylinder") {
    auto comma = rest.find(',');
    if (comma == std::string::npos) throw Error("ParseError", "cylinder:start,word");
    return cylinder(std::stoll(rest.substr(0, comma)), rest.substr(comma + 1));
  }
  throw Error("ParseError", "unknown region kind '" + kind + "'");
}

MeasureModel parse_measure(const std::string& text) {
  auto colon = text.find(':');
  std::string kind = colon == std::string::npos ? text : text.substr(0, colon);
  if (kind == "bernoulli") {
    std::vector<Rat> probs;
    for (auto& p : split(text.substr(colon + 1), ','))
      probs.push_back(rat_from_string(p));
    return make_bernoulli(std::move(probs));
  }
  throw Error("ParseError", "measures: bernoulli:p0,p1,...");
}

std::vector<Rat> parse_rat_list(const std::string& text) {
  std::vector<Rat> out;
  for (auto& p : split(text, ',')) out.push_back(rat_from_string(trim(p)));
  return out;
}

std::vector<long long> parse_ll_list(const std::string& text) {
  std::vector<long long> out;
  for (auto& p : split(text, ',')) out.push_back(std::stoll(trim(p)));
  return out;
}

// segments: "a,b,point;a,b,point;..." with points in the system encoding
SpecSegments parse_segments(const System& sys, const std::string& text, long long gap,
                            const Rat& eps) {
  SpecSegments spec;
  spec.gap_M = gap;
  spec.epsilon = eps;
  for (auto& part : split(text, ';')) {
    auto fields = split(trim(part), ',');
    if (fields.size() < 3) throw Error("ParseError", "segment must be a,b,point");
    std::string enc = fields[2];
    for (size_t i = 3; i < fields.size(); ++i) enc += "," + fields[i];  // q(i,k,j) commas
    spec.segments.push_back(
        {std::stoll(trim(fields[0])), std::stoll(trim(fields[1])), sys.parse_point(trim(enc))});
  }
  return spec;
}

json trace_outcome_json(const System& sys, const TraceOutcome& out) {
  json j;
  if (trace_succeeded(out)) {
    const auto& r = std::get<TraceResult>(out);
    j["traced"] = true;
    j["tracer"] = sys.encode_point(r.tracer);
    j["max_error"] = rat_to_string(r.max_error);
    j["strategy"] = r.strategy;
    j["exact"] = r.exact;
    if (r.period) j["period"] = *r.period;
  } else {
    const auto& f = std::get<TraceFailure>(out);
    j["traced"] = false;
    j["certified"] = f.certified;
    if (!f.certificate.is_null()) j["certificate"] = f.certificate;
    if (f.best_candidate) {
      j["best_candidate"] = sys.encode_point(*f.best_candidate);
      j["best_error"] = rat_to_string(f.best_error);
    }
  }
  return j;
}

int exit_code_for(Outcome o) {
  switch (o) {
    case Outcome::Holds: return 0;
    case Outcome::Fails: return 1;
    case Outcome::Inconclusive: return 2;
  }
  return 2;
}

json ball_json(const System& sys, const DynamicalBall& b) {
  json j;
  j["delta"] = rat_to_string(b.delta);
  j["horizon"] = b.window.T;
  if (b.is_cylinder()) {
    j["representation"] = "cylinder";
    json cs = json::object();
    for (auto& [idx, c] : b.cylinder().constraints)
      cs[std::to_string(idx)] = std::string(1, c);
    j["constraints"] = cs;
    j["collapses_in_limit"] = b.cylinder().collapses_in_limit;
  } else {
    j["representation"] = "explicit";
    json pts = json::array();
    for (auto& p : b.explicit_rep().points) pts.push_back(sys.encode_point(p));
    j["points"] = pts;
    j["candidates_tested"] = b.explicit_rep().candidates_tested;
    j["exhaustive"] = b.explicit_rep().exhaustive;
  }
  return j;
}

struct OpResult {
  json result;
  int exit_code = 0;
};

OpResult dispatch(const System& sys, const std::string& op, const Params& P, uint64_t seed) {
  json r;
  int code = 0;
  auto from_verdict = [&](const Verdict& v) {
    r = verdict_to_json(v);
    code = exit_code_for(v.outcome);
  };

  if (op == "iterate") {
    auto p = sys.parse_point(P.require("point"));
    auto q = sys.iterate(p, P.require_ll("n"));
    r["point"] = sys.encode_point(q);
    r["exact"] = !std::holds_alternative<ScalarV>(q) || as_scalar(q).exact;
  } else if (op == "distance") {
    auto p = sys.parse_point(P.require("point"));
    auto q = sys.parse_point(P.require("point2"));
    r["distance"] = rat_to_string(sys.distance(p, q));
    r["exact"] = sys.metric_exact();
  } else if (op == "interval-image") {
    auto im = sys.interval_image({P.require_rat("lo"), P.require_rat("hi")},
                                 P.require_ll("n"));
    json arr = json::array();
    for (auto& iv : im)
      arr.push_back({{"lo", rat_to_string(iv.lo)}, {"hi", rat_to_string(iv.hi)}});
    r["intervals"] = arr;
  } else if (op == "periodic-points") {
    auto pts = sys.periodic_points(P.require_ll("period"));
    json arr = json::array();
    for (auto& p : pts) arr.push_back(sys.encode_point(p));
    r["points"] = arr;
  } else if (op == "sample") {
    auto pts = sys.sample(parse_region(sys, P.get("region", "whole")),
                          (int)P.get_ll("count", 10), seed);
    json arr = json::array();
    for (auto& p : pts) arr.push_back(sys.encode_point(p));
    r["points"] = arr;
  } else if (op == "gamma-ball" || op == "phi-ball") {
    auto x = sys.parse_point(P.require("point"));
    long long T = P.require_ll("horizon");
    auto b = op == "phi-ball"
                 ? phi_ball(sys, x, P.require_rat("delta"), T, (int)P.get_ll("budget", 512),
                            seed)
                 : gamma_ball(sys, x, P.require_rat("delta"), WindowSpec::two_sided(T),
                              (int)P.get_ll("budget", 512), seed);
    r["ball"] = ball_json(sys, b);
  } else if (op == "gamma-subgroup-ball") {
    auto b = gamma_subgroup_ball(sys, sys.parse_point(P.require("point")),
                                 P.require_rat("delta"), P.require_ll("m"),
                                 P.require_ll("horizon"), (int)P.get_ll("budget", 512), seed);
    r["ball"] = ball_json(sys, b);
  } else if (op == "pointwise-expansivity") {
    auto grid = P.has("delta-grid") ? parse_rat_list(P.require("delta-grid"))
                                    : default_delta_grid();
    auto res = pointwise_expansivity_verdict(sys, sys.parse_point(P.require("point")), grid,
                                             P.require_ll("horizon"),
                                             (int)P.get_ll("budget", 512), seed);
    from_verdict(res.verdict);
    if (res.delta_x) r["delta_x"] = rat_to_string(*res.delta_x);
  } else if (op == "n-expansive-cardinality") {
    auto res = n_expansive_cardinality(sys, sys.parse_point(P.require("point")),
                                       P.require_rat("delta"), P.require_ll("horizon"),
                                       (int)P.get_ll("budget", 512), seed);
    r["kind"] = res.kind == CardinalityResult::Kind::Exact        ? "exact"
                : res.kind == CardinalityResult::Kind::LowerBound ? "lower_bound"
                                                                  : "infinite";
    if (res.kind != CardinalityResult::Kind::Infinite) r["count"] = res.count;
    if (res.epsilon_x) r["epsilon_x"] = rat_to_string(*res.epsilon_x);
    if (!res.certificate.is_null()) r["certificate"] = res.certificate;
  } else if (op == "mu-generator-check") {
    std::vector<Region> cover;
    for (auto& part : split(P.require("cover"), ';'))
      cover.push_back(parse_region(sys, trim(part)));
    from_verdict(mu_generator_check(sys, cover, sys.parse_point(P.require("point")),
                                    parse_measure(P.require("measure")),
                                    P.require_ll("horizon")));
  } else if (op == "measure-of-ball") {
    auto b = gamma_ball(sys, sys.parse_point(P.require("point")), P.require_rat("delta"),
                        WindowSpec::two_sided(P.require_ll("horizon")),
                        (int)P.get_ll("budget", 512), seed);
    auto m = measure_of_ball(sys, parse_measure(P.require("measure")), b);
    if (m.exact) r["exact_measure"] = rat_to_string(*m.exact);
    r["estimate"] = m.estimate;
    r["half_width_95"] = m.half_width_95;
  } else if (op == "converging-semiorbit") {
    from_verdict(converging_semiorbit_check(sys, sys.parse_point(P.require("point")),
                                            P.require_ll("horizon"), P.require_rat("tol")));
  } else if (op == "asymptotic-pair") {
    from_verdict(asymptotic_pair_check(
        sys, sys.parse_point(P.require("point")), sys.parse_point(P.require("p")),
        sys.parse_point(P.require("q")), P.require_ll("horizon"), P.require_rat("tol")));
  } else if (op == "local-stable" || op == "local-unstable") {
    auto y = sys.parse_point(P.require("point"));
    auto x = sys.parse_point(P.require("x"));
    auto v = op == "local-stable"
                 ? local_stable_membership(sys, y, x, P.require_rat("delta"),
                                           P.require_ll("horizon"))
                 : local_unstable_membership(sys, y, x, P.require_rat("delta"),
                                             P.require_ll("horizon"));
    from_verdict(v);
  } else if (op == "sink-check") {
    from_verdict(sink_check(sys, sys.parse_point(P.require("point")), P.require_rat("delta"),
                            P.require_ll("horizon"), (int)P.get_ll("budget", 512), seed));
  } else if (op == "canonical-coordinates") {
    auto grid = P.has("delta-grid") ? parse_rat_list(P.require("delta-grid"))
                                    : default_delta_grid();
    from_verdict(canonical_coordinates_check(sys, P.require_rat("epsilon"), grid,
                                             (int)P.get_ll("pairs", 16),
                                             P.require_ll("horizon"), seed));
  } else if (op == "periodic-restriction-expansivity") {
    auto grid = P.has("delta-grid") ? parse_rat_list(P.require("delta-grid"))
                                    : default_delta_grid();
    from_verdict(periodic_restriction_expansivity(sys, grid, P.require_ll("period-bound"),
                                                  P.get_ll("horizon", 16)));
  } else if (op == "perturbed-orbit") {
    auto po = perturbed_orbit(sys, sys.parse_point(P.require("point")),
                              P.require_rat("delta"), (int)P.require_ll("length"), seed);
    json pts = json::array();
    for (auto& p : po.points) pts.push_back(sys.encode_point(p));
    r["delta"] = rat_to_string(po.delta);
    r["points"] = pts;
  } else if (op == "trace") {
    std::vector<PointValue> pts;
    for (auto& enc : split(P.require("points"), ';'))
      pts.push_back(sys.parse_point(trim(enc)));
    auto po = make_pseudo_orbit(sys, P.require_rat("delta"), std::move(pts));
    auto out = trace(sys, po, P.require_rat("epsilon"), seed);
    r = trace_outcome_json(sys, out);
    code = trace_succeeded(out) ? 0
           : std::get<TraceFailure>(out).certified ? 1
                                                   : 2;
  } else if (op == "shadowable-point") {
    auto grid = P.has("delta-grid") ? parse_rat_list(P.require("delta-grid"))
                                    : default_delta_grid();
    from_verdict(shadowable_point_verdict(sys, sys.parse_point(P.require("point")),
                                          P.require_rat("epsilon"), grid,
                                          (int)P.get_ll("trials", 8),
                                          (int)P.get_ll("length", 16), seed));
  } else if (op == "mixing-transition-time") {
    auto res = mixing_transition_time(sys, parse_region(sys, P.require("u")),
                                      parse_region(sys, P.require("v")),
                                      P.get_ll("n-max", 24));
    switch (res.kind) {
      case TransitionResult::Kind::Found:
        r["found"] = true;
        r["N"] = res.N;
        code = 0;
        break;
      case TransitionResult::Kind::CertifiedNever:
        r["found"] = false;
        r["certificate"] = res.certificate;
        code = 1;
        break;
      case TransitionResult::Kind::Inconclusive:
        r["found"] = false;
        code = 2;
        break;
    }
    r["detail"] = res.detail;
  } else if (op == "mixing-point" || op == "transitive-point") {
    auto radii = P.has("radii") ? parse_rat_list(P.require("radii"))
                                : std::vector<Rat>{Rat(1, 2), Rat(1, 4), Rat(1, 8)};
    auto probes = default_probe_regions(sys, (int)P.get_ll("probes", 5), seed);
    auto v = op == "mixing-point"
                 ? mixing_point_verdict(sys, sys.parse_point(P.require("point")), radii,
                                        probes, P.get_ll("n-max", 24))
                 : transitive_point_verdict(sys, sys.parse_point(P.require("point")), radii,
                                            probes, P.get_ll("n-max", 24));
    from_verdict(v);
  } else if (op == "spec-trace-symbolic" || op == "spec-trace-glued") {
    Rat eps = P.require_rat("epsilon");
    auto spec = parse_segments(sys, P.require("segments"), P.require_ll("gap"), eps);
    TraceOutcome out =
        op == "spec-trace-symbolic"
            ? specification_trace_symbolic(sys, spec, P.get("periodic", "no") == "yes")
            : specification_trace_glued(sys, spec.segments.front().x, spec, seed);
    r = trace_outcome_json(sys, out);
    code = trace_succeeded(out) ? 0
           : std::get<TraceFailure>(out).certified ? 1
                                                   : 2;
  } else if (op == "specification-point") {
    auto grid = P.has("gap-grid") ? parse_ll_list(P.require("gap-grid"))
                                  : std::vector<long long>{P.get_ll("gap", 6)};
    long long max_m = 1;
    for (auto m : grid) max_m = std::max(max_m, m);
    from_verdict(specification_point_verdict(
        sys, sys.parse_point(P.require("point")), P.require_rat("epsilon"), grid,
        (int)P.get_ll("battery", 6), P.get_ll("horizon", 3 * max_m + 8), seed));
  } else if (op == "sensitivity-witness") {
    auto radii = P.has("radii") ? parse_rat_list(P.require("radii"))
                                : std::vector<Rat>{Rat(1, 4), Rat(1, 16), Rat(1, 32)};
    auto w = sensitivity_witness(sys, sys.parse_point(P.require("point")), radii,
                                 P.get_ll("horizon", 32), (int)P.get_ll("budget", 128), seed);
    if (w) {
      r["found"] = true;
      r["delta_x"] = rat_to_string(w->delta_x);
      r["witness"] = sys.encode_point(w->y);
      r["n"] = w->n;
      r["distance"] = rat_to_string(w->realized);
      code = 0;
    } else {
      r["found"] = false;
      code = 2;
    }
  } else if (op == "sensitivity-from-periodic") {
    auto x = sys.parse_point(P.require("point"));
    auto res = sensitivity_constant_from_periodic(
        sys, x, sys.parse_point(P.require("q")),
        ball(x, P.get_rat("radius", Rat(1, 4)), true), P.get_ll("horizon", 64), seed);
    r["ok"] = res.ok;
    if (res.ok) {
      r["eta"] = rat_to_string(res.eta);
      r["witness"] = res.witness;
      code = 0;
    } else {
      r["failure"] = res.failure;
      code = 2;
    }
  } else if (op == "dense-periodic") {
    auto radii = P.has("radii") ? parse_rat_list(P.require("radii"))
                                : std::vector<Rat>{Rat(1, 2), Rat(1, 4), Rat(1, 8)};
    from_verdict(dense_periodic_at_point(sys, sys.parse_point(P.require("point")), radii,
                                         P.get_ll("period-bound", 8), seed));
  } else if (op == "devaney-point") {
    auto radii = P.has("radii") ? parse_rat_list(P.require("radii"))
                                : std::vector<Rat>{Rat(1, 2), Rat(1, 4), Rat(1, 8)};
    auto probes = default_probe_regions(sys, (int)P.get_ll("probes", 5), seed);
    auto rep = devaney_point_verdict(sys, sys.parse_point(P.require("point")), radii, probes,
                                     P.get_ll("n-max", 24), P.get_ll("period-bound", 8),
                                     P.get_ll("horizon", 32), (int)P.get_ll("budget", 128),
                                     seed);
    r = verdict_to_json(rep.overall);
    r["sub_verdicts"] = {{"transitive", verdict_to_json(rep.transitive)},
                         {"dense_periodic", verdict_to_json(rep.dense_periodic)}};
    code = exit_code_for(rep.overall.outcome);
  } else if (op == "separated-set") {
    auto mode = P.get("mode", "greedy") == "exact" ? SeparationMode::ExactMaximum
                                                   : SeparationMode::GreedyMaximal;
    auto s = separated_set(sys, parse_region(sys, P.get("region", "whole")),
                           (int)P.get_ll("budget", 512), P.require_ll("n"),
                           P.require_rat("epsilon"), mode, seed);
    r["count"] = s.points.size();
    r["exact"] = s.exact;
    if (s.points.size() <= 64) {
      json pts = json::array();
      for (auto& p : s.points) pts.push_back(sys.encode_point(p));
      r["points"] = pts;
    }
  } else if (op == "entropy-estimate") {
    auto mode = P.get("mode", "greedy") == "exact" ? SeparationMode::ExactMaximum
                                                   : SeparationMode::GreedyMaximal;
    auto schedule = P.has("schedule") ? parse_rat_list(P.require("schedule"))
                                      : default_eps_schedule();
    auto est = entropy_estimate(sys, parse_region(sys, P.get("region", "whole")),
                                (int)P.get_ll("budget", 512), schedule,
                                P.require_ll("n-max"), mode, seed);
    json table = json::array();
    for (auto& row : est.table)
      table.push_back({{"epsilon", rat_to_string(row.epsilon)},
                       {"n", row.n},
                       {"count", row.count},
                       {"rate", row.rate}});
    r["table"] = table;
    r["fitted_rate"] = est.fitted_rate;
    r["fit_residual"] = est.fit_residual;
    r["best_epsilon"] = rat_to_string(est.best_epsilon);
    r["exact_fit"] = est.exact_fit;
    if (est.exact_fit) {
      r["exact_slope_log2"] = est.exact_slope_log2;
      r["exact_zero_residual"] = est.exact_zero_residual;
    }
  } else if (op == "entropy-certificate") {
    auto cert = entropy_certificate_from_spec_points(
        sys, sys.parse_point(P.require("x")), sys.parse_point(P.require("y")),
        P.require_rat("epsilon"), P.require_ll("gap"), P.require_ll("n"));
    r = entropy_certificate_to_json(sys, cert);
  } else {
    throw Error("SchemaViolation", "unknown operation '" + op + "'");
  }
  P.finish();
  return {r, code};
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  bool saw_schema = false;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("SchemaViolation", "expected key = value, got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "schema") {
      cfg.schema = std::stoi(value);
      saw_schema = true;
      if (cfg.schema != 1)
        throw Error("SchemaViolation", "unsupported schema version " + value);
    } else if (key == "operation") {
      cfg.operation = value;
    } else if (key == "system") {
      cfg.system_id = value;
    } else if (key.rfind("system.", 0) == 0) {
      cfg.system_params[key.substr(7)] = value;
    } else if (key == "seed") {
      cfg.seed = std::stoull(value);
    } else if (key == "format") {
      if (value != "json" && value != "csv")
        throw Error("SchemaViolation", "format must be json or csv");
      cfg.format = value;
    } else {
      cfg.params[key] = value;
    }
  }
  if (!saw_schema) throw Error("SchemaViolation", "missing 'schema = 1'");
  if (cfg.operation.empty()) throw Error("SchemaViolation", "missing 'operation'");
  if (cfg.system_id.empty()) throw Error("SchemaViolation", "missing 'system'");
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("ParseError", "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

RunReport run_experiment(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  auto sys = make_system(cfg.system_id, cfg.system_params);
  Params P{cfg.params, {}};
  auto res = dispatch(*sys, cfg.operation, P, cfg.seed);

  RunReport rep;
  json& j = rep.payload;
  j["schema"] = cfg.schema;
  j["tool"] = "pointdyn 0.1.0";
  json echo;
  echo["operation"] = cfg.operation;
  echo["system"] = cfg.system_id;
  for (auto& [k, v] : cfg.system_params) echo["system." + k] = v;
  for (auto& [k, v] : cfg.params) echo[k] = v;
  echo["seed"] = cfg.seed;
  j["config"] = echo;
  j["result"] = res.result;
  rep.exit_code = res.exit_code;
  rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
  return rep;
}

std::string report_csv(const json& payload) {
  std::ostringstream os;
  const json& res = payload.contains("result") ? payload.at("result") : payload;
  if (res.contains("table")) {
    os << "epsilon,n,count,rate\n";
    for (auto& row : res.at("table"))
      os << row.at("epsilon").get<std::string>() << "," << row.at("n") << ","
         << row.at("count") << "," << row.at("rate") << "\n";
    return os.str();
  }
  os << "key,value\n";
  for (auto& [k, v] : res.items()) os << k << "," << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  return os.str();
}

int verify_certificate_file(const std::string& path, std::string* message) {
  std::ifstream in(path);
  if (!in) {
    if (message) *message = "cannot open " + path;
    return 3;
  }
  json cert;
  try {
    in >> cert;
  } catch (const std::exception& e) {
    if (message) *message = std::string("parse error: ") + e.what();
    return 3;
  }
  std::vector<std::string> errors;
  bool ok = verify_entropy_certificate(cert, &errors);
  if (message) {
    if (ok) {
      *message = "certificate verified: every separation re-checked";
    } else {
      std::ostringstream os;
      os << "verification failed:";
      for (auto& e : errors) os << "\n  " << e;
      *message = os.str();
    }
  }
  return ok ? 0 : 1;
}

}  // namespace pdyn
