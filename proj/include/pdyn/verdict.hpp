#pragma once

#include <json.hpp>

#include <string>

namespace pdyn {

using json = nlohmann::json;

// Three-valued finite-horizon outcome. "Holds" never claims more than the
// tested horizon unless `limit_certified` is set, in which case `detail`
// carries a machine-checkable certificate for the infinite-horizon statement.
enum class Outcome { Holds, Fails, Inconclusive };

std::string outcome_name(Outcome o);
Outcome outcome_from_name(const std::string& s);

struct Verdict {
  std::string operation;
  Outcome outcome = Outcome::Inconclusive;
  json params;            // delta, epsilon, horizon, seed, budgets ... (op-specific)
  json witness;           // null when absent; re-checkable payload otherwise
  json detail;            // certificates, per-step traces, sub-verdicts
  bool exact = false;     // computed entirely in exact arithmetic
  bool limit_certified = false;

  bool holds() const { return outcome == Outcome::Holds; }
  bool fails() const { return outcome == Outcome::Fails; }
};

json verdict_to_json(const Verdict& v);

inline Verdict make_verdict(std::string op, Outcome out, json params) {
  Verdict v;
  v.operation = std::move(op);
  v.outcome = out;
  v.params = std::move(params);
  return v;
}

}  // namespace pdyn
