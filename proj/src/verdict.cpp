#include "pdyn/verdict.hpp"

#include "pdyn/errors.hpp"

namespace pdyn {

std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Holds: return "holds";
    case Outcome::Fails: return "fails";
    case Outcome::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Outcome outcome_from_name(const std::string& s) {
  if (s == "holds") return Outcome::Holds;
  if (s == "fails") return Outcome::Fails;
  if (s == "inconclusive") return Outcome::Inconclusive;
  throw Error("ParseError", "unknown outcome '" + s + "'");
}

json verdict_to_json(const Verdict& v) {
  json j;
  j["operation"] = v.operation;
  j["params"] = v.params.is_null() ? json::object() : v.params;
  j["outcome"] = outcome_name(v.outcome);
  if (!v.witness.is_null()) j["witness"] = v.witness;
  if (!v.detail.is_null()) j["detail"] = v.detail;
  j["exact"] = v.exact;
  j["limit_certified"] = v.limit_certified;
  return j;
}

}  // namespace pdyn
