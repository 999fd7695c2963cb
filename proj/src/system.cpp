#include "pdyn/system.hpp"

namespace pdyn {

std::vector<ExactInterval> System::interval_image(const ExactInterval&, long long) const {
  throw Error("CapabilityMissing", id() + " has no exact interval images");
}

std::vector<PointValue> System::periodic_points(long long) const {
  throw Error("CapabilityMissing", id() + " does not enumerate periodic points");
}

std::vector<PointValue> System::ball_candidates(const PointValue& x, const Rat& delta,
                                                int budget, uint64_t seed,
                                                bool* exhaustive) const {
  if (exhaustive) *exhaustive = false;
  auto pts = sample(ball(x, delta, false), budget, seed);
  pts.push_back(x);
  return pts;
}

std::optional<json> System::infinite_gamma_certificate(const PointValue&, const Rat&) const {
  return std::nullopt;
}

std::optional<json> System::escape_certificate(const ExactInterval&, const ExactInterval&) const {
  return std::nullopt;
}

double System::approx_value(const PointValue&) const {
  throw Error("CapabilityMissing", id() + " has no scalar value view");
}

double System::approx_map(double) const {
  throw Error("CapabilityMissing", id() + " has no scalar map view");
}

namespace detail {
SystemPtr make_full_shift(int k);
SystemPtr make_one_sided_shift(int k);
SystemPtr make_doubling_line(const Rat& window);
SystemPtr make_squaring();
SystemPtr make_tent();
SystemPtr make_identity_interval();
SystemPtr make_doubling_circle();
SystemPtr make_ex325(bool with_endpoints);
}  // namespace detail

SystemPtr make_system(const std::string& id, const std::map<std::string, std::string>& params) {
  auto get = [&](const std::string& key, const std::string& dflt) {
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
  };
  auto reject_unknown = [&](std::initializer_list<std::string> known) {
    for (const auto& [k, v] : params) {
      (void)v;
      bool ok = false;
      for (const auto& kn : known)
        if (k == kn) ok = true;
      if (!ok) throw Error("SchemaViolation", "unknown system parameter '" + k + "' for " + id);
    }
  };

  if (id == "shift") {
    reject_unknown({"alphabet"});
    return detail::make_full_shift(std::stoi(get("alphabet", "2")));
  }
  if (id == "oneshift") {
    reject_unknown({"alphabet"});
    return detail::make_one_sided_shift(std::stoi(get("alphabet", "2")));
  }
  if (id == "doubling-line") {
    reject_unknown({"window"});
    return detail::make_doubling_line(rat_from_string(get("window", "1048576")));
  }
  if (id == "squaring") {
    reject_unknown({});
    return detail::make_squaring();
  }
  if (id == "tent") {
    reject_unknown({});
    return detail::make_tent();
  }
  if (id == "identity") {
    reject_unknown({});
    return detail::make_identity_interval();
  }
  if (id == "doubling-circle") {
    reject_unknown({});
    return detail::make_doubling_circle();
  }
  if (id == "ex325x") {
    reject_unknown({});
    return detail::make_ex325(true);
  }
  if (id == "ex325y") {
    reject_unknown({});
    return detail::make_ex325(false);
  }
  if (id == "ex319") {
    reject_unknown({});
    return make_example_3_19(detail::make_full_shift(2), pv(BiSeq::periodic("01")), 2);
  }
  throw Error("SchemaViolation", "unknown system id '" + id + "'");
}

std::vector<std::string> system_ids() {
  return {"shift",           "oneshift", "doubling-line", "squaring", "tent",
          "identity",        "doubling-circle", "ex325x",  "ex325y",  "ex319"};
}

}  // namespace pdyn
