#pragma once

#include "pdyn/system.hpp"
#include "pdyn/verdict.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace pdyn {

// key = value experiment description, schema version 1. Unknown keys are
// schema violations, not warnings.
struct ExperimentConfig {
  int schema = 1;
  std::string operation;
  std::string system_id;
  std::map<std::string, std::string> system_params;  // "system.<key>" entries
  std::map<std::string, std::string> params;         // operation parameters
  uint64_t seed = 0;
  std::string format = "json";  // json | csv
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

struct RunReport {
  json payload;        // config echo + results; byte-identical across reruns
  double wall_ms = 0;  // reported separately, never part of the payload
  int exit_code = 0;   // 0 holds/success, 1 fails-with-witness, 2 inconclusive
};

RunReport run_experiment(const ExperimentConfig& cfg);

// Canned batteries: paper-examples, invariants, entropy-table.
RunReport run_suite(const std::string& name, const std::string& out_dir);

// CSV rendering of a report payload (entropy tables and verdict summaries).
std::string report_csv(const json& payload);

int verify_certificate_file(const std::string& path, std::string* message);

}  // namespace pdyn
