#include "pdyn/runner.hpp"
#include "pdyn/system.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

void write_report(const pdyn::RunReport& rep, const std::string& out_dir,
                  const std::string& format, const std::string& stem) {
  std::string payload = format == "csv" ? pdyn::report_csv(rep.payload)
                                        : rep.payload.dump(2) + "\n";
  if (out_dir.empty()) {
    std::cout << payload;
  } else {
    std::filesystem::create_directories(out_dir);
    std::string ext = format == "csv" ? ".csv" : ".json";
    std::ofstream f(out_dir + "/" + stem + ext);
    f << payload;
    std::cout << "report written to " << out_dir << "/" << stem << ext << "\n";
  }
  std::cerr << "wall_ms " << rep.wall_ms << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pointdyn: pointwise dynamics workbench"};
  app.require_subcommand(1);

  // run
  std::string config_path, out_dir, format_flag;
  std::string epsilon_flag, gap_flag, segments_flag, horizon_flag;
  uint64_t seed_flag = 0;
  auto* run = app.add_subcommand("run", "run one experiment from a key=value config");
  run->add_option("--config", config_path, "config file path")->required();
  run->add_option("--out", out_dir, "output directory (stdout when omitted)");
  run->add_option("--format", format_flag, "json|csv (overrides config)");
  run->add_option("--epsilon", epsilon_flag, "override the epsilon parameter");
  run->add_option("--gap", gap_flag, "override the gap parameter");
  run->add_option("--segments", segments_flag, "override the segments parameter");
  run->add_option("--horizon", horizon_flag, "override the horizon parameter");
  auto* seed_opt = run->add_option("--seed", seed_flag, "override the seed");

  // verify-certificate
  std::string cert_path;
  auto* verify = app.add_subcommand("verify-certificate",
                                    "independently re-check a certificate file");
  verify->add_option("path", cert_path, "certificate JSON path")->required();

  // suite
  std::string suite_name, suite_out;
  auto* suite = app.add_subcommand("suite", "run a canned battery");
  suite->add_option("name", suite_name, "paper-examples | invariants | entropy-table")
      ->required();
  suite->add_option("--out", suite_out, "artifact directory");

  // systems
  auto* systems = app.add_subcommand("systems", "system zoo");
  auto* systems_list = systems->add_subcommand("list", "list known system ids");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      auto cfg = pdyn::parse_config_file(config_path);
      if (!format_flag.empty()) cfg.format = format_flag;
      if (!epsilon_flag.empty()) cfg.params["epsilon"] = epsilon_flag;
      if (!gap_flag.empty()) cfg.params["gap"] = gap_flag;
      if (!segments_flag.empty()) cfg.params["segments"] = segments_flag;
      if (!horizon_flag.empty()) cfg.params["horizon"] = horizon_flag;
      if (seed_opt->count() > 0) cfg.seed = seed_flag;
      auto rep = pdyn::run_experiment(cfg);
      write_report(rep, out_dir, cfg.format, "report");
      return rep.exit_code;
    }
    if (verify->parsed()) {
      std::string message;
      int code = pdyn::verify_certificate_file(cert_path, &message);
      std::cout << message << "\n";
      return code;
    }
    if (suite->parsed()) {
      auto rep = pdyn::run_suite(suite_name, suite_out);
      for (auto& row : rep.payload.at("rows"))
        std::cout << (row.at("pass").get<bool>() ? "[PASS] " : "[FAIL] ")
                  << row.at("name").get<std::string>()
                  << (row.at("note").get<std::string>().empty()
                          ? ""
                          : "  (" + row.at("note").get<std::string>() + ")")
                  << "\n";
      std::cout << rep.payload.at("failures").get<int>() << " failures\n";
      return rep.exit_code;
    }
    if (systems_list->parsed()) {
      for (auto& id : pdyn::system_ids()) std::cout << id << "\n";
      return 0;
    }
  } catch (const pdyn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
