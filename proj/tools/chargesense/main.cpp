// SPDX-License-Identifier: Apache-2.0
// chargesense: command-line front end for the multi-level pricing analytics.
//
// Exit codes: 0 ok, 1 validation failure, 2 reproduction record failed, 3 I/O.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <regex>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "chargesense/documents.hpp"
#include "chargesense/reproduce.hpp"
#include "chargesense/scenario_io.hpp"
#include "chargesense/sensitivity.hpp"
#include "chargesense/service.hpp"
#include "chargesense/simulator.hpp"

namespace cs = chargesense;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitReproduction = 2;
constexpr int kExitIo = 3;

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("chargesense");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("%^[%l]%$ %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("CHARGESENSE_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

void emit(const std::string& contents, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << contents;
    if (!contents.empty() && contents.back() != '\n') std::cout << '\n';
    std::cout.flush();
    if (!std::cout) throw cs::IoError("failed writing standard output");
    return;
  }
  std::string text = contents;
  if (!text.empty() && text.back() != '\n') text += '\n';
  cs::write_text_file(out_path, text);
  spdlog::info("wrote {}", out_path);
}

// "a[2]" -> 1 (0-based).
std::size_t parse_param(const std::string& param) {
  static const std::regex pattern(R"(a\[(\d+)\])");
  std::smatch match;
  if (!std::regex_match(param, match, pattern)) {
    throw cs::InvalidParameter("param", "expected a[i] with i numbered from 1, got \"" + param + "\"");
  }
  const auto index = std::stoul(match[1].str());
  if (index == 0) throw cs::InvalidParameter("param", "impatience values are numbered from 1");
  return index - 1;
}

void log_warnings(const cs::Scenario& scenario) {
  for (const auto& warning : scenario.warnings()) spdlog::warn("{}", warning);
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Multi-level EV charging pricing analytics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cs::kServiceVersion));

  std::string scenario_path;
  std::string out_path;
  std::string format = "json";

  auto* analyze = app.add_subcommand("analyze", "Occupancy and choice regions for a scenario file");
  bool with_sensitivity = false;
  analyze->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  analyze->add_flag("--sensitivity", with_sensitivity, "Include the sensitivity report (same as /v1/evaluate)");
  analyze->add_option("--out", out_path, "Write to file instead of stdout");

  auto* sensitivity = app.add_subcommand("sensitivity", "Worst-case bound, gradients and boundary jumps");
  sensitivity->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  sensitivity->add_option("--out", out_path, "Write to file instead of stdout");

  auto* sweep = app.add_subcommand("sweep", "Exact occupancy step function over one impatience value");
  std::string param;
  double from = 0.0;
  double to = 0.0;
  sweep->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  sweep->add_option("--param", param, "Impatience value to move, a[i] (numbered from 1)")->required();
  sweep->add_option("--from", from, "Range start")->required();
  sweep->add_option("--to", to, "Range end")->required();
  sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--out", out_path, "Write to file instead of stdout");

  auto* simulate = app.add_subcommand("simulate", "Discrete-event simulation compared with the analytic mean");
  cs::SimConfig config;
  double warmup = -1.0;
  std::string trace_path;
  simulate->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  simulate->add_option("--horizon", config.horizon_hours, "Simulated hours per replication")
      ->capture_default_str();
  simulate->add_option("--seed", config.seed, "Root seed")->capture_default_str();
  simulate->add_option("--replications", config.replications, "Independent replications")
      ->capture_default_str();
  simulate->add_option("--warmup", warmup, "Hours discarded before averaging (default 10% of horizon)");
  simulate->add_option("--trace", trace_path, "Write the replication-0 occupancy trace as CSV");
  simulate->add_option("--out", out_path, "Write to file instead of stdout");

  auto* reproduce = app.add_subcommand("reproduce", "Recompute the bundled case-study figures");
  reproduce->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  reproduce->add_option("--out", out_path, "Write to file instead of stdout");

  auto* serve = app.add_subcommand("serve", "Serve the /v1 HTTP API");
  std::string host = "127.0.0.1";
  int port = 8080;
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--port", port, "Port")->capture_default_str()->check(CLI::Range(0, 65535));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*analyze) {
      const auto scenario = cs::load_scenario_file(scenario_path);
      log_warnings(scenario);
      emit(with_sensitivity ? cs::evaluate_document(scenario) : cs::analyze_document(scenario), out_path);
    } else if (*sensitivity) {
      const auto scenario = cs::load_scenario_file(scenario_path);
      log_warnings(scenario);
      emit(cs::sensitivity_document(scenario), out_path);
    } else if (*sweep) {
      const auto scenario = cs::load_scenario_file(scenario_path);
      log_warnings(scenario);
      const auto step = cs::sweep_impatience_value(scenario, parse_param(param), from, to);
      emit(format == "csv" ? cs::step_function_csv(step) : cs::sweep_document(step), out_path);
    } else if (*simulate) {
      const auto scenario = cs::load_scenario_file(scenario_path);
      log_warnings(scenario);
      if (warmup >= 0.0) config.warmup_hours = warmup;
      config.validate();
      spdlog::info("simulating {} x {} h, seed {}", config.replications, config.horizon_hours, config.seed);
      const auto result = cs::simulate(scenario, config);
      if (result.tie_breaks > 0) spdlog::warn("{} near-tie choices broken toward the lower level", result.tie_breaks);
      if (!trace_path.empty()) {
        cs::write_text_file(trace_path, cs::trace_csv(cs::occupancy_trace(scenario, config)));
      }
      emit(cs::simulate_document(scenario, config, result), out_path);
    } else if (*reproduce) {
      const auto records = cs::reproduce();
      emit(format == "csv" ? cs::reproduction_csv(records) : cs::reproduction_document(records), out_path);
      for (const auto& r : records) {
        if (!r.passed) spdlog::error("{}: expected {} got {} (tolerance {})", r.name, r.expected, r.computed, r.tolerance);
      }
      return cs::all_passed(records) ? kExitOk : kExitReproduction;
    } else if (*serve) {
      cs::HttpService service;
      const int bound = service.bind(host, port);
      if (bound < 0) {
        spdlog::error("cannot bind {}:{}", host, port);
        return kExitIo;
      }
      spdlog::info("listening on {}:{}", host, bound);
      return service.listen() ? kExitOk : kExitIo;
    }
  } catch (const cs::IoError& e) {
    spdlog::error("{}", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << cs::error_document(e).body << '\n';
    return kExitValidation;
  }
  return kExitOk;
}
