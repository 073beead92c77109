// SPDX-License-Identifier: Apache-2.0
#include "chargesense/documents.hpp"

#include <fmt/format.h>

#include "chargesense/occupancy.hpp"
#include "json_codec.hpp"

namespace chargesense {

namespace {

using codec::json;

// Shortest round-trip representation, matching the JSON documents.
std::string csv_number(double value) { return json(value).dump(); }

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

json analyze_json(const Scenario& scenario) {
  return {{"occupancy", codec::to_json(evaluate_occupancy(scenario))},
          {"regions", codec::to_json(thresholds(scenario.scheme()), scenario.scheme())},
          {"warnings", scenario.warnings()}};
}

}  // namespace

std::string analyze_document(const Scenario& scenario) { return analyze_json(scenario).dump(2); }

std::string evaluate_document(const Scenario& scenario) {
  auto doc = analyze_json(scenario);
  doc["sensitivity"] = codec::to_json(sensitivity_report(scenario));
  return doc.dump(2);
}

std::string sensitivity_document(const Scenario& scenario) {
  return codec::to_json(sensitivity_report(scenario)).dump(2);
}

std::string sweep_document(const StepFunction& step) { return codec::to_json(step).dump(2); }

std::string simulate_document(const Scenario& scenario, const SimConfig& config, const SimResult& result) {
  const auto analytic = evaluate_occupancy(scenario);
  json comparison = codec::to_json(occupancy_error(analytic.expected_occupancy, result.time_average_occupancy));
  comparison["standard_errors"] =
      result.standard_error > 0.0
          ? json((result.time_average_occupancy - analytic.expected_occupancy) / result.standard_error)
          : json(nullptr);
  return json{{"config",
               {{"horizon", config.horizon_hours},
                {"seed", config.seed},
                {"replications", config.replications},
                {"warmup", config.warmup()}}},
              {"result", codec::to_json(result)},
              {"analytic", codec::to_json(analytic)},
              {"comparison", std::move(comparison)}}
      .dump(2);
}

std::string reproduction_document(const std::vector<ReproductionRecord>& records) {
  json list = json::array();
  for (const auto& record : records) list.push_back(codec::to_json(record));
  return json{{"records", std::move(list)}, {"all_passed", all_passed(records)}}.dump(2);
}

ErrorDocument error_document(const std::exception& error) {
  auto described = codec::describe_exception(error);
  return {described.status, described.body.dump(2)};
}

std::string step_function_csv(const StepFunction& step) {
  std::string out = fmt::format(
      "# a[{}] swept over [{}, {}]; each plateau holds on [breakpoint, next breakpoint)\n",
      step.value_index + 1, csv_number(step.range_lo), csv_number(step.range_hi));
  out += "breakpoint,plateau\n";
  out += csv_number(step.range_lo) + "," + csv_number(step.plateaus.front()) + "\n";
  for (std::size_t i = 0; i < step.breakpoints.size(); ++i) {
    out += csv_number(step.breakpoints[i]) + "," + csv_number(step.plateaus[i + 1]) + "\n";
  }
  return out;
}

std::string trace_csv(const std::vector<TracePoint>& trace) {
  std::string out = "time,occupancy\n";
  for (const auto& point : trace) out += csv_number(point.time_hours) + "," + std::to_string(point.occupancy) + "\n";
  return out;
}

std::string reproduction_csv(const std::vector<ReproductionRecord>& records) {
  std::string out = "name,expected,computed,tolerance,passed,note\n";
  for (const auto& r : records) {
    out += csv_field(r.name) + "," + csv_number(r.expected) + "," + csv_number(r.computed) + "," +
           csv_number(r.tolerance) + "," + (r.passed ? "true" : "false") + "," + csv_field(r.note) + "\n";
  }
  return out;
}

}  // namespace chargesense
