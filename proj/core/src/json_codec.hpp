// SPDX-License-Identifier: Apache-2.0
// Internal: nlohmann/json encoders shared by the CLI documents and the HTTP service.
#pragma once

#include <json.hpp>

#include "chargesense/choice.hpp"
#include "chargesense/model.hpp"
#include "chargesense/occupancy.hpp"
#include "chargesense/reproduce.hpp"
#include "chargesense/sensitivity.hpp"
#include "chargesense/simulator.hpp"

namespace chargesense::codec {

using nlohmann::json;

Scenario scenario_from_json(const json& document);
json scenario_to_json(const Scenario& scenario);
SimConfig sim_config_from_json(const json& document, const std::string& pointer);

struct SweepSpec {
  std::size_t value_index = 0;  // 0-based
  double from = 0.0;
  double to = 0.0;
};
/// {"index": 1-based, "from", "to"}.
SweepSpec sweep_spec_from_json(const json& document, const std::string& pointer);

json to_json(const OccupancyReport& report);
json to_json(const ChoiceRegions& regions, const PricingScheme& scheme);
json to_json(const SensitivityReport& report);
json to_json(const StepFunction& step);
json to_json(const SimResult& result);
json to_json(const OccupancyError& error);
json to_json(const ReproductionRecord& record);

/// Finite numbers pass through; infinities map to null.
json number_or_null(double value);

/// {"error": {...}} body for a caught exception, plus the HTTP status it maps to.
struct ErrorBody {
  int status;
  json body;
};
ErrorBody describe_exception(const std::exception& error);

}  // namespace chargesense::codec
