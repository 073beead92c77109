// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <exception>
#include <string>
#include <vector>

#include "chargesense/model.hpp"
#include "chargesense/reproduce.hpp"
#include "chargesense/sensitivity.hpp"
#include "chargesense/simulator.hpp"

namespace chargesense {

// JSON documents shared by the command-line tool and the HTTP service, so both
// emit byte-identical output for identical inputs.

/// {"occupancy", "regions", "warnings"}
std::string analyze_document(const Scenario& scenario);
/// {"occupancy", "regions", "sensitivity", "warnings"}
std::string evaluate_document(const Scenario& scenario);
std::string sensitivity_document(const Scenario& scenario);
std::string sweep_document(const StepFunction& step);
/// {"result", "analytic", "comparison"}
std::string simulate_document(const Scenario& scenario, const SimConfig& config, const SimResult& result);
std::string reproduction_document(const std::vector<ReproductionRecord>& records);

/// {"error": {"code", "message", ...}} for a caught exception. status is the
/// HTTP status it maps to: 400 schema or parameter errors, 422 assumption
/// violations, 500 anything else.
struct ErrorDocument {
  int status = 500;
  std::string body;
};
ErrorDocument error_document(const std::exception& error);

// CSV (RFC 4180 style, header row first).

/// `breakpoint,plateau` rows preceded by one `#` comment line. The first row
/// carries the range start; each plateau holds on [breakpoint, next breakpoint).
std::string step_function_csv(const StepFunction& step);
std::string trace_csv(const std::vector<TracePoint>& trace);
std::string reproduction_csv(const std::vector<ReproductionRecord>& records);

}  // namespace chargesense
