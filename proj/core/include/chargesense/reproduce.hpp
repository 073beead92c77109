// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "chargesense/model.hpp"

namespace chargesense {

/// One reproduced figure of the case study.
struct ReproductionRecord {
  std::string name;
  double expected = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;  // absolute
  bool passed = false;     // |computed - expected| <= tolerance
  std::string note;
};

ReproductionRecord make_record(std::string name, double expected, double computed, double tolerance,
                               std::string note = {});

/// Bundled case-study fixtures: "scheme-a-estimated", "scheme-a-true",
/// "scheme-b-estimated", "scheme-b-true", "scheme-a-heterogeneous" and
/// "scheme-b-heterogeneous". Throws std::out_of_range for other names.
std::vector<std::string> bundled_fixture_names();
std::string_view bundled_fixture_json(std::string_view name);
Scenario bundled_fixture(std::string_view name);

/// Runs every analytic case-study comparison. Deterministic; no simulation.
std::vector<ReproductionRecord> reproduce();

bool all_passed(const std::vector<ReproductionRecord>& records);

}  // namespace chargesense
