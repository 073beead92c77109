// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "chargesense/choice.hpp"
#include "chargesense/model.hpp"

namespace chargesense {

struct OccupancyReport {
  double expected_occupancy = 0.0;         // vehicles
  double mean_inverse_rate = 0.0;          // E[1/r], 1/kW
  std::vector<double> level_probabilities;  // marginal choice probability per level
  double mean_demand = 0.0;                // kWh
  double mean_completion = 1.0;            // E[theta]
};

/// lambda * E[x] * E[theta], the factor multiplying E[1/r] in every occupancy formula.
struct OccupancyScale {
  double arrival_rate = 0.0;
  double mean_demand = 0.0;
  double mean_completion = 1.0;

  static OccupancyScale of(const Scenario& scenario);
  static OccupancyScale of(double arrival_rate, const DemandModel& demand) {
    return {arrival_rate, demand.mean(), 1.0};
  }
  double factor() const { return arrival_rate * mean_demand * mean_completion; }
};

/// Mean inverse rate sum_l p_l / R^l for a per-level probability vector.
double mean_inverse_rate(const PricingScheme& scheme, std::span<const double> level_probabilities);

/// Occupancy for externally supplied choice probabilities.
OccupancyReport occupancy_from_probabilities(const OccupancyScale& scale, const PricingScheme& scheme,
                                             std::vector<double> level_probabilities);

/// Expected occupancy for a scenario where every user can choose every level.
/// A mix consisting of the full menu with share 1 is accepted; any other mix
/// throws InvalidParameter (use expected_occupancy_mixed).
OccupancyReport expected_occupancy(const Scenario& scenario);

/// Expected occupancy by total probability over sub-populations. Scenarios
/// without a mix are treated as a single full-menu population.
OccupancyReport expected_occupancy_mixed(const Scenario& scenario);

/// Dispatches to expected_occupancy or expected_occupancy_mixed.
OccupancyReport evaluate_occupancy(const Scenario& scenario);

/// Conditional choice PMF of one sub-population entry.
RatePmf conditional_pmf(const Scenario& scenario, const SubPopulation& entry);

struct OccupancyError {
  double estimated = 0.0;
  double truth = 0.0;
  double delta = 0.0;  // truth - estimated
  std::optional<double> relative_to_estimated;  // unset when estimated == 0
  std::optional<double> relative_to_true;       // unset when truth == 0
};

OccupancyError occupancy_error(const OccupancyReport& estimated, const OccupancyReport& truth);
OccupancyError occupancy_error(double estimated, double truth);

}  // namespace chargesense
