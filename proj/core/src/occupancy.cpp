// SPDX-License-Identifier: Apache-2.0
#include "chargesense/occupancy.hpp"

namespace chargesense {

OccupancyScale OccupancyScale::of(const Scenario& scenario) {
  return {scenario.arrival_rate(), scenario.demand().mean(), scenario.departure().mean()};
}

double mean_inverse_rate(const PricingScheme& scheme, std::span<const double> level_probabilities) {
  if (level_probabilities.size() != scheme.size()) {
    throw InvalidParameter("level_probabilities", "need one probability per service level");
  }
  double total = 0.0;
  for (std::size_t l = 0; l < scheme.size(); ++l) total += level_probabilities[l] / scheme.rate(l);
  return total;
}

OccupancyReport occupancy_from_probabilities(const OccupancyScale& scale, const PricingScheme& scheme,
                                             std::vector<double> level_probabilities) {
  OccupancyReport report;
  report.mean_inverse_rate = mean_inverse_rate(scheme, level_probabilities);
  report.level_probabilities = std::move(level_probabilities);
  report.mean_demand = scale.mean_demand;
  report.mean_completion = scale.mean_completion;
  report.expected_occupancy = scale.factor() * report.mean_inverse_rate;
  return report;
}

OccupancyReport expected_occupancy(const Scenario& scenario) {
  const auto& mix = scenario.subpopulations();
  if (mix) {
    const bool full_menu_only = mix->size() == 1 &&
                                mix->entry(0).subset == scenario.scheme().all_levels() &&
                                !mix->entry(0).impatience;
    if (!full_menu_only) {
      throw InvalidParameter("subpopulations",
                             "scenario has sub-populations; use the mixed occupancy");
    }
  }
  const auto pmf = rate_pmf(scenario.scheme(), scenario.impatience(), scenario.scheme().all_levels());
  return occupancy_from_probabilities(OccupancyScale::of(scenario), scenario.scheme(),
                                      pmf.probabilities);
}

RatePmf conditional_pmf(const Scenario& scenario, const SubPopulation& entry) {
  if (entry.impatience) return rate_pmf(scenario.scheme(), *entry.impatience, entry.subset);
  return rate_pmf(scenario.scheme(), scenario.impatience(), entry.subset);
}

OccupancyReport expected_occupancy_mixed(const Scenario& scenario) {
  const auto& mix = scenario.subpopulations();
  if (!mix) return expected_occupancy(scenario);

  const auto& scheme = scenario.scheme();
  std::vector<double> marginals(scheme.size(), 0.0);
  double inverse_rate = 0.0;
  for (const auto& entry : mix->entries()) {
    const auto pmf = conditional_pmf(scenario, entry);
    for (std::size_t l = 0; l < scheme.size(); ++l) marginals[l] += entry.share * pmf.probabilities[l];
    inverse_rate += entry.share * mean_inverse_rate(scheme, pmf.probabilities);
  }

  const auto scale = OccupancyScale::of(scenario);
  OccupancyReport report;
  report.mean_inverse_rate = inverse_rate;
  report.level_probabilities = std::move(marginals);
  report.mean_demand = scale.mean_demand;
  report.mean_completion = scale.mean_completion;
  report.expected_occupancy = scale.factor() * inverse_rate;
  return report;
}

OccupancyReport evaluate_occupancy(const Scenario& scenario) {
  return scenario.subpopulations() ? expected_occupancy_mixed(scenario) : expected_occupancy(scenario);
}

OccupancyError occupancy_error(double estimated, double truth) {
  OccupancyError out;
  out.estimated = estimated;
  out.truth = truth;
  out.delta = truth - estimated;
  if (estimated != 0.0) out.relative_to_estimated = out.delta / estimated;
  if (truth != 0.0) out.relative_to_true = out.delta / truth;
  return out;
}

OccupancyError occupancy_error(const OccupancyReport& estimated, const OccupancyReport& truth) {
  return occupancy_error(estimated.expected_occupancy, truth.expected_occupancy);
}

}  // namespace chargesense
