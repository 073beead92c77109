// SPDX-License-Identifier: Apache-2.0
#include "chargesense/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chargesense {

namespace {

std::string describe(double value) {
  std::ostringstream out;
  out.precision(17);
  out << value;
  return out.str();
}

const DiscreteImpatience& require_discrete(const Scenario& scenario) {
  const auto* discrete = scenario.discrete_impatience();
  if (!discrete) {
    throw InvalidParameter("impatience", "operation needs a discrete impatience distribution");
  }
  return *discrete;
}

// Resolves `boundary` to the matching finite boundary, or throws.
double match_boundary(const std::vector<double>& boundaries, double boundary) {
  for (double b : boundaries) {
    if (std::abs(b - boundary) <= kAmbiguityTolerance * std::max(std::abs(b), std::abs(boundary))) {
      return b;
    }
  }
  throw InvalidBoundary(describe(boundary) + " is not a boundary between two chosen levels");
}

double probe_offset(const std::vector<double>& boundaries, double boundary) {
  double gap = INFINITY;
  for (double b : boundaries) {
    if (b != boundary) gap = std::min(gap, std::abs(b - boundary));
  }
  if (std::isfinite(gap)) return 0.5 * gap;
  return std::max(1.0, std::abs(boundary));
}

}  // namespace

double worst_case_bound(const OccupancyScale& scale, const PricingScheme& scheme) {
  return scale.factor() * (1.0 / scheme.rate(0) - 1.0 / scheme.rate(scheme.size() - 1));
}

double worst_case_bound(double arrival_rate, const DemandModel& demand, const PricingScheme& scheme) {
  return worst_case_bound(OccupancyScale::of(arrival_rate, demand), scheme);
}

std::vector<double> grad_p(const OccupancyScale& scale, const PricingScheme& scheme,
                           std::span<const double> values) {
  validate_ambiguity(scheme, values, scheme.all_levels());
  const auto regions = thresholds(scheme);
  std::vector<double> gradient;
  gradient.reserve(values.size());
  for (std::size_t m = 0; m < values.size(); ++m) {
    const auto level = regions.classify(values[m]);
    if (!level) throw AmbiguousImpatience(m, 0, 0, "impatience value sits on a boundary");
    gradient.push_back(scale.factor() / scheme.rate(*level));
  }
  return gradient;
}

std::vector<double> grad_p(double arrival_rate, const DemandModel& demand, const PricingScheme& scheme,
                           const DiscreteImpatience& impatience) {
  return grad_p(OccupancyScale::of(arrival_rate, demand), scheme, impatience.values());
}

double jump_at_boundary(const OccupancyScale& scale, const PricingScheme& scheme, double mass,
                        double boundary) {
  const auto regions = thresholds(scheme);
  const auto boundaries = regions.boundaries();
  const double b = match_boundary(boundaries, boundary);
  const double eps = probe_offset(boundaries, b);
  const auto left = regions.classify(b - eps);
  const auto right = regions.classify(b + eps);
  if (!left || !right) throw InvalidBoundary("probe points around " + describe(b) + " unclassified");
  return scale.factor() * mass * (1.0 / scheme.rate(*left) - 1.0 / scheme.rate(*right));
}

double jump_at_boundary(double arrival_rate, const DemandModel& demand, const PricingScheme& scheme,
                        double mass, double boundary) {
  return jump_at_boundary(OccupancyScale::of(arrival_rate, demand), scheme, mass, boundary);
}

double jump_at_upper_threshold(const OccupancyScale& scale, const PricingScheme& scheme, double mass,
                               std::size_t level) {
  if (level + 1 >= scheme.size()) {
    throw InvalidBoundary("level " + std::to_string(level + 1) + " has no finite upper threshold");
  }
  const auto regions = thresholds(scheme);
  if (regions.is_dominated(level)) {
    throw InvalidBoundary("level " + std::to_string(level + 1) + " is dominated; its threshold " +
                          describe(regions.region(level).upper) + " is not a boundary");
  }
  return jump_at_boundary(scale, scheme, mass, regions.region(level).upper);
}

Region region_constancy_check(const Scenario& scenario, std::size_t value_index) {
  const auto& impatience = require_discrete(scenario);
  if (value_index >= impatience.size()) {
    throw InvalidParameter("value_index", "impatience index out of range");
  }
  const auto regions = thresholds(scenario.scheme());
  const double a = impatience.value(value_index);
  const auto level = regions.classify(a);
  if (!level) throw OnBoundary("impatience value " + describe(a) + " sits on a region boundary");
  return regions.region(*level);
}

std::vector<double> grad_pB(const OccupancyScale& scale, const PricingScheme& scheme,
                            const SubPopulationMix& mix, const DiscreteImpatience& inherited) {
  std::vector<double> gradient;
  gradient.reserve(mix.size());
  for (const auto& entry : mix.entries()) {
    const auto& impatience = entry.impatience ? *entry.impatience : inherited;
    validate_ambiguity(scheme, impatience, entry.subset);
    const auto regions = thresholds(scheme, entry.subset);
    gradient.push_back(scale.factor() *
                       weighted_inverse_rate(scheme, regions, impatience.masses(), impatience.values()));
  }
  return gradient;
}

std::vector<double> grad_pB(const Scenario& scenario) {
  const auto& mix = scenario.subpopulations();
  if (!mix) return {};
  const auto scale = OccupancyScale::of(scenario);
  std::vector<double> gradient;
  gradient.reserve(mix->size());
  for (const auto& entry : mix->entries()) {
    const auto pmf = conditional_pmf(scenario, entry);
    gradient.push_back(scale.factor() * mean_inverse_rate(scenario.scheme(), pmf.probabilities));
  }
  return gradient;
}

double d_occupancy_d_mean_theta(const Scenario& scenario) {
  const auto report = evaluate_occupancy(scenario);
  return scenario.arrival_rate() * report.mean_demand * report.mean_inverse_rate;
}

// ---------------------------------------------------------------------------

double StepFunction::value_at(double a) const {
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), a);
  return plateaus.at(static_cast<std::size_t>(it - breakpoints.begin()));
}

StepFunction sweep_impatience_value(const Scenario& scenario, std::size_t value_index, double range_lo,
                                    double range_hi) {
  const auto& impatience = require_discrete(scenario);
  if (value_index >= impatience.size()) {
    throw InvalidParameter("value_index", "impatience index out of range");
  }
  if (!std::isfinite(range_lo) || !std::isfinite(range_hi) || !(range_lo < range_hi)) {
    throw InvalidParameter("range", "sweep range must be finite with from < to");
  }
  const auto& scheme = scenario.scheme();
  const auto scale = OccupancyScale::of(scenario);

  // Each population whose impatience is the swept distribution contributes its
  // own region boundaries; populations with their own impatience are constant.
  struct Population {
    double share;
    ChoiceRegions regions;
    std::optional<double> fixed_inverse_rate;
  };
  std::vector<Population> populations;
  if (const auto& mix = scenario.subpopulations()) {
    for (const auto& entry : mix->entries()) {
      auto regions = thresholds(scheme, entry.subset);
      std::optional<double> fixed;
      if (entry.impatience) {
        fixed = weighted_inverse_rate(scheme, regions, entry.impatience->masses(),
                                      entry.impatience->values());
      }
      populations.push_back({entry.share, std::move(regions), fixed});
    }
  } else {
    populations.push_back({1.0, thresholds(scheme), std::nullopt});
  }

  std::vector<double> candidates;
  for (const auto& population : populations) {
    if (population.fixed_inverse_rate || population.share == 0.0) continue;
    for (double b : population.regions.boundaries()) {
      if (range_lo < b && b < range_hi) candidates.push_back(b);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::vector<double> values(impatience.values().begin(), impatience.values().end());
  const auto plateau_at = [&](double a) {
    values[value_index] = a;
    double inverse_rate = 0.0;
    for (const auto& population : populations) {
      const double conditional =
          population.fixed_inverse_rate
              ? *population.fixed_inverse_rate
              : weighted_inverse_rate(scheme, population.regions, impatience.masses(), values);
      inverse_rate += population.share * conditional;
    }
    return scale.factor() * inverse_rate;
  };

  StepFunction step;
  step.value_index = value_index;
  step.range_lo = range_lo;
  step.range_hi = range_hi;
  double left = range_lo;
  for (std::size_t s = 0; s <= candidates.size(); ++s) {
    const double right = s < candidates.size() ? candidates[s] : range_hi;
    const double plateau = plateau_at(0.5 * (left + right));
    if (step.plateaus.empty()) {
      step.plateaus.push_back(plateau);
    } else if (plateau != step.plateaus.back()) {
      step.breakpoints.push_back(left);
      step.plateaus.push_back(plateau);
    }
    left = right;
  }
  return step;
}

// ---------------------------------------------------------------------------

SensitivityReport sensitivity_report(const Scenario& scenario) {
  const auto scale = OccupancyScale::of(scenario);
  const auto& scheme = scenario.scheme();
  SensitivityReport report;
  report.worst_case_bound = worst_case_bound(scale, scheme);
  if (const auto* discrete = scenario.discrete_impatience()) {
    report.grad_p = grad_p(scale, scheme, discrete->values());
    const auto boundaries = thresholds(scheme).boundaries();
    for (std::size_t i = 0; i < discrete->size(); ++i) {
      for (double b : boundaries) {
        report.jumps.push_back({i, b, jump_at_boundary(scale, scheme, discrete->mass(i), b)});
      }
    }
  }
  report.grad_pB = grad_pB(scenario);
  report.d_occupancy_d_mean_theta = d_occupancy_d_mean_theta(scenario);
  return report;
}

}  // namespace chargesense
