// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "chargesense/choice.hpp"
#include "chargesense/model.hpp"
#include "chargesense/occupancy.hpp"

namespace chargesense {

class InvalidBoundary : public ValidationError {
 public:
  explicit InvalidBoundary(const std::string& message) : ValidationError("InvalidBoundary", message) {}
};

/// The probed impatience value sits exactly on a choice-region boundary.
class OnBoundary : public AssumptionViolation {
 public:
  explicit OnBoundary(const std::string& message) : AssumptionViolation("OnBoundary", message) {}
};

// Worst-case occupancy discrepancy between any two impatience characterizations:
// scale * (1/R^1 - 1/R^L).
double worst_case_bound(const OccupancyScale& scale, const PricingScheme& scheme);
double worst_case_bound(double arrival_rate, const DemandModel& demand, const PricingScheme& scheme);

/// Gradient of expected occupancy with respect to the impatience masses. Entry m
/// is scale * 1/R^{level containing a_m}; independent of the masses themselves.
std::vector<double> grad_p(const OccupancyScale& scale, const PricingScheme& scheme,
                           std::span<const double> values);
std::vector<double> grad_p(double arrival_rate, const DemandModel& demand, const PricingScheme& scheme,
                           const DiscreteImpatience& impatience);

/// Occupancy just below minus just above a region boundary when one value of
/// mass `mass` crosses it. `boundary` must match (1e-9 relative) a finite
/// boundary between two non-dominated regions; throws InvalidBoundary otherwise.
double jump_at_boundary(const OccupancyScale& scale, const PricingScheme& scheme, double mass,
                        double boundary);
double jump_at_boundary(double arrival_rate, const DemandModel& demand, const PricingScheme& scheme,
                        double mass, double boundary);
/// Jump across the upper threshold of level k (0-based, k < L-1).
double jump_at_upper_threshold(const OccupancyScale& scale, const PricingScheme& scheme, double mass,
                               std::size_t level);

/// Open region containing impatience value i, on which d E[eta] / d a_i = 0.
/// Throws OnBoundary when a_i is on a boundary.
Region region_constancy_check(const Scenario& scenario, std::size_t value_index);

/// Gradient of expected occupancy with respect to sub-population shares: the
/// conditional occupancy per unit share of each entry.
std::vector<double> grad_pB(const OccupancyScale& scale, const PricingScheme& scheme,
                            const SubPopulationMix& mix, const DiscreteImpatience& inherited);
std::vector<double> grad_pB(const Scenario& scenario);

/// d E[eta] / d E[theta] = lambda E[x] E[1/r].
double d_occupancy_d_mean_theta(const Scenario& scenario);

/// Exact piecewise-constant occupancy as a single impatience value moves over
/// [range_lo, range_hi] with the rest of the distribution held fixed.
struct StepFunction {
  std::size_t value_index = 0;  // 0-based
  double range_lo = 0.0;
  double range_hi = 0.0;
  std::vector<double> breakpoints;  // ascending, strictly inside the range
  std::vector<double> plateaus;     // breakpoints.size() + 1 values

  /// Plateau holding at a (undefined exactly at a breakpoint; returns the right one).
  double value_at(double a) const;
};

StepFunction sweep_impatience_value(const Scenario& scenario, std::size_t value_index, double range_lo,
                                    double range_hi);

struct BoundaryJump {
  std::size_t value_index = 0;
  double boundary = 0.0;
  double magnitude = 0.0;
};

struct SensitivityReport {
  double worst_case_bound = 0.0;
  std::vector<double> grad_p;   // empty for mixture impatience
  std::vector<double> grad_pB;  // empty without sub-populations
  std::vector<BoundaryJump> jumps;
  double d_occupancy_d_mean_theta = 0.0;
};

/// Aggregates every sensitivity quantity that applies to the scenario. Jumps are
/// listed for each discrete value and each finite full-menu boundary.
SensitivityReport sensitivity_report(const Scenario& scenario);

}  // namespace chargesense
