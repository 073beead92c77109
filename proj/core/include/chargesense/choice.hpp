// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "chargesense/model.hpp"

namespace chargesense {

/// Two allowed levels cost the same for the given impatience (0-based indices).
class TieDetected : public AssumptionViolation {
 public:
  TieDetected(std::size_t level_k, std::size_t level_i, const std::string& message)
      : AssumptionViolation("TieDetected", message), level_k_(level_k), level_i_(level_i) {}
  std::size_t level_k() const noexcept { return level_k_; }
  std::size_t level_i() const noexcept { return level_i_; }

 private:
  std::size_t level_k_;
  std::size_t level_i_;
};

/// Open impatience interval (lower, upper) in $/hr; ends may be infinite.
struct Region {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool dominated() const { return !(lower < upper); }
  bool contains(double alpha) const { return lower < alpha && alpha < upper; }

  friend bool operator==(const Region&, const Region&) = default;
};

/// Per-level choice regions over a subset of the offered levels.
class ChoiceRegions {
 public:
  ChoiceRegions(LevelSet allowed, std::vector<Region> regions)
      : allowed_(allowed), regions_(std::move(regions)) {}

  LevelSet allowed() const { return allowed_; }
  std::size_t level_count() const { return regions_.size(); }
  /// Region of level k. Levels outside `allowed` report an empty region.
  const Region& region(std::size_t k) const { return regions_.at(k); }
  bool is_dominated(std::size_t k) const;

  /// The level whose open region contains alpha, if any (none on a boundary).
  std::optional<std::size_t> classify(double alpha) const;
  /// Sorted finite boundaries between consecutive non-dominated regions.
  std::vector<double> boundaries() const;
  /// Allowed levels with nonempty regions, ascending.
  std::vector<std::size_t> active_levels() const;

 private:
  LevelSet allowed_;
  std::vector<Region> regions_;
};

/// Cost of charging x kWh at the given level for a user valuing time at alpha $/hr.
double cost(const ServiceLevel& level, double x_kwh, double alpha);

/// Cost-minimizing level among `allowed`. Throws TieDetected when two allowed
/// levels cost the same within kAmbiguityTolerance relative.
std::size_t select_level(double x_kwh, double alpha, const PricingScheme& scheme, LevelSet allowed);

struct TieBrokenChoice {
  std::size_t level = 0;
  bool tie = false;
};

/// Total variant of select_level: near-ties go to the lower level and are flagged.
TieBrokenChoice select_level_tie_break(double x_kwh, double alpha, const PricingScheme& scheme,
                                       LevelSet allowed);

/// Choice regions for the sub-scheme induced by `allowed`.
ChoiceRegions thresholds(const PricingScheme& scheme, LevelSet allowed);
ChoiceRegions thresholds(const PricingScheme& scheme);

/// Levels in `allowed` that no user ever picks.
std::vector<std::size_t> dominated_levels(const PricingScheme& scheme, LevelSet allowed);

struct RatePmf {
  std::vector<double> probabilities;  // indexed by level
  LevelSet allowed;
};

RatePmf rate_pmf(const PricingScheme& scheme, const DiscreteImpatience& impatience, LevelSet allowed);
RatePmf rate_pmf(const PricingScheme& scheme, const MixtureImpatience& impatience, LevelSet allowed);
RatePmf rate_pmf(const PricingScheme& scheme, const Impatience& impatience, LevelSet allowed);

/// Sum over levels of mass-weighted indicators divided by the rate, treating the
/// masses as free coordinates: sum_m p_m * sum_l 1_l(a_m) / R^l. Values must
/// avoid region boundaries; throws AmbiguousImpatience otherwise.
double weighted_inverse_rate(const PricingScheme& scheme, const ChoiceRegions& regions,
                             std::span<const double> masses, std::span<const double> values);

}  // namespace chargesense
