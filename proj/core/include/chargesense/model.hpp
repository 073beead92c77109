// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace chargesense {

// Simplex sums (masses, weights, shares) are accepted within this absolute band.
inline constexpr double kSimplexTolerance = 1e-12;
// Relative band for an impatience value colliding with a pairwise price ratio.
inline constexpr double kAmbiguityTolerance = 1e-9;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Base class for every rejection raised while validating model inputs.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Malformed numeric input (negative rate, masses off the simplex, ...).
class InvalidParameter : public ValidationError {
 public:
  InvalidParameter(std::string field, const std::string& message)
      : ValidationError("InvalidParameter", message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A modelling assumption of the pricing model does not hold.
class AssumptionViolation : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A faster level is not strictly more expensive.
class MonotonicityViolation : public AssumptionViolation {
 public:
  MonotonicityViolation(std::size_t slower, std::size_t faster, const std::string& message)
      : AssumptionViolation("MonotonicityViolation", message), slower_(slower), faster_(faster) {}
  std::size_t slower() const noexcept { return slower_; }
  std::size_t faster() const noexcept { return faster_; }

 private:
  std::size_t slower_;
  std::size_t faster_;
};

class DuplicateLevel : public AssumptionViolation {
 public:
  DuplicateLevel(std::size_t first, std::size_t second, const std::string& message)
      : AssumptionViolation("DuplicateLevel", message), first_(first), second_(second) {}
  std::size_t first() const noexcept { return first_; }
  std::size_t second() const noexcept { return second_; }

 private:
  std::size_t first_;
  std::size_t second_;
};

/// An impatience value makes two levels equally attractive. Indices are 0-based.
class AmbiguousImpatience : public AssumptionViolation {
 public:
  AmbiguousImpatience(std::size_t value_index, std::size_t level_k, std::size_t level_i,
                      const std::string& message)
      : AssumptionViolation("AmbiguousImpatience", message),
        value_index_(value_index),
        level_k_(level_k),
        level_i_(level_i) {}
  std::size_t value_index() const noexcept { return value_index_; }
  std::size_t level_k() const noexcept { return level_k_; }
  std::size_t level_i() const noexcept { return level_i_; }

 private:
  std::size_t value_index_;
  std::size_t level_k_;
  std::size_t level_i_;
};

// ---------------------------------------------------------------------------
// Level subsets
// ---------------------------------------------------------------------------

inline constexpr std::size_t kMaxLevels = 32;

/// Set of 0-based service-level indices, stored as a bitmask.
class LevelSet {
 public:
  constexpr LevelSet() = default;
  static constexpr LevelSet from_mask(std::uint32_t mask) { return LevelSet(mask); }
  static LevelSet all(std::size_t level_count);
  static LevelSet single(std::size_t level);
  static LevelSet of(std::span<const std::size_t> levels);

  constexpr bool contains(std::size_t level) const {
    return level < kMaxLevels && ((mask_ >> level) & 1u) != 0;
  }
  constexpr bool empty() const { return mask_ == 0; }
  std::size_t size() const;
  constexpr std::uint32_t mask() const { return mask_; }
  /// Ascending member indices.
  std::vector<std::size_t> members() const;
  bool is_subset_of(std::size_t level_count) const;

  friend constexpr bool operator==(LevelSet, LevelSet) = default;

 private:
  constexpr explicit LevelSet(std::uint32_t mask) : mask_(mask) {}
  std::uint32_t mask_ = 0;
};

// ---------------------------------------------------------------------------
// Pricing
// ---------------------------------------------------------------------------

struct ServiceLevel {
  double rate_kw = 0.0;        // charging rate
  double price_per_kwh = 0.0;  // energy price

  friend bool operator==(const ServiceLevel&, const ServiceLevel&) = default;
};

/// Service levels sorted by ascending rate, with strictly ascending prices.
class PricingScheme {
 public:
  PricingScheme() = default;
  /// Sorts by rate and checks that faster levels are strictly more expensive.
  /// Throws DuplicateLevel, MonotonicityViolation or InvalidParameter.
  static PricingScheme validate(std::vector<ServiceLevel> levels,
                                std::optional<double> max_rate_kw = std::nullopt);

  std::size_t size() const { return levels_.size(); }
  const ServiceLevel& level(std::size_t index) const { return levels_.at(index); }
  std::span<const ServiceLevel> levels() const { return levels_; }
  double rate(std::size_t index) const { return levels_.at(index).rate_kw; }
  double price(std::size_t index) const { return levels_.at(index).price_per_kwh; }
  LevelSet all_levels() const { return LevelSet::all(levels_.size()); }

  friend bool operator==(const PricingScheme&, const PricingScheme&) = default;

 private:
  std::vector<ServiceLevel> levels_;
};

/// Impatience value at which a user is indifferent between levels k and i:
/// (V^i - V^k) / (1/R^k - 1/R^i).
double indifference_ratio(const PricingScheme& scheme, std::size_t k, std::size_t i);

// ---------------------------------------------------------------------------
// Impatience
// ---------------------------------------------------------------------------

/// Finite-support impatience distribution with strictly increasing values ($/hr).
class DiscreteImpatience {
 public:
  DiscreteImpatience() = default;
  /// Canonicalizes by sorting on value; rejects duplicates and off-simplex masses.
  static DiscreteImpatience validate(std::vector<double> values, std::vector<double> masses);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<const double> masses() const { return masses_; }
  double value(std::size_t i) const { return values_.at(i); }
  double mass(std::size_t i) const { return masses_.at(i); }
  bool has_negative_values() const;

  friend bool operator==(const DiscreteImpatience&, const DiscreteImpatience&) = default;

 private:
  std::vector<double> values_;
  std::vector<double> masses_;
};

struct MixtureComponent {
  double weight = 0.0;
  double mean = 0.0;
  double stddev = 1.0;

  friend bool operator==(const MixtureComponent&, const MixtureComponent&) = default;
};

/// Gaussian mixture truncated to [lo, hi] and renormalized by its mass there.
class MixtureImpatience {
 public:
  MixtureImpatience() = default;
  static MixtureImpatience validate(std::vector<MixtureComponent> components, double lo, double hi);

  std::span<const MixtureComponent> components() const { return components_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  /// Mass of the untruncated mixture on [lo, hi].
  double truncation_mass() const { return truncation_mass_; }

  /// Untruncated mixture CDF.
  double raw_cdf(double x) const;
  /// Truncated density.
  double density(double x) const;
  /// Truncated CDF; 0 below lo, 1 above hi.
  double cdf(double x) const;
  /// Truncated probability of the open interval (a, b); infinite ends allowed.
  double interval_probability(double a, double b) const;

  friend bool operator==(const MixtureImpatience&, const MixtureImpatience&) = default;

 private:
  std::vector<MixtureComponent> components_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double truncation_mass_ = 1.0;
};

using Impatience = std::variant<DiscreteImpatience, MixtureImpatience>;

/// Standard normal CDF.
double normal_cdf(double z);

// ---------------------------------------------------------------------------
// Demand, sub-populations, early departure
// ---------------------------------------------------------------------------

/// Uniform energy demand on [x_min, x_max] kWh.
class DemandModel {
 public:
  DemandModel() = default;
  static DemandModel uniform(double x_min, double x_max);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double mean() const { return 0.5 * (x_min_ + x_max_); }

  friend bool operator==(const DemandModel&, const DemandModel&) = default;

 private:
  double x_min_ = 0.0;
  double x_max_ = 0.0;
};

struct SubPopulation {
  LevelSet subset;
  double share = 0.0;
  // Absent means the scenario-wide impatience applies.
  std::optional<DiscreteImpatience> impatience;

  friend bool operator==(const SubPopulation&, const SubPopulation&) = default;
};

class SubPopulationMix {
 public:
  SubPopulationMix() = default;
  static SubPopulationMix validate(std::vector<SubPopulation> entries, std::size_t level_count);

  std::size_t size() const { return entries_.size(); }
  std::span<const SubPopulation> entries() const { return entries_; }
  const SubPopulation& entry(std::size_t i) const { return entries_.at(i); }

  friend bool operator==(const SubPopulationMix&, const SubPopulationMix&) = default;

 private:
  std::vector<SubPopulation> entries_;
};

enum class DepartureKind { kAlwaysComplete, kPointMass, kUniformInterval };

/// Fraction of requested energy a user receives before leaving, supported on [0, 1].
class EarlyDeparture {
 public:
  EarlyDeparture() = default;
  static EarlyDeparture always_complete();
  static EarlyDeparture point_mass(double mean);
  static EarlyDeparture uniform_interval(double lo, double hi);

  DepartureKind kind() const { return kind_; }
  double mean() const { return mean_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  friend bool operator==(const EarlyDeparture&, const EarlyDeparture&) = default;

 private:
  DepartureKind kind_ = DepartureKind::kAlwaysComplete;
  double mean_ = 1.0;
  double lo_ = 1.0;
  double hi_ = 1.0;
};

const char* to_string(DepartureKind kind);

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

struct ScenarioInput {
  double arrival_rate = 0.0;  // EVs/hr
  DemandModel demand = DemandModel::uniform(1.0, 2.0);
  Impatience impatience;
  PricingScheme scheme;
  std::optional<SubPopulationMix> subpopulations;
  EarlyDeparture departure = EarlyDeparture::always_complete();
};

class Scenario {
 public:
  /// Checks the cross-field invariants, including impatience ambiguity.
  static Scenario validate(ScenarioInput input);
  /// Re-validates an existing scenario; returns an identical value.
  static Scenario validate(const Scenario& scenario);

  double arrival_rate() const { return input_.arrival_rate; }
  const DemandModel& demand() const { return input_.demand; }
  const Impatience& impatience() const { return input_.impatience; }
  const PricingScheme& scheme() const { return input_.scheme; }
  const std::optional<SubPopulationMix>& subpopulations() const { return input_.subpopulations; }
  const EarlyDeparture& departure() const { return input_.departure; }
  const ScenarioInput& input() const { return input_; }

  /// Discrete impatience, or nullptr for the mixture case.
  const DiscreteImpatience* discrete_impatience() const;

  /// Non-fatal findings (negative impatience values).
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Copy with a different early-departure model.
  Scenario with_departure(EarlyDeparture departure) const;
  /// Copy with a different arrival rate.
  Scenario with_arrival_rate(double arrival_rate) const;

  friend bool operator==(const Scenario& a, const Scenario& b) {
    return a.input_.arrival_rate == b.input_.arrival_rate && a.input_.demand == b.input_.demand &&
           a.input_.impatience == b.input_.impatience && a.input_.scheme == b.input_.scheme &&
           a.input_.subpopulations == b.input_.subpopulations &&
           a.input_.departure == b.input_.departure;
  }

 private:
  explicit Scenario(ScenarioInput input) : input_(std::move(input)) {}
  ScenarioInput input_;
  std::vector<std::string> warnings_;
};

/// Rejects impatience values equal (to kAmbiguityTolerance) to the indifference
/// ratio of any pair of levels in `allowed`.
void validate_ambiguity(const PricingScheme& scheme, const DiscreteImpatience& impatience,
                        LevelSet allowed);
void validate_ambiguity(const PricingScheme& scheme, const DiscreteImpatience& impatience);
/// Same check over raw value lists (used by sweeps that move a single value).
void validate_ambiguity(const PricingScheme& scheme, std::span<const double> values,
                        LevelSet allowed);

}  // namespace chargesense
