// SPDX-License-Identifier: Apache-2.0
#include "chargesense/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

namespace chargesense {

namespace {

template <typename... Parts>
std::string concat(const Parts&... parts) {
  std::ostringstream out;
  out.precision(17);
  (out << ... << parts);
  return out.str();
}

void require_finite(double value, const std::string& field) {
  if (!std::isfinite(value)) {
    throw InvalidParameter(field, concat(field, " must be finite"));
  }
}

void require_simplex(std::span<const double> masses, const std::string& field) {
  double total = 0.0;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    require_finite(masses[i], concat(field, "[", i, "]"));
    if (masses[i] < 0.0) {
      throw InvalidParameter(concat(field, "[", i, "]"),
                             concat(field, "[", i, "] = ", masses[i], " is negative"));
    }
    total += masses[i];
  }
  if (std::abs(total - 1.0) > kSimplexTolerance) {
    throw InvalidParameter(field, concat(field, " sums to ", total, ", expected 1"));
  }
}

bool ratio_collides(double value, double ratio) {
  const double scale = std::max(std::abs(value), std::abs(ratio));
  return std::abs(value - ratio) <= kAmbiguityTolerance * scale;
}

}  // namespace

// ---------------------------------------------------------------------------

LevelSet LevelSet::all(std::size_t level_count) {
  if (level_count > kMaxLevels) {
    throw InvalidParameter("levels", concat("at most ", kMaxLevels, " service levels are supported"));
  }
  if (level_count == kMaxLevels) return LevelSet(~std::uint32_t{0});
  return LevelSet((std::uint32_t{1} << level_count) - 1u);
}

LevelSet LevelSet::single(std::size_t level) {
  if (level >= kMaxLevels) {
    throw InvalidParameter("subset", concat("level index ", level, " out of range"));
  }
  return LevelSet(std::uint32_t{1} << level);
}

LevelSet LevelSet::of(std::span<const std::size_t> levels) {
  std::uint32_t mask = 0;
  for (std::size_t level : levels) mask |= single(level).mask();
  return LevelSet(mask);
}

std::size_t LevelSet::size() const { return static_cast<std::size_t>(std::popcount(mask_)); }

std::vector<std::size_t> LevelSet::members() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < kMaxLevels; ++i) {
    if (contains(i)) out.push_back(i);
  }
  return out;
}

bool LevelSet::is_subset_of(std::size_t level_count) const {
  return (mask_ & ~all(level_count).mask()) == 0;
}

// ---------------------------------------------------------------------------

PricingScheme PricingScheme::validate(std::vector<ServiceLevel> levels,
                                      std::optional<double> max_rate_kw) {
  if (levels.empty()) {
    throw InvalidParameter("levels", "a pricing scheme needs at least one service level");
  }
  if (levels.size() > kMaxLevels) {
    throw InvalidParameter("levels", concat("at most ", kMaxLevels, " service levels are supported"));
  }
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& level = levels[i];
    require_finite(level.rate_kw, concat("levels[", i, "].rate"));
    require_finite(level.price_per_kwh, concat("levels[", i, "].price"));
    if (level.rate_kw <= 0.0) {
      throw InvalidParameter(concat("levels[", i, "].rate"), "charging rate must be positive");
    }
    if (max_rate_kw && level.rate_kw > *max_rate_kw) {
      throw InvalidParameter(concat("levels[", i, "].rate"),
                             concat("charging rate ", level.rate_kw, " exceeds facility maximum ",
                                    *max_rate_kw));
    }
    if (level.price_per_kwh <= 0.0) {
      throw InvalidParameter(concat("levels[", i, "].price"), "energy price must be positive");
    }
  }
  for (std::size_t i = 0; i < levels.size(); ++i) {
    for (std::size_t j = i + 1; j < levels.size(); ++j) {
      if (levels[i].rate_kw == levels[j].rate_kw || levels[i].price_per_kwh == levels[j].price_per_kwh) {
        throw DuplicateLevel(i, j, concat("levels ", i, " and ", j, " repeat a rate or a price"));
      }
    }
  }

  std::stable_sort(levels.begin(), levels.end(), [](const ServiceLevel& a, const ServiceLevel& b) {
    return a.rate_kw < b.rate_kw;
  });
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i].price_per_kwh <= levels[i - 1].price_per_kwh) {
      throw MonotonicityViolation(
          i - 1, i,
          concat("rate ", levels[i].rate_kw, " kW is faster than ", levels[i - 1].rate_kw,
                 " kW but its price ", levels[i].price_per_kwh, " is not higher than ",
                 levels[i - 1].price_per_kwh));
    }
  }

  PricingScheme scheme;
  scheme.levels_ = std::move(levels);
  return scheme;
}

double indifference_ratio(const PricingScheme& scheme, std::size_t k, std::size_t i) {
  return (scheme.price(i) - scheme.price(k)) / (1.0 / scheme.rate(k) - 1.0 / scheme.rate(i));
}

// ---------------------------------------------------------------------------

DiscreteImpatience DiscreteImpatience::validate(std::vector<double> values,
                                                std::vector<double> masses) {
  if (values.empty()) {
    throw InvalidParameter("impatience.values", "at least one impatience value is required");
  }
  if (values.size() != masses.size()) {
    throw InvalidParameter("impatience.masses",
                           concat("got ", masses.size(), " masses for ", values.size(), " values"));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    require_finite(values[i], concat("impatience.values[", i, "]"));
  }
  require_simplex(masses, "impatience.masses");

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  DiscreteImpatience out;
  out.values_.reserve(values.size());
  out.masses_.reserve(values.size());
  for (std::size_t idx : order) {
    if (!out.values_.empty() && out.values_.back() == values[idx]) {
      throw InvalidParameter("impatience.values",
                             concat("impatience value ", values[idx], " appears more than once"));
    }
    out.values_.push_back(values[idx]);
    out.masses_.push_back(masses[idx]);
  }
  return out;
}

bool DiscreteImpatience::has_negative_values() const {
  return std::any_of(values_.begin(), values_.end(), [](double v) { return v < 0.0; });
}

// ---------------------------------------------------------------------------

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

MixtureImpatience MixtureImpatience::validate(std::vector<MixtureComponent> components, double lo,
                                              double hi) {
  if (components.empty()) {
    throw InvalidParameter("impatience.components", "a mixture needs at least one component");
  }
  std::vector<double> weights;
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    require_finite(c.mean, concat("impatience.components[", i, "].mean"));
    require_finite(c.stddev, concat("impatience.components[", i, "].stddev"));
    if (!(c.stddev > 0.0)) {
      throw InvalidParameter(concat("impatience.components[", i, "].stddev"),
                             "standard deviation must be positive");
    }
    weights.push_back(c.weight);
  }
  require_simplex(weights, "impatience.weights");
  require_finite(lo, "impatience.support.lo");
  require_finite(hi, "impatience.support.hi");
  if (lo < 0.0) throw InvalidParameter("impatience.support.lo", "support must start at or above 0");
  if (!(lo < hi)) throw InvalidParameter("impatience.support", "support needs lo < hi");

  MixtureImpatience out;
  out.components_ = std::move(components);
  out.lo_ = lo;
  out.hi_ = hi;
  out.truncation_mass_ = out.raw_cdf(hi) - out.raw_cdf(lo);
  if (!(out.truncation_mass_ > 0.0)) {
    throw InvalidParameter("impatience.support", "mixture has no mass on the support interval");
  }
  return out;
}

double MixtureImpatience::raw_cdf(double x) const {
  if (x == -INFINITY) return 0.0;
  if (x == INFINITY) return 1.0;
  double total = 0.0;
  for (const auto& c : components_) total += c.weight * normal_cdf((x - c.mean) / c.stddev);
  return total;
}

double MixtureImpatience::density(double x) const {
  if (x < lo_ || x > hi_) return 0.0;
  constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
  double total = 0.0;
  for (const auto& c : components_) {
    const double z = (x - c.mean) / c.stddev;
    total += c.weight * kInvSqrt2Pi * std::exp(-0.5 * z * z) / c.stddev;
  }
  return total / truncation_mass_;
}

double MixtureImpatience::cdf(double x) const {
  if (x <= lo_) return 0.0;
  if (x >= hi_) return 1.0;
  return (raw_cdf(x) - raw_cdf(lo_)) / truncation_mass_;
}

double MixtureImpatience::interval_probability(double a, double b) const {
  const double left = std::max(a, lo_);
  const double right = std::min(b, hi_);
  if (!(left < right)) return 0.0;
  return (raw_cdf(right) - raw_cdf(left)) / truncation_mass_;
}

// ---------------------------------------------------------------------------

DemandModel DemandModel::uniform(double x_min, double x_max) {
  require_finite(x_min, "demand.x_min");
  require_finite(x_max, "demand.x_max");
  if (!(x_min > 0.0)) throw InvalidParameter("demand.x_min", "x_min must be positive");
  if (!(x_min < x_max)) throw InvalidParameter("demand.x_max", "x_max must exceed x_min");
  DemandModel out;
  out.x_min_ = x_min;
  out.x_max_ = x_max;
  return out;
}

SubPopulationMix SubPopulationMix::validate(std::vector<SubPopulation> entries,
                                            std::size_t level_count) {
  if (entries.empty()) {
    throw InvalidParameter("subpopulations", "a sub-population mix needs at least one entry");
  }
  std::vector<double> shares;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.subset.empty()) {
      throw InvalidParameter(concat("subpopulations[", i, "].subset"), "subset must be nonempty");
    }
    if (!e.subset.is_subset_of(level_count)) {
      throw InvalidParameter(concat("subpopulations[", i, "].subset"),
                             "subset names a level the scheme does not offer");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (entries[j].subset == e.subset) {
        throw InvalidParameter(concat("subpopulations[", i, "].subset"),
                               concat("subset repeats entry ", j));
      }
    }
    shares.push_back(e.share);
  }
  require_simplex(shares, "subpopulations.share");
  SubPopulationMix out;
  out.entries_ = std::move(entries);
  return out;
}

// ---------------------------------------------------------------------------

EarlyDeparture EarlyDeparture::always_complete() { return EarlyDeparture{}; }

EarlyDeparture EarlyDeparture::point_mass(double mean) {
  require_finite(mean, "departure.mean");
  if (!(mean > 0.0 && mean <= 1.0)) {
    throw InvalidParameter("departure.mean", "completion fraction must lie in (0, 1]");
  }
  EarlyDeparture out;
  out.kind_ = DepartureKind::kPointMass;
  out.mean_ = mean;
  out.lo_ = mean;
  out.hi_ = mean;
  return out;
}

EarlyDeparture EarlyDeparture::uniform_interval(double lo, double hi) {
  require_finite(lo, "departure.lo");
  require_finite(hi, "departure.hi");
  if (!(lo >= 0.0 && hi <= 1.0 && lo < hi)) {
    throw InvalidParameter("departure", "uniform completion interval must satisfy 0 <= lo < hi <= 1");
  }
  EarlyDeparture out;
  out.kind_ = DepartureKind::kUniformInterval;
  out.lo_ = lo;
  out.hi_ = hi;
  out.mean_ = 0.5 * (lo + hi);
  return out;
}

const char* to_string(DepartureKind kind) {
  switch (kind) {
    case DepartureKind::kAlwaysComplete:
      return "always-complete";
    case DepartureKind::kPointMass:
      return "point-mass";
    case DepartureKind::kUniformInterval:
      return "uniform-interval";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------

void validate_ambiguity(const PricingScheme& scheme, std::span<const double> values,
                        LevelSet allowed) {
  const auto members = allowed.members();
  for (std::size_t a = 0; a < members.size(); ++a) {
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      const std::size_t k = members[a];
      const std::size_t i = members[b];
      const double ratio = indifference_ratio(scheme, k, i);
      for (std::size_t m = 0; m < values.size(); ++m) {
        if (ratio_collides(values[m], ratio)) {
          throw AmbiguousImpatience(
              m, k, i,
              concat("impatience value a[", m + 1, "] = ", values[m],
                     " makes levels ", k + 1, " and ", i + 1, " equally attractive (ratio ",
                     ratio, ")"));
        }
      }
    }
  }
}

void validate_ambiguity(const PricingScheme& scheme, const DiscreteImpatience& impatience,
                        LevelSet allowed) {
  validate_ambiguity(scheme, impatience.values(), allowed);
}

void validate_ambiguity(const PricingScheme& scheme, const DiscreteImpatience& impatience) {
  validate_ambiguity(scheme, impatience.values(), scheme.all_levels());
}

// ---------------------------------------------------------------------------

Scenario Scenario::validate(ScenarioInput input) {
  require_finite(input.arrival_rate, "lambda");
  if (input.arrival_rate < 0.0) {
    throw InvalidParameter("lambda", "arrival rate must be nonnegative");
  }
  if (input.scheme.size() == 0) {
    throw InvalidParameter("scheme", "scenario has no service levels");
  }
  // Constituents are re-validated so a hand-assembled input cannot bypass checks.
  input.scheme = PricingScheme::validate(
      std::vector<ServiceLevel>(input.scheme.levels().begin(), input.scheme.levels().end()));
  input.demand = DemandModel::uniform(input.demand.x_min(), input.demand.x_max());

  std::vector<std::string> warnings;
  if (auto* discrete = std::get_if<DiscreteImpatience>(&input.impatience)) {
    *discrete = DiscreteImpatience::validate(
        std::vector<double>(discrete->values().begin(), discrete->values().end()),
        std::vector<double>(discrete->masses().begin(), discrete->masses().end()));
    validate_ambiguity(input.scheme, *discrete);
    if (discrete->has_negative_values()) {
      warnings.push_back("impatience has negative values; the choice model accepts them");
    }
  } else {
    auto& mixture = std::get<MixtureImpatience>(input.impatience);
    mixture = MixtureImpatience::validate(
        std::vector<MixtureComponent>(mixture.components().begin(), mixture.components().end()),
        mixture.lo(), mixture.hi());
  }

  if (input.subpopulations) {
    std::vector<SubPopulation> entries(input.subpopulations->entries().begin(),
                                       input.subpopulations->entries().end());
    for (std::size_t i = 0; i < entries.size(); ++i) {
      auto& entry = entries[i];
      if (entry.impatience) {
        entry.impatience = DiscreteImpatience::validate(
            std::vector<double>(entry.impatience->values().begin(), entry.impatience->values().end()),
            std::vector<double>(entry.impatience->masses().begin(), entry.impatience->masses().end()));
        validate_ambiguity(input.scheme, *entry.impatience, entry.subset);
        if (entry.impatience->has_negative_values()) {
          warnings.push_back(concat("subpopulations[", i, "] impatience has negative values"));
        }
      }
    }
    input.subpopulations = SubPopulationMix::validate(std::move(entries), input.scheme.size());
  }

  switch (input.departure.kind()) {
    case DepartureKind::kAlwaysComplete:
      input.departure = EarlyDeparture::always_complete();
      break;
    case DepartureKind::kPointMass:
      input.departure = EarlyDeparture::point_mass(input.departure.mean());
      break;
    case DepartureKind::kUniformInterval:
      input.departure = EarlyDeparture::uniform_interval(input.departure.lo(), input.departure.hi());
      break;
  }

  Scenario out(std::move(input));
  out.warnings_ = std::move(warnings);
  return out;
}

Scenario Scenario::validate(const Scenario& scenario) { return validate(scenario.input_); }

const DiscreteImpatience* Scenario::discrete_impatience() const {
  return std::get_if<DiscreteImpatience>(&input_.impatience);
}

Scenario Scenario::with_departure(EarlyDeparture departure) const {
  ScenarioInput copy = input_;
  copy.departure = std::move(departure);
  return validate(std::move(copy));
}

Scenario Scenario::with_arrival_rate(double arrival_rate) const {
  ScenarioInput copy = input_;
  copy.arrival_rate = arrival_rate;
  return validate(std::move(copy));
}

}  // namespace chargesense
