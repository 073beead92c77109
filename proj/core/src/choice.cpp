// SPDX-License-Identifier: Apache-2.0
#include "chargesense/choice.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace chargesense {

namespace {

std::string tie_message(std::size_t k, std::size_t i, double alpha) {
  std::ostringstream out;
  out.precision(17);
  out << "levels " << k + 1 << " and " << i + 1 << " cost the same at impatience " << alpha;
  return out.str();
}

bool near_equal(double a, double b) {
  return std::abs(a - b) <= kAmbiguityTolerance * std::max(std::abs(a), std::abs(b));
}

void require_allowed(const PricingScheme& scheme, LevelSet allowed) {
  if (allowed.empty()) throw InvalidParameter("allowed", "allowed level set is empty");
  if (!allowed.is_subset_of(scheme.size())) {
    throw InvalidParameter("allowed", "allowed set names a level the scheme does not offer");
  }
}

}  // namespace

bool ChoiceRegions::is_dominated(std::size_t k) const {
  return !allowed_.contains(k) || regions_.at(k).dominated();
}

std::optional<std::size_t> ChoiceRegions::classify(double alpha) const {
  for (std::size_t k = 0; k < regions_.size(); ++k) {
    if (!is_dominated(k) && regions_[k].contains(alpha)) return k;
  }
  return std::nullopt;
}

std::vector<std::size_t> ChoiceRegions::active_levels() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < regions_.size(); ++k) {
    if (!is_dominated(k)) out.push_back(k);
  }
  return out;
}

std::vector<double> ChoiceRegions::boundaries() const {
  // Active regions tile the line in level order; each finite upper end is a boundary.
  std::vector<double> out;
  for (std::size_t k : active_levels()) {
    if (std::isfinite(regions_[k].upper)) out.push_back(regions_[k].upper);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double cost(const ServiceLevel& level, double x_kwh, double alpha) {
  return x_kwh * level.price_per_kwh + alpha * x_kwh / level.rate_kw;
}

TieBrokenChoice select_level_tie_break(double x_kwh, double alpha, const PricingScheme& scheme,
                                       LevelSet allowed) {
  require_allowed(scheme, allowed);
  // x scales every cost equally, so the comparison runs on cost per kWh. This
  // keeps the choice bit-identical for every x > 0.
  (void)x_kwh;
  double min_cost = INFINITY;
  for (std::size_t level = 0; level < scheme.size(); ++level) {
    if (allowed.contains(level)) min_cost = std::min(min_cost, cost(scheme.level(level), 1.0, alpha));
  }

  TieBrokenChoice choice;
  std::size_t candidates = 0;
  for (std::size_t level = 0; level < scheme.size(); ++level) {
    if (!allowed.contains(level)) continue;
    const double c = cost(scheme.level(level), 1.0, alpha);
    if (c == min_cost || near_equal(c, min_cost)) {
      if (candidates == 0) choice.level = level;
      ++candidates;
    }
  }
  choice.tie = candidates > 1;
  return choice;
}

std::size_t select_level(double x_kwh, double alpha, const PricingScheme& scheme, LevelSet allowed) {
  if (!(x_kwh > 0.0)) throw InvalidParameter("x", "charging demand must be positive");
  require_allowed(scheme, allowed);
  const auto members = allowed.members();
  std::size_t best = members.front();
  double best_cost = cost(scheme.level(best), 1.0, alpha);
  for (std::size_t idx = 1; idx < members.size(); ++idx) {
    const double c = cost(scheme.level(members[idx]), 1.0, alpha);
    if (c < best_cost) {
      best = members[idx];
      best_cost = c;
    }
  }
  for (std::size_t level : members) {
    if (level != best && near_equal(cost(scheme.level(level), 1.0, alpha), best_cost)) {
      throw TieDetected(std::min(level, best), std::max(level, best),
                        tie_message(std::min(level, best), std::max(level, best), alpha));
    }
  }
  return best;
}

ChoiceRegions thresholds(const PricingScheme& scheme, LevelSet allowed) {
  require_allowed(scheme, allowed);
  const auto members = allowed.members();
  // Non-allowed levels get an empty region.
  std::vector<Region> regions(scheme.size(), Region{INFINITY, -INFINITY});
  for (std::size_t a = 0; a < members.size(); ++a) {
    const std::size_t k = members[a];
    Region region;
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      region.upper = std::min(region.upper, indifference_ratio(scheme, k, members[b]));
    }
    for (std::size_t b = 0; b < a; ++b) {
      region.lower = std::max(region.lower, indifference_ratio(scheme, members[b], k));
    }
    regions[k] = region;
  }
  return ChoiceRegions(allowed, std::move(regions));
}

ChoiceRegions thresholds(const PricingScheme& scheme) {
  return thresholds(scheme, scheme.all_levels());
}

std::vector<std::size_t> dominated_levels(const PricingScheme& scheme, LevelSet allowed) {
  const auto regions = thresholds(scheme, allowed);
  std::vector<std::size_t> out;
  for (std::size_t k : allowed.members()) {
    if (regions.region(k).dominated()) out.push_back(k);
  }
  return out;
}

RatePmf rate_pmf(const PricingScheme& scheme, const DiscreteImpatience& impatience,
                 LevelSet allowed) {
  validate_ambiguity(scheme, impatience, allowed);
  const auto regions = thresholds(scheme, allowed);
  RatePmf pmf{std::vector<double>(scheme.size(), 0.0), allowed};
  for (std::size_t m = 0; m < impatience.size(); ++m) {
    const auto level = regions.classify(impatience.value(m));
    if (!level) {
      // Unreachable after validate_ambiguity unless thresholds round differently.
      throw AmbiguousImpatience(m, 0, 0, "impatience value sits on a choice-region boundary");
    }
    pmf.probabilities[*level] += impatience.mass(m);
  }
  return pmf;
}

RatePmf rate_pmf(const PricingScheme& scheme, const MixtureImpatience& impatience,
                 LevelSet allowed) {
  const auto regions = thresholds(scheme, allowed);
  RatePmf pmf{std::vector<double>(scheme.size(), 0.0), allowed};
  for (std::size_t k : regions.active_levels()) {
    const auto& region = regions.region(k);
    pmf.probabilities[k] = impatience.interval_probability(region.lower, region.upper);
  }
  return pmf;
}

RatePmf rate_pmf(const PricingScheme& scheme, const Impatience& impatience, LevelSet allowed) {
  return std::visit([&](const auto& model) { return rate_pmf(scheme, model, allowed); },
                    impatience);
}

double weighted_inverse_rate(const PricingScheme& scheme, const ChoiceRegions& regions,
                             std::span<const double> masses, std::span<const double> values) {
  if (masses.size() != values.size()) {
    throw InvalidParameter("impatience.masses", "masses and values differ in length");
  }
  // Bucket by level first so the sum matches mean_inverse_rate over the PMF.
  std::array<double, kMaxLevels> bucket{};
  for (std::size_t m = 0; m < values.size(); ++m) {
    const auto level = regions.classify(values[m]);
    if (!level) {
      throw AmbiguousImpatience(m, 0, 0, "impatience value sits on a choice-region boundary");
    }
    bucket[*level] += masses[m];
  }
  double total = 0.0;
  for (std::size_t l = 0; l < scheme.size(); ++l) total += bucket[l] / scheme.rate(l);
  return total;
}

}  // namespace chargesense
