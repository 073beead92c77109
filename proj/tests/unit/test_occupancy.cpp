// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <optional>
#include <random>

#include "chargesense/occupancy.hpp"
#include "oracle.hpp"

using namespace chargesense;

TEST_SUITE("occupancy") {

TEST_CASE("discrete case-study values") {
  using namespace oracle;
  CHECK(expected_occupancy(scenario(kSchemeA, kEstimatedValues, kQuarterMasses)).expected_occupancy ==
        doctest::Approx(61.875).epsilon(1e-12));
  CHECK(expected_occupancy(scenario(kSchemeB, kEstimatedValues, kQuarterMasses)).expected_occupancy ==
        doctest::Approx(61.875).epsilon(1e-12));
  CHECK(expected_occupancy(scenario(kSchemeA, kTrueValues, kQuarterMasses)).expected_occupancy ==
        doctest::Approx(61.875).epsilon(1e-12));
  CHECK(expected_occupancy(scenario(kSchemeB, kTrueValues, kQuarterMasses)).expected_occupancy ==
        doctest::Approx(75.0).epsilon(1e-12));
  CHECK(expected_occupancy(scenario(kSchemeA, kEstimatedValues, kQuarterMasses, 0.0)).expected_occupancy == 0.0);
}

TEST_CASE("report fields") {
  const auto r = expected_occupancy(oracle::scenario(oracle::kSchemeA, oracle::kEstimatedValues,
                                                     oracle::kQuarterMasses));
  CHECK(r.mean_demand == 52.5);
  CHECK(r.mean_completion == 1.0);
  CHECK(r.mean_inverse_rate == doctest::Approx(0.25 / 15 + 0.25 / 30 + 0.5 / 35).epsilon(1e-12));
  CHECK(r.level_probabilities == std::vector<double>{0.25, 0.25, 0.5});
}

TEST_CASE("heterogeneous populations") {
  const auto ra = expected_occupancy_mixed(oracle::heterogeneous(oracle::kSchemeA));
  CHECK(ra.level_probabilities == std::vector<double>{0.4375, 0.3125, 0.25});
  CHECK(ra.expected_occupancy == doctest::Approx(1575 * (0.4375 / 15 + 0.3125 / 30 + 0.25 / 35)).epsilon(1e-12));
  CHECK(ra.expected_occupancy == doctest::Approx(73.59375).epsilon(1e-12));

  const auto rb = expected_occupancy_mixed(oracle::heterogeneous(oracle::kSchemeB));
  CHECK(rb.level_probabilities == std::vector<double>{0.625, 0.125, 0.25});
  CHECK(rb.expected_occupancy == doctest::Approx(83.4375).epsilon(1e-12));

  CHECK_THROWS_AS(expected_occupancy(oracle::heterogeneous(oracle::kSchemeA)), InvalidParameter);
  CHECK(evaluate_occupancy(oracle::heterogeneous(oracle::kSchemeB)).expected_occupancy ==
        rb.expected_occupancy);
}

TEST_CASE("full-menu-only mix equals plain occupancy bit for bit") {
  const auto plain = oracle::scenario(oracle::kSchemeB, oracle::kTrueValues, oracle::kQuarterMasses);
  auto input = plain.input();
  input.subpopulations = SubPopulationMix::validate({{LevelSet::all(3), 1.0, std::nullopt}}, 3);
  const auto mixed = Scenario::validate(std::move(input));
  CHECK(expected_occupancy_mixed(mixed).expected_occupancy == expected_occupancy(plain).expected_occupancy);
  CHECK(expected_occupancy(mixed).expected_occupancy == expected_occupancy(plain).expected_occupancy);
}

TEST_CASE("sub-population with its own impatience") {
  auto input = oracle::scenario(oracle::kSchemeA, oracle::kEstimatedValues, oracle::kQuarterMasses).input();
  input.subpopulations = SubPopulationMix::validate(
      {{LevelSet::all(3), 0.5, std::nullopt},
       {LevelSet::from_mask(0b011), 0.5, DiscreteImpatience::validate({1.0}, {1.0})}},
      3);
  const auto r = expected_occupancy_mixed(Scenario::validate(std::move(input)));
  CHECK(r.level_probabilities == std::vector<double>{0.625, 0.125, 0.25});
}

TEST_CASE("continuous case via published choice probabilities") {
  const auto a = oracle::scenario(oracle::kSchemeA, oracle::kEstimatedValues, oracle::kQuarterMasses);
  const auto b = oracle::scenario(oracle::kSchemeB, oracle::kEstimatedValues, oracle::kQuarterMasses);
  const auto ra = occupancy_from_probabilities(OccupancyScale::of(a), a.scheme(), {0.221, 0.281, 0.498});
  const auto rb = occupancy_from_probabilities(OccupancyScale::of(b), b.scheme(), {0.431, 0.070, 0.499});
  CHECK(ra.expected_occupancy == doctest::Approx(60.3675).epsilon(1e-12));
  CHECK(rb.expected_occupancy == doctest::Approx(71.385).epsilon(1e-12));
  CHECK(std::abs(ra.expected_occupancy - 60.38) <= 0.02);
  CHECK(std::abs(rb.expected_occupancy - 71.40) <= 0.02);
  CHECK_THROWS_AS(occupancy_from_probabilities(OccupancyScale::of(a), a.scheme(), {0.5, 0.5}), InvalidParameter);
}

TEST_CASE("mixture scenario occupancy uses the truncated CDF") {
  auto input = oracle::scenario(oracle::kSchemeA, oracle::kEstimatedValues, oracle::kQuarterMasses).input();
  const auto m = MixtureImpatience::validate({{0.5, 2, 1}, {0.5, 20, 2}}, 0, 40);
  input.impatience = m;
  const auto r = expected_occupancy(Scenario::validate(std::move(input)));
  CHECK(r.level_probabilities[0] == doctest::Approx(m.cdf(3.0)).epsilon(1e-12));
  CHECK(r.level_probabilities[1] == doctest::Approx(m.cdf(14.7) - m.cdf(3.0)).epsilon(1e-12));
}

TEST_CASE("occupancy error conventions") {
  const auto e = occupancy_error(61.875, 75.0);
  CHECK(e.delta == doctest::Approx(13.125));
  CHECK(*e.relative_to_estimated == doctest::Approx(0.2121212121).epsilon(1e-9));
  CHECK(*e.relative_to_true == doctest::Approx(0.175).epsilon(1e-12));

  const auto hetero = occupancy_error(75.0, 83.4375);
  CHECK(*hetero.relative_to_true == doctest::Approx(0.1011235955).epsilon(1e-9));

  const auto same = occupancy_error(61.875, 61.875);
  CHECK(same.delta == 0.0);
  CHECK(*same.relative_to_estimated == 0.0);
  CHECK(*same.relative_to_true == 0.0);

  const auto zero = occupancy_error(0.0, 0.0);
  CHECK_FALSE(zero.relative_to_estimated.has_value());
  CHECK_FALSE(zero.relative_to_true.has_value());
}

TEST_CASE("property: occupancy bounds and linearity") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> values, masses;
    double total = 0;
    for (int m = 0; m < 4; ++m) {
      values.push_back(m * 10 + 9 * u(rng) + 0.1);
      masses.push_back(u(rng) + 0.01);
      total += masses.back();
    }
    for (auto& m : masses) m /= total;
    const double lambda = 1 + 50 * u(rng);
    std::optional<Scenario> base;
    try {
      base = oracle::scenario(trial % 2 ? oracle::kSchemeA : oracle::kSchemeB, values, masses, lambda);
    } catch (const ValidationError&) {
      continue;
    }
    const double theta = 0.2 + 0.8 * u(rng);
    const auto s = base->with_departure(EarlyDeparture::point_mass(theta));
    const double e = expected_occupancy(s).expected_occupancy;
    const double factor = lambda * 52.5 * theta;
    CHECK(e >= factor / 35 * (1 - 1e-12));
    CHECK(e <= factor / 15 * (1 + 1e-12));
    CHECK(expected_occupancy(s.with_arrival_rate(2 * lambda)).expected_occupancy == doctest::Approx(2 * e).epsilon(1e-14));

    auto doubled = s.input();
    doubled.demand = DemandModel::uniform(10, 200);
    CHECK(expected_occupancy(Scenario::validate(std::move(doubled))).expected_occupancy ==
          doctest::Approx(2 * e).epsilon(1e-14));
  }
}

}  // TEST_SUITE
