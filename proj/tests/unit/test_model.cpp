// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <limits>
#include <random>

#include "chargesense/model.hpp"
#include "oracle.hpp"

using namespace chargesense;

TEST_SUITE("model") {

TEST_CASE("scheme A from the case study validates") {
  const auto s = PricingScheme::validate({{15, 0.15}, {30, 0.25}, {35, 0.32}});
  REQUIRE(s.size() == 3);
  CHECK(s.rate(0) == 15);
  CHECK(s.price(2) == 0.32);
}

TEST_CASE("faster level must cost more") {
  try {
    PricingScheme::validate({{15, 0.25}, {30, 0.15}});
    FAIL("expected MonotonicityViolation");
  } catch (const MonotonicityViolation& e) {
    CHECK(e.slower() == 0);
    CHECK(e.faster() == 1);
    CHECK(e.code() == "MonotonicityViolation");
  }
}

TEST_CASE("single level is a valid scheme") {
  const auto s = PricingScheme::validate({{15, 0.15}});
  CHECK(s.size() == 1);
}

TEST_CASE("bad level inputs") {
  CHECK_THROWS_AS(PricingScheme::validate({}), InvalidParameter);
  CHECK_THROWS_AS(PricingScheme::validate({{0, 0.1}}), InvalidParameter);
  CHECK_THROWS_AS(PricingScheme::validate({{15, -0.1}}), InvalidParameter);
  CHECK_THROWS_AS(PricingScheme::validate({{15, 0.1}, {15, 0.2}}), DuplicateLevel);
  CHECK_THROWS_AS(PricingScheme::validate({{15, 0.1}, {30, 0.2}}, 20.0), InvalidParameter);
}

TEST_CASE("level order in the input does not matter") {
  std::vector<ServiceLevel> levels{{15, 0.15}, {30, 0.25}, {35, 0.32}, {50, 0.4}};
  const auto canonical = PricingScheme::validate(levels);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::shuffle(levels.begin(), levels.end(), rng);
    CHECK(PricingScheme::validate(levels) == canonical);
  }
}

TEST_CASE("indifference ratios of scheme A") {
  const auto s = oracle::scheme(oracle::kSchemeA);
  CHECK(indifference_ratio(s, 0, 1) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(indifference_ratio(s, 0, 2) == doctest::Approx(4.4625).epsilon(1e-12));
  CHECK(indifference_ratio(s, 1, 2) == doctest::Approx(14.7).epsilon(1e-12));
}

TEST_CASE("discrete impatience is canonicalized and checked") {
  const auto d = DiscreteImpatience::validate({20, 2, 10}, {0.5, 0.25, 0.25});
  CHECK(std::vector<double>(d.values().begin(), d.values().end()) == std::vector<double>{2, 10, 20});
  CHECK(std::vector<double>(d.masses().begin(), d.masses().end()) == std::vector<double>{0.25, 0.25, 0.5});
  CHECK_THROWS_AS(DiscreteImpatience::validate({1, 1}, {0.5, 0.5}), InvalidParameter);
  CHECK_THROWS_AS(DiscreteImpatience::validate({1, 2}, {0.5, 0.6}), InvalidParameter);
  CHECK_THROWS_AS(DiscreteImpatience::validate({1, 2}, {1.5, -0.5}), InvalidParameter);
  CHECK_THROWS_AS(DiscreteImpatience::validate({1, 2}, {1.0}), InvalidParameter);
  CHECK_THROWS_AS(DiscreteImpatience::validate({}, {}), InvalidParameter);
}

TEST_CASE("accepted masses sum to one") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> values, masses;
    double total = 0;
    for (int m = 0; m < 6; ++m) {
      values.push_back(m + u(rng) * 0.5);
      masses.push_back(u(rng));
      total += masses.back();
    }
    for (auto& m : masses) m /= total;
    try {
      const auto d = DiscreteImpatience::validate(values, masses);
      double sum = 0;
      for (double m : d.masses()) sum += m;
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    } catch (const InvalidParameter&) {
      // Renormalization can land just outside the tolerance; rejection is fine.
    }
  }
}

TEST_CASE("ambiguity check") {
  const auto a = oracle::scheme(oracle::kSchemeA);
  CHECK_NOTHROW(validate_ambiguity(a, DiscreteImpatience::validate({2, 10, 20, 25}, oracle::kQuarterMasses)));
  try {
    validate_ambiguity(a, DiscreteImpatience::validate({3.0, 10}, {0.5, 0.5}));
    FAIL("expected AmbiguousImpatience");
  } catch (const AmbiguousImpatience& e) {
    CHECK(e.value_index() == 0);
    CHECK(e.level_k() == 0);
    CHECK(e.level_i() == 1);
  }
  const auto single = PricingScheme::validate({{15, 0.15}});
  CHECK_NOTHROW(validate_ambiguity(single, DiscreteImpatience::validate({3.0, 14.7}, {0.5, 0.5})));
}

TEST_CASE("ambiguity is checked within each sub-population's own subset") {
  // 4.4625 ties levels 1 and 3, which only matters where both are offered.
  const auto a = oracle::scheme(oracle::kSchemeA);
  const auto imp = DiscreteImpatience::validate({2, 4.4625}, {0.5, 0.5});
  CHECK_THROWS_AS(validate_ambiguity(a, imp, LevelSet::from_mask(0b101)), AmbiguousImpatience);
  CHECK_NOTHROW(validate_ambiguity(a, imp, LevelSet::from_mask(0b011)));
}

TEST_CASE("mixture impatience") {
  const auto m = MixtureImpatience::validate({{0.5, 5, 2}, {0.5, 20, 3}}, 0, 40);
  CHECK(m.cdf(-1) == 0.0);
  CHECK(m.cdf(41) == 1.0);
  CHECK(m.cdf(40) == doctest::Approx(1.0));
  CHECK(m.interval_probability(-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()) == doctest::Approx(1.0));
  CHECK(m.truncation_mass() < 1.0);
  CHECK(m.truncation_mass() > 0.99);
  CHECK_THROWS_AS(MixtureImpatience::validate({{1.0, 5, 0}}, 0, 40), InvalidParameter);
  CHECK_THROWS_AS(MixtureImpatience::validate({{1.0, 5, 1}}, 10, 5), InvalidParameter);
  CHECK_THROWS_AS(MixtureImpatience::validate({{0.4, 5, 1}}, 0, 10), InvalidParameter);
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
}

TEST_CASE("level sets") {
  const std::size_t levels[] = {0, 2};
  const auto s = LevelSet::of(levels);
  CHECK(s.mask() == 0b101);
  CHECK(s.size() == 2);
  CHECK(s.contains(2));
  CHECK_FALSE(s.contains(1));
  CHECK(s.members() == std::vector<std::size_t>{0, 2});
  CHECK(LevelSet::all(3).mask() == 0b111);
  CHECK(s.is_subset_of(3));
  CHECK_FALSE(s.is_subset_of(2));
}

TEST_CASE("sub-population mixes") {
  CHECK_NOTHROW(oracle::case_study_mix());
  CHECK_THROWS_AS(SubPopulationMix::validate({{LevelSet::from_mask(0b001), 0.5, std::nullopt}}, 3),
                  InvalidParameter);
  CHECK_THROWS_AS(SubPopulationMix::validate({{LevelSet::from_mask(0b1000), 1.0, std::nullopt}}, 3),
                  InvalidParameter);
  CHECK_THROWS_AS(SubPopulationMix::validate({{LevelSet{}, 1.0, std::nullopt}}, 3), InvalidParameter);
}

TEST_CASE("early departure") {
  CHECK(EarlyDeparture::always_complete().mean() == 1.0);
  CHECK(EarlyDeparture::point_mass(0.5).mean() == 0.5);
  CHECK(EarlyDeparture::uniform_interval(0.2, 0.8).mean() == doctest::Approx(0.5));
  CHECK_THROWS_AS(EarlyDeparture::point_mass(0.0), InvalidParameter);
  CHECK_THROWS_AS(EarlyDeparture::point_mass(1.5), InvalidParameter);
  CHECK_THROWS_AS(EarlyDeparture::uniform_interval(0.8, 0.2), InvalidParameter);
}

TEST_CASE("scenario validation") {
  const auto s = oracle::scenario(oracle::kSchemeA, oracle::kEstimatedValues, oracle::kQuarterMasses);
  CHECK(Scenario::validate(s) == s);
  CHECK(s.warnings().empty());
  CHECK(s.discrete_impatience() != nullptr);

  CHECK_THROWS_AS(oracle::scenario(oracle::kSchemeA, {3.0, 10}, {0.5, 0.5}), AmbiguousImpatience);
  CHECK_THROWS_AS(oracle::scenario(oracle::kSchemeA, oracle::kEstimatedValues, oracle::kQuarterMasses, -1.0),
                  InvalidParameter);

  const auto negative = oracle::scenario(oracle::kSchemeA, {-1, 10}, {0.5, 0.5});
  CHECK(negative.warnings().size() == 1);

  CHECK(s.with_arrival_rate(0.0).arrival_rate() == 0.0);
  CHECK(s.with_departure(EarlyDeparture::point_mass(0.5)).departure().mean() == 0.5);

  auto bad = s.input();
  bad.subpopulations = SubPopulationMix::validate({{LevelSet::from_mask(0b1000), 1.0, std::nullopt}}, 4);
  CHECK_THROWS_AS(Scenario::validate(bad), InvalidParameter);
}

}  // TEST_SUITE
