// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "chargesense/choice.hpp"
#include "oracle.hpp"

using namespace chargesense;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct RandomScheme {
  std::vector<oracle::RawLevel> raw;
  PricingScheme scheme;
};

RandomScheme random_scheme(std::mt19937_64& rng, std::size_t levels) {
  std::uniform_real_distribution<double> rate_step(1.0, 40.0);
  std::uniform_real_distribution<double> price_step(0.005, 0.2);
  RandomScheme out;
  double rate = 3.0;
  double price = 0.02;
  for (std::size_t l = 0; l < levels; ++l) {
    rate += rate_step(rng);
    price += price_step(rng);
    out.raw.push_back({rate, price});
  }
  out.scheme = oracle::scheme(out.raw);
  return out;
}

}  // namespace

TEST_SUITE("choice") {

TEST_CASE("cost function") {
  const auto a = oracle::scheme(oracle::kSchemeA);
  CHECK(cost(a.level(0), 50, 2) == doctest::Approx(50 * 0.15 + 2 * 50 / 15.0).epsilon(1e-12));
  CHECK(cost(a.level(0), 50, 2) == doctest::Approx(14.1667).epsilon(1e-5));
  CHECK(cost(a.level(1), 0, 7) == 0.0);
  CHECK(cost(a.level(2), 40, 0) == 40 * 0.32);
}

TEST_CASE("select_level examples") {
  const auto a = oracle::scheme(oracle::kSchemeA);
  const auto b = oracle::scheme(oracle::kSchemeB);
  CHECK(select_level(20, 10, a, a.all_levels()) == 1);
  CHECK(select_level(20, 5.5, b, b.all_levels()) == 0);
  CHECK(select_level(20, 10, a, LevelSet::single(0)) == 0);
  CHECK_THROWS_AS(select_level(20, 3.0, a, a.all_levels()), TieDetected);
}

TEST_CASE("tie-breaking variant") {
  const auto a = oracle::scheme(oracle::kSchemeA);
  const auto tied = select_level_tie_break(20, 3.0, a, a.all_levels());
  CHECK(tied.level == 0);
  CHECK(tied.tie);
  const auto clear = select_level_tie_break(20, 10, a, a.all_levels());
  CHECK(clear.level == 1);
  CHECK_FALSE(clear.tie);
}

TEST_CASE("threshold anchors") {
  const auto ra = thresholds(oracle::scheme(oracle::kSchemeA));
  CHECK(ra.region(0).lower == -kInf);
  CHECK(ra.region(0).upper == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(ra.region(1).lower == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(ra.region(1).upper == doctest::Approx(14.7).epsilon(1e-12));
  CHECK(ra.region(2).upper == kInf);
  CHECK(ra.boundaries().size() == 2);

  const auto rb = thresholds(oracle::scheme(oracle::kSchemeB));
  CHECK(rb.region(0).upper == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(rb.region(1).upper == doctest::Approx(16.8).epsilon(1e-12));

  const auto single = thresholds(oracle::scheme(oracle::kSchemeA), LevelSet::single(1));
  CHECK(single.region(1).lower == -kInf);
  CHECK(single.region(1).upper == kInf);
  CHECK(single.region(0).dominated());
  CHECK(single.boundaries().empty());
}

TEST_CASE("restricted subset uses the induced sub-scheme") {
  const auto b = oracle::scheme(oracle::kSchemeB);
  const auto r = thresholds(b, LevelSet::from_mask(0b011));
  CHECK(r.region(0).upper == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(r.region(1).upper == kInf);
  const auto r13 = thresholds(b, LevelSet::from_mask(0b101));
  CHECK(r13.region(0).upper == doctest::Approx(indifference_ratio(b, 0, 2)).epsilon(1e-12));
}

TEST_CASE("dominated levels") {
  CHECK(dominated_levels(oracle::scheme(oracle::kSchemeA), LevelSet::all(3)).empty());
  CHECK(dominated_levels(oracle::scheme(oracle::kSchemeB), LevelSet::all(3)).empty());
  const auto s = PricingScheme::validate({{15, 0.15}, {30, 0.31}, {35, 0.32}});
  CHECK(indifference_ratio(s, 0, 1) == doctest::Approx(4.8));
  CHECK(indifference_ratio(s, 0, 2) == doctest::Approx(4.4625));
  CHECK(indifference_ratio(s, 1, 2) == doctest::Approx(2.1));
  CHECK(dominated_levels(s, LevelSet::all(3)) == std::vector<std::size_t>{1});
  const auto r = thresholds(s);
  CHECK(r.is_dominated(1));
  CHECK(r.region(0).upper == doctest::Approx(4.4625));
  CHECK(r.boundaries() == std::vector<double>{r.region(0).upper});
}

TEST_CASE("rate pmf examples") {
  const auto a = oracle::scheme(oracle::kSchemeA);
  const auto b = oracle::scheme(oracle::kSchemeB);
  const auto est = DiscreteImpatience::validate(oracle::kEstimatedValues, oracle::kQuarterMasses);
  const auto truth = DiscreteImpatience::validate(oracle::kTrueValues, oracle::kQuarterMasses);
  CHECK(rate_pmf(a, est, a.all_levels()).probabilities == std::vector<double>{0.25, 0.25, 0.5});
  CHECK(rate_pmf(b, truth, b.all_levels()).probabilities == std::vector<double>{0.5, 0.0, 0.5});
  CHECK(rate_pmf(a, truth, LevelSet::from_mask(0b011)).probabilities == std::vector<double>{0.25, 0.75, 0.0});
}

TEST_CASE("mixture pmf sums to one") {
  const auto a = oracle::scheme(oracle::kSchemeA);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 1 + trial % 4;
    const double lo = 10 * u(rng);
    const double hi = lo + 5 + 30 * u(rng);
    std::vector<MixtureComponent> components;
    double total = 0;
    for (std::size_t c = 0; c < k; ++c) {
      components.push_back({u(rng) + 0.05, lo + (hi - lo) * u(rng), 0.5 + 6 * u(rng)});
      total += components.back().weight;
    }
    for (auto& c : components) c.weight /= total;
    const auto m = MixtureImpatience::validate(components, lo, hi);
    for (std::uint32_t mask = 1; mask < 8; ++mask) {
      const auto pmf = rate_pmf(a, m, LevelSet::from_mask(mask));
      double sum = 0;
      for (std::size_t l = 0; l < 3; ++l) {
        sum += pmf.probabilities[l];
        if (!LevelSet::from_mask(mask).contains(l)) CHECK(pmf.probabilities[l] == 0.0);
      }
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("property: thresholds agree with brute-force argmin on random schemes") {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> alpha_dist(-5.0, 120.0);
  std::size_t compared = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t L = 1 + trial % 5;
    const auto s = random_scheme(rng, L);
    const std::uint32_t full = (1u << L) - 1;
    const std::uint32_t mask = trial % 3 == 0 ? full : 1 + static_cast<std::uint32_t>(rng() % full);
    const auto regions = thresholds(s.scheme, LevelSet::from_mask(mask));
    for (int draw = 0; draw < 50; ++draw) {
      const double alpha = alpha_dist(rng);
      const auto expected = oracle::argmin_level(s.raw, mask, 1.0, alpha);
      if (!expected) continue;
      const auto got = regions.classify(alpha);
      REQUIRE(got.has_value());
      CHECK(*got == *expected);
      ++compared;
    }
  }
  CHECK(compared > 40000);
}

TEST_CASE("property: select_level is invariant in x") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> alpha_dist(0.0, 80.0);
  std::uniform_real_distribution<double> x_dist(0.1, 500.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto s = random_scheme(rng, 2 + trial % 4);
    const double alpha = alpha_dist(rng);
    const auto reference = select_level_tie_break(1.0, alpha, s.scheme, s.scheme.all_levels());
    if (reference.tie) continue;
    for (int k = 0; k < 5; ++k) {
      const double x = x_dist(rng);
      CHECK(select_level(x, alpha, s.scheme, s.scheme.all_levels()) == reference.level);
      const auto direct = oracle::argmin_level(s.raw, (1u << s.raw.size()) - 1, x, alpha);
      if (direct) CHECK(*direct == reference.level);
    }
  }
}

void check_bound(double got, double want) {
  if (std::isfinite(want)) {
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
  } else {
    CHECK(got == want);
  }
}

TEST_CASE("property: a uniform price shift leaves choices unchanged") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> alpha_dist(0.0, 80.0);
  std::uniform_real_distribution<double> shift_dist(-0.01, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto s = random_scheme(rng, 2 + trial % 4);
    const double c = shift_dist(rng);
    auto shifted_raw = s.raw;
    for (auto& l : shifted_raw) l.price += c;
    const auto shifted = oracle::scheme(shifted_raw);
    const auto r0 = thresholds(s.scheme);
    const auto r1 = thresholds(shifted);
    for (std::size_t l = 0; l < s.raw.size(); ++l) {
      check_bound(r1.region(l).lower, r0.region(l).lower);
      check_bound(r1.region(l).upper, r0.region(l).upper);
    }
    const double alpha = alpha_dist(rng);
    const auto before = select_level_tie_break(30, alpha, s.scheme, s.scheme.all_levels());
    const auto after = select_level_tie_break(30, alpha, shifted, shifted.all_levels());
    if (!before.tie && !after.tie) CHECK(before.level == after.level);
  }
}

TEST_CASE("property: pmf normalization, dominated levels get zero, select_level agrees with regions") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> alpha_dist(0.0, 60.0);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto s = random_scheme(rng, 1 + trial % 5);
    std::vector<double> values, masses;
    double total = 0;
    for (int m = 0; m < 5; ++m) {
      values.push_back(alpha_dist(rng));
      masses.push_back(u(rng));
      total += masses.back();
    }
    std::sort(values.begin(), values.end());
    if (std::adjacent_find(values.begin(), values.end()) != values.end()) continue;
    for (auto& m : masses) m /= total;
    DiscreteImpatience imp;
    try {
      imp = DiscreteImpatience::validate(values, masses);
      validate_ambiguity(s.scheme, imp);
    } catch (const ValidationError&) {
      continue;
    }
    const auto pmf = rate_pmf(s.scheme, imp, s.scheme.all_levels());
    double sum = 0;
    for (double p : pmf.probabilities) sum += p;
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    const auto regions = thresholds(s.scheme);
    for (auto d : dominated_levels(s.scheme, s.scheme.all_levels())) CHECK(pmf.probabilities[d] == 0.0);
    for (double a : imp.values()) {
      CHECK(select_level(10, a, s.scheme, s.scheme.all_levels()) == regions.classify(a).value());
    }
  }
}

}  // TEST_SUITE
