// SPDX-License-Identifier: Apache-2.0
#include "chargesense/reproduce.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "chargesense/choice.hpp"
#include "chargesense/occupancy.hpp"
#include "chargesense/scenario_io.hpp"

namespace chargesense {

namespace {

// Case-study facility: lambda = 30 EVs/hr, demand U(5, 100) kWh, rates 15/30/35 kW.
constexpr std::string_view kSchemeAEstimated = R"({
  "lambda": 30,
  "demand": {"x_min": 5, "x_max": 100, "shape": "uniform"},
  "impatience": {"kind": "discrete", "values": [2, 10, 20, 25], "masses": [0.25, 0.25, 0.25, 0.25]},
  "scheme": {"levels": [{"rate": 15, "price": 0.15}, {"rate": 30, "price": 0.25}, {"rate": 35, "price": 0.32}]}
})";

constexpr std::string_view kSchemeATrue = R"({
  "lambda": 30,
  "demand": {"x_min": 5, "x_max": 100, "shape": "uniform"},
  "impatience": {"kind": "discrete", "values": [2, 5.5, 20, 25], "masses": [0.25, 0.25, 0.25, 0.25]},
  "scheme": {"levels": [{"rate": 15, "price": 0.15}, {"rate": 30, "price": 0.25}, {"rate": 35, "price": 0.32}]}
})";

constexpr std::string_view kSchemeBEstimated = R"({
  "lambda": 30,
  "demand": {"x_min": 5, "x_max": 100, "shape": "uniform"},
  "impatience": {"kind": "discrete", "values": [2, 10, 20, 25], "masses": [0.25, 0.25, 0.25, 0.25]},
  "scheme": {"levels": [{"rate": 15, "price": 0.05}, {"rate": 30, "price": 0.25}, {"rate": 35, "price": 0.33}]}
})";

constexpr std::string_view kSchemeBTrue = R"({
  "lambda": 30,
  "demand": {"x_min": 5, "x_max": 100, "shape": "uniform"},
  "impatience": {"kind": "discrete", "values": [2, 5.5, 20, 25], "masses": [0.25, 0.25, 0.25, 0.25]},
  "scheme": {"levels": [{"rate": 15, "price": 0.05}, {"rate": 30, "price": 0.25}, {"rate": 35, "price": 0.33}]}
})";

constexpr std::string_view kSchemeAHeterogeneous = R"({
  "lambda": 30,
  "demand": {"x_min": 5, "x_max": 100, "shape": "uniform"},
  "impatience": {"kind": "discrete", "values": [2, 5.5, 20, 25], "masses": [0.25, 0.25, 0.25, 0.25]},
  "scheme": {"levels": [{"rate": 15, "price": 0.15}, {"rate": 30, "price": 0.25}, {"rate": 35, "price": 0.32}]},
  "subpopulations": [
    {"subset": [1], "share": 0.25},
    {"subset": [2], "share": 0},
    {"subset": [3], "share": 0},
    {"subset": [1, 2], "share": 0.25},
    {"subset": [1, 3], "share": 0},
    {"subset": [2, 3], "share": 0},
    {"subset": [1, 2, 3], "share": 0.5}
  ]
})";

constexpr std::string_view kSchemeBHeterogeneous = R"({
  "lambda": 30,
  "demand": {"x_min": 5, "x_max": 100, "shape": "uniform"},
  "impatience": {"kind": "discrete", "values": [2, 5.5, 20, 25], "masses": [0.25, 0.25, 0.25, 0.25]},
  "scheme": {"levels": [{"rate": 15, "price": 0.05}, {"rate": 30, "price": 0.25}, {"rate": 35, "price": 0.33}]},
  "subpopulations": [
    {"subset": [1], "share": 0.25},
    {"subset": [2], "share": 0},
    {"subset": [3], "share": 0},
    {"subset": [1, 2], "share": 0.25},
    {"subset": [1, 3], "share": 0},
    {"subset": [2, 3], "share": 0},
    {"subset": [1, 2, 3], "share": 0.5}
  ]
})";

struct Fixture {
  std::string_view name;
  std::string_view json;
};

constexpr std::array<Fixture, 6> kFixtures{{
    {"scheme-a-estimated", kSchemeAEstimated},
    {"scheme-a-true", kSchemeATrue},
    {"scheme-b-estimated", kSchemeBEstimated},
    {"scheme-b-true", kSchemeBTrue},
    {"scheme-a-heterogeneous", kSchemeAHeterogeneous},
    {"scheme-b-heterogeneous", kSchemeBHeterogeneous},
}};

double relative(double expected, double tolerance) { return tolerance * std::abs(expected); }

std::string percent(const std::optional<double>& value) {
  return value ? fmt::format("{:.2f}%", 100.0 * *value) : std::string("undefined");
}

}  // namespace

ReproductionRecord make_record(std::string name, double expected, double computed, double tolerance,
                               std::string note) {
  ReproductionRecord record;
  record.name = std::move(name);
  record.expected = expected;
  record.computed = computed;
  record.tolerance = tolerance;
  record.passed = std::abs(computed - expected) <= tolerance;
  record.note = std::move(note);
  return record;
}

std::vector<std::string> bundled_fixture_names() {
  std::vector<std::string> out;
  for (const auto& f : kFixtures) out.emplace_back(f.name);
  return out;
}

std::string_view bundled_fixture_json(std::string_view name) {
  for (const auto& f : kFixtures) {
    if (f.name == name) return f.json;
  }
  throw std::out_of_range("no bundled fixture named " + std::string(name));
}

Scenario bundled_fixture(std::string_view name) { return parse_scenario(bundled_fixture_json(name)); }

std::vector<ReproductionRecord> reproduce() {
  constexpr double kExactRelative = 1e-9;
  std::vector<ReproductionRecord> records;

  const auto a_est = bundled_fixture("scheme-a-estimated");
  const auto a_true = bundled_fixture("scheme-a-true");
  const auto b_est = bundled_fixture("scheme-b-estimated");
  const auto b_true = bundled_fixture("scheme-b-true");
  const auto a_het = bundled_fixture("scheme-a-heterogeneous");
  const auto b_het = bundled_fixture("scheme-b-heterogeneous");

  // Choice-region boundaries.
  const auto regions_a = thresholds(a_est.scheme());
  const auto regions_b = thresholds(b_est.scheme());
  records.push_back(make_record("regions/scheme-a/upper-1", 3.0, regions_a.region(0).upper, 1e-9));
  records.push_back(make_record("regions/scheme-a/upper-2", 14.7, regions_a.region(1).upper, 1e-9));
  records.push_back(make_record("regions/scheme-b/upper-1", 6.0, regions_b.region(0).upper, 1e-9));
  records.push_back(make_record("regions/scheme-b/upper-2", 16.8, regions_b.region(1).upper, 1e-9));

  // Expected occupancy, discrete impatience.
  const double occ_a_est = expected_occupancy(a_est).expected_occupancy;
  const double occ_b_est = expected_occupancy(b_est).expected_occupancy;
  const double occ_a_true = expected_occupancy(a_true).expected_occupancy;
  const double occ_b_true = expected_occupancy(b_true).expected_occupancy;
  records.push_back(make_record("occupancy/scheme-a/estimated", 61.875, occ_a_est,
                                relative(61.875, kExactRelative)));
  records.push_back(make_record("occupancy/scheme-b/estimated", 61.875, occ_b_est,
                                relative(61.875, kExactRelative)));
  records.push_back(make_record("occupancy/scheme-a/true-discrete", 61.875, occ_a_true,
                                relative(61.875, kExactRelative)));
  records.push_back(make_record("occupancy/scheme-b/true-discrete", 75.0, occ_b_true,
                                relative(75.0, kExactRelative)));

  // Continuous impatience: the mixture parameters are unpublished, so the
  // published choice probabilities drive the occupancy formula directly.
  const auto scale = OccupancyScale::of(a_est);
  const double occ_a_cont =
      occupancy_from_probabilities(scale, a_est.scheme(), {0.221, 0.281, 0.498}).expected_occupancy;
  const double occ_b_cont =
      occupancy_from_probabilities(scale, b_est.scheme(), {0.431, 0.070, 0.499}).expected_occupancy;
  records.push_back(make_record("occupancy/scheme-a/true-multimodal", 60.38, occ_a_cont, 0.02,
                                "from choice probabilities 0.221/0.281/0.498"));
  records.push_back(make_record("occupancy/scheme-b/true-multimodal", 71.40, occ_b_cont, 0.02,
                                "from choice probabilities 0.431/0.070/0.499"));

  // Heterogeneous populations: marginal choice probabilities and occupancy.
  const auto het_a = expected_occupancy_mixed(a_het);
  const auto het_b = expected_occupancy_mixed(b_het);
  const std::array<double, 3> marginals_a{0.4375, 0.3125, 0.25};
  const std::array<double, 3> marginals_b{0.625, 0.125, 0.25};
  for (std::size_t l = 0; l < 3; ++l) {
    records.push_back(make_record(fmt::format("heterogeneous/scheme-a/P(level {})", l + 1), marginals_a[l],
                                  het_a.level_probabilities[l], 0.0));
  }
  for (std::size_t l = 0; l < 3; ++l) {
    records.push_back(make_record(fmt::format("heterogeneous/scheme-b/P(level {})", l + 1), marginals_b[l],
                                  het_b.level_probabilities[l], 0.0));
  }
  records.push_back(make_record("heterogeneous/scheme-a/occupancy", 73.59375, het_a.expected_occupancy,
                                relative(73.59375, kExactRelative)));
  records.push_back(make_record("heterogeneous/scheme-b/occupancy", 83.4375, het_b.expected_occupancy,
                                relative(83.4375, kExactRelative)));

  // Estimation errors, Delta = true - estimated. Both relative conventions are
  // kept in the note; the record asserts the one the published figure matches.
  const auto add_error = [&](std::string name, double estimated, double truth, bool versus_true,
                             double expected, std::string claim) {
    const auto err = occupancy_error(estimated, truth);
    const double computed = versus_true ? err.relative_to_true.value_or(NAN) : err.relative_to_estimated.value_or(NAN);
    records.push_back(make_record(
        std::move(name), expected, computed, 1e-9,
        fmt::format("{}; delta/estimated {}, delta/true {}", claim, percent(err.relative_to_estimated),
                    percent(err.relative_to_true))));
  };
  add_error("error/discrete/scheme-a (delta/estimated)", occ_a_est, occ_a_true, false, 0.0,
            "published: no error");
  add_error("error/discrete/scheme-b (delta/estimated)", occ_b_est, occ_b_true, false, 0.21212121212121213,
            "published: over 20%");
  add_error("error/multimodal/scheme-a (delta/estimated)", occ_a_est, occ_a_cont, false,
            -0.024363636363636365, "published: approximately 3%");
  add_error("error/multimodal/scheme-b (delta/estimated)", occ_b_est, occ_b_cont, false,
            0.1536969696969697, "published: over 15%");
  add_error("error/heterogeneous/scheme-a (delta/true)", occ_a_est, het_a.expected_occupancy, true,
            0.1592356687898089, "published: approximately 15%");
  add_error("error/heterogeneous/scheme-b (delta/true)", occ_b_est, het_b.expected_occupancy, true,
            0.25842696629213485, "published: approximately 25%");
  add_error("error/heterogeneous-known-impatience/scheme-a (delta/true)", occ_a_true,
            het_a.expected_occupancy, true, 0.1592356687898089, "published: approximately 15%");
  add_error("error/heterogeneous-known-impatience/scheme-b (delta/true)", occ_b_true,
            het_b.expected_occupancy, true, 0.10112359550561797, "published: approximately 10%");

  return records;
}

bool all_passed(const std::vector<ReproductionRecord>& records) {
  for (const auto& r : records) {
    if (!r.passed) return false;
  }
  return true;
}

}  // namespace chargesense
