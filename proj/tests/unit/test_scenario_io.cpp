// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>

#include "chargesense/occupancy.hpp"
#include "chargesense/reproduce.hpp"
#include "chargesense/scenario_io.hpp"

using namespace chargesense;

namespace {

const std::filesystem::path kData = CHARGESENSE_DATA_DIR;

std::string pointer_of(std::string_view text) {
  try {
    parse_scenario(text);
  } catch (const SchemaError& e) {
    return e.pointer();
  }
  return "<no error>";
}

constexpr std::string_view kMinimal = R"({
  "lambda": 30,
  "demand": {"x_min": 5, "x_max": 100},
  "impatience": {"kind": "discrete", "values": [2, 10, 20, 25], "masses": [0.25, 0.25, 0.25, 0.25]},
  "scheme": {"levels": [{"rate": 35, "price": 0.32}, {"rate": 15, "price": 0.15}, {"rate": 30, "price": 0.25}]}
})";

}  // namespace

TEST_SUITE("scenario-io") {

TEST_CASE("scheme A scenario file") {
  const auto s = load_scenario_file(kData / "scheme-a-estimated.json");
  CHECK(expected_occupancy(s).expected_occupancy == doctest::Approx(61.875).epsilon(1e-12));
}

TEST_CASE("levels are sorted and shape defaults to uniform") {
  const auto s = parse_scenario(kMinimal);
  CHECK(s.scheme().rate(0) == 15);
  CHECK(s.scheme().rate(2) == 35);
  CHECK(s.demand().mean() == 52.5);
}

TEST_CASE("heterogeneous scheme B file") {
  const auto s = load_scenario_file(kData / "scheme-b-heterogeneous.json");
  const auto r = evaluate_occupancy(s);
  CHECK(r.expected_occupancy == doctest::Approx(83.4375).epsilon(1e-12));
  CHECK(r.level_probabilities == std::vector<double>{0.625, 0.125, 0.25});
}

TEST_CASE("schema errors carry a JSON pointer") {
  CHECK(pointer_of(R"({"lambda": -1, "demand": {"x_min": 5, "x_max": 100},
      "impatience": {"kind": "discrete", "values": [1], "masses": [1]},
      "scheme": {"levels": [{"rate": 15, "price": 0.1}]}})") == "/lambda");
  CHECK(pointer_of("{") == "");
  CHECK(pointer_of("[]") == "");
  CHECK(pointer_of(R"({"lambda": 1})") == "/demand");
  CHECK(pointer_of(R"({"lambda": 1, "demand": {"x_min": 5, "x_max": 100}, "extra": 1,
      "impatience": {"kind": "discrete", "values": [1], "masses": [1]},
      "scheme": {"levels": [{"rate": 15, "price": 0.1}]}})") == "/extra");
  CHECK(pointer_of(R"({"lambda": 1, "demand": {"x_min": 5, "x_max": 100},
      "impatience": {"kind": "discrete", "values": [1, "x"], "masses": [0.5, 0.5]},
      "scheme": {"levels": [{"rate": 15, "price": 0.1}]}})") == "/impatience/values/1");
  CHECK(pointer_of(R"({"lambda": 1, "demand": {"x_min": 5, "x_max": 100},
      "impatience": {"kind": "gamma"},
      "scheme": {"levels": [{"rate": 15, "price": 0.1}]}})") == "/impatience/kind");
  CHECK(pointer_of(R"({"lambda": 1, "demand": {"x_min": 5, "x_max": 100},
      "impatience": {"kind": "discrete", "values": [1], "masses": [1]},
      "scheme": {"levels": [{"rate": 15, "price": 0.1}]},
      "subpopulations": [{"subset": [0], "share": 1}]})") == "/subpopulations/0/subset/0");
  CHECK(pointer_of(R"({"lambda": 1, "demand": {"x_min": 5, "x_max": 100},
      "impatience": {"kind": "discrete", "values": [1], "masses": [1]},
      "scheme": {"levels": [{"rate": 15, "price": 0.1}]},
      "departure": {"kind": "sometimes"}})") == "/departure/kind");
}

TEST_CASE("model errors pass through") {
  CHECK_THROWS_AS(load_scenario_file(kData / "scheme-a-tie.json"), AmbiguousImpatience);
  CHECK_THROWS_AS(parse_scenario(R"({"lambda": 1, "demand": {"x_min": 5, "x_max": 100},
      "impatience": {"kind": "discrete", "values": [1], "masses": [1]},
      "scheme": {"levels": [{"rate": 15, "price": 0.3}, {"rate": 30, "price": 0.1}]}})"),
                  MonotonicityViolation);
}

TEST_CASE("round trip") {
  for (const auto& name : bundled_fixture_names()) {
    const auto s = bundled_fixture(name);
    CHECK(parse_scenario(scenario_to_json(s)) == s);
  }
  const auto mixture = load_scenario_file(kData / "scheme-a-mixture.json");
  CHECK(parse_scenario(scenario_to_json(mixture)) == mixture);
  const auto departure = parse_scenario(R"({"lambda": 3, "demand": {"x_min": 5, "x_max": 100},
      "impatience": {"kind": "discrete", "values": [1], "masses": [1]},
      "scheme": {"levels": [{"rate": 15, "price": 0.1}]},
      "departure": {"kind": "uniform-interval", "lo": 0.2, "hi": 0.6}})");
  CHECK(departure.departure().mean() == doctest::Approx(0.4));
  CHECK(parse_scenario(scenario_to_json(departure)) == departure);
}

TEST_CASE("data files match the bundled fixtures") {
  for (const auto& name : bundled_fixture_names()) {
    CAPTURE(name);
    CHECK(load_scenario_file(kData / (name + ".json")) == bundled_fixture(name));
  }
  CHECK_THROWS_AS(bundled_fixture("nope"), std::out_of_range);
}

TEST_CASE("file errors") {
  CHECK_THROWS_AS(load_scenario_file(kData / "does-not-exist.json"), IoError);
  CHECK_THROWS_AS(write_text_file("/nonexistent-dir/x.json", "{}"), IoError);
}

}  // TEST_SUITE
