// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "chargesense/documents.hpp"
#include "chargesense/reproduce.hpp"

using namespace chargesense;

TEST_SUITE("reproduce") {

TEST_CASE("every record passes") {
  const auto records = reproduce();
  CHECK(records.size() >= 20);
  for (const auto& r : records) {
    CAPTURE(r.name);
    CHECK(r.passed);
  }
  CHECK(all_passed(records));
}

TEST_CASE("deterministic") {
  CHECK(reproduction_document(reproduce()) == reproduction_document(reproduce()));
}

TEST_CASE("make_record tolerance is inclusive") {
  CHECK(make_record("x", 1.0, 1.5, 0.5).passed);
  CHECK_FALSE(make_record("x", 1.0, 1.51, 0.5).passed);
  CHECK_FALSE(all_passed({make_record("a", 0, 0, 0), make_record("b", 0, 1, 0)}));
}

}  // TEST_SUITE
