// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "chargesense/model.hpp"

namespace chargesense {

/// Structural problem in a scenario document, located by a JSON pointer.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string pointer, const std::string& message)
      : std::runtime_error(message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses and validates a scenario document. Level indices in `subset` are 1-based.
/// Throws SchemaError for structural problems and ValidationError subclasses for
/// model-assumption failures.
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario_file(const std::filesystem::path& path);

/// Canonical scenario document (levels sorted by rate, impatience sorted by value).
std::string scenario_to_json(const Scenario& scenario);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace chargesense
