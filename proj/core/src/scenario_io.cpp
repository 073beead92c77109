// SPDX-License-Identifier: Apache-2.0
#include "chargesense/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include "json_codec.hpp"

namespace chargesense {

Scenario parse_scenario(std::string_view json_text) {
  codec::json document;
  try {
    document = codec::json::parse(json_text);
  } catch (const codec::json::parse_error& e) {
    throw SchemaError("", std::string("malformed JSON: ") + e.what());
  }
  return codec::scenario_from_json(document);
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  return parse_scenario(read_text_file(path));
}

std::string scenario_to_json(const Scenario& scenario) {
  return codec::scenario_to_json(scenario).dump(2);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream contents;
  contents << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return contents.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << contents;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace chargesense
