// SPDX-License-Identifier: Apache-2.0
#include "json_codec.hpp"

#include <cmath>
#include <set>

#include "chargesense/scenario_io.hpp"

namespace chargesense::codec {

namespace {

std::string child(const std::string& pointer, std::string_view key) {
  return pointer + "/" + std::string(key);
}

std::string child(const std::string& pointer, std::size_t index) {
  return pointer + "/" + std::to_string(index);
}

const json& require_key(const json& object, const std::string& pointer, std::string_view key) {
  const auto it = object.find(std::string(key));
  if (it == object.end()) throw SchemaError(child(pointer, key), "missing required key");
  return *it;
}

void require_object(const json& value, const std::string& pointer) {
  if (!value.is_object()) throw SchemaError(pointer, "expected an object");
}

void require_array(const json& value, const std::string& pointer) {
  if (!value.is_array()) throw SchemaError(pointer, "expected an array");
}

void reject_unknown_keys(const json& object, const std::string& pointer,
                         std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : object.items()) {
    bool known = false;
    for (auto name : allowed) known = known || key == name;
    if (!known) throw SchemaError(child(pointer, key), "unknown key");
  }
}

double read_number(const json& value, const std::string& pointer) {
  if (!value.is_number()) throw SchemaError(pointer, "expected a number");
  const double out = value.get<double>();
  if (!std::isfinite(out)) throw SchemaError(pointer, "expected a finite number");
  return out;
}

double read_number(const json& object, const std::string& pointer, std::string_view key) {
  return read_number(require_key(object, pointer, key), child(pointer, key));
}

std::string read_string(const json& object, const std::string& pointer, std::string_view key) {
  const auto& value = require_key(object, pointer, key);
  if (!value.is_string()) throw SchemaError(child(pointer, key), "expected a string");
  return value.get<std::string>();
}

std::vector<double> read_numbers(const json& object, const std::string& pointer, std::string_view key) {
  const auto& value = require_key(object, pointer, key);
  const auto here = child(pointer, key);
  require_array(value, here);
  std::vector<double> out;
  for (std::size_t i = 0; i < value.size(); ++i) out.push_back(read_number(value[i], child(here, i)));
  return out;
}

DiscreteImpatience read_discrete(const json& value, const std::string& pointer) {
  reject_unknown_keys(value, pointer, {"kind", "values", "masses"});
  return DiscreteImpatience::validate(read_numbers(value, pointer, "values"),
                                      read_numbers(value, pointer, "masses"));
}

Impatience read_impatience(const json& value, const std::string& pointer) {
  require_object(value, pointer);
  const auto kind = read_string(value, pointer, "kind");
  if (kind == "discrete") return read_discrete(value, pointer);
  if (kind == "mixture") {
    reject_unknown_keys(value, pointer, {"kind", "components", "support"});
    const auto& components = require_key(value, pointer, "components");
    const auto here = child(pointer, "components");
    require_array(components, here);
    std::vector<MixtureComponent> parsed;
    for (std::size_t i = 0; i < components.size(); ++i) {
      const auto at = child(here, i);
      require_object(components[i], at);
      reject_unknown_keys(components[i], at, {"weight", "mean", "stddev"});
      parsed.push_back({read_number(components[i], at, "weight"), read_number(components[i], at, "mean"),
                        read_number(components[i], at, "stddev")});
    }
    const auto& support = require_key(value, pointer, "support");
    const auto support_at = child(pointer, "support");
    require_object(support, support_at);
    reject_unknown_keys(support, support_at, {"lo", "hi"});
    return MixtureImpatience::validate(std::move(parsed), read_number(support, support_at, "lo"),
                                       read_number(support, support_at, "hi"));
  }
  throw SchemaError(child(pointer, "kind"), "expected \"discrete\" or \"mixture\"");
}

json impatience_to_json(const DiscreteImpatience& impatience) {
  return {{"kind", "discrete"},
          {"values", std::vector<double>(impatience.values().begin(), impatience.values().end())},
          {"masses", std::vector<double>(impatience.masses().begin(), impatience.masses().end())}};
}

json impatience_to_json(const MixtureImpatience& impatience) {
  json components = json::array();
  for (const auto& c : impatience.components()) {
    components.push_back({{"weight", c.weight}, {"mean", c.mean}, {"stddev", c.stddev}});
  }
  return {{"kind", "mixture"},
          {"components", std::move(components)},
          {"support", {{"lo", impatience.lo()}, {"hi", impatience.hi()}}}};
}

std::vector<std::size_t> one_based(const std::vector<std::size_t>& levels) {
  std::vector<std::size_t> out;
  for (auto l : levels) out.push_back(l + 1);
  return out;
}

}  // namespace

json number_or_null(double value) {
  if (std::isfinite(value)) return value;
  return nullptr;
}

Scenario scenario_from_json(const json& document) {
  const std::string root;
  require_object(document, root);
  reject_unknown_keys(document, root,
                      {"lambda", "demand", "impatience", "scheme", "subpopulations", "departure"});

  ScenarioInput input;
  input.arrival_rate = read_number(document, root, "lambda");
  if (input.arrival_rate < 0.0) throw SchemaError("/lambda", "arrival rate must be nonnegative");

  const auto& demand = require_key(document, root, "demand");
  require_object(demand, "/demand");
  reject_unknown_keys(demand, "/demand", {"x_min", "x_max", "shape"});
  if (demand.contains("shape")) {
    const auto shape = read_string(demand, "/demand", "shape");
    if (shape != "uniform") throw SchemaError("/demand/shape", "only \"uniform\" demand is supported");
  }
  input.demand = DemandModel::uniform(read_number(demand, "/demand", "x_min"),
                                      read_number(demand, "/demand", "x_max"));

  input.impatience = read_impatience(require_key(document, root, "impatience"), "/impatience");

  const auto& scheme = require_key(document, root, "scheme");
  require_object(scheme, "/scheme");
  reject_unknown_keys(scheme, "/scheme", {"levels", "max_rate"});
  const auto& levels = require_key(scheme, "/scheme", "levels");
  require_array(levels, "/scheme/levels");
  std::vector<ServiceLevel> parsed_levels;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto at = child("/scheme/levels", i);
    require_object(levels[i], at);
    reject_unknown_keys(levels[i], at, {"rate", "price"});
    parsed_levels.push_back({read_number(levels[i], at, "rate"), read_number(levels[i], at, "price")});
  }
  std::optional<double> max_rate;
  if (scheme.contains("max_rate")) max_rate = read_number(scheme, "/scheme", "max_rate");
  input.scheme = PricingScheme::validate(std::move(parsed_levels), max_rate);

  if (document.contains("subpopulations") && !document["subpopulations"].is_null()) {
    const auto& subpopulations = document["subpopulations"];
    require_array(subpopulations, "/subpopulations");
    std::vector<SubPopulation> entries;
    for (std::size_t i = 0; i < subpopulations.size(); ++i) {
      const auto at = child("/subpopulations", i);
      const auto& entry = subpopulations[i];
      require_object(entry, at);
      reject_unknown_keys(entry, at, {"subset", "share", "impatience"});
      const auto& subset = require_key(entry, at, "subset");
      require_array(subset, child(at, "subset"));
      std::uint32_t mask = 0;
      for (std::size_t j = 0; j < subset.size(); ++j) {
        const auto level_at = child(child(at, "subset"), j);
        if (!subset[j].is_number_integer()) throw SchemaError(level_at, "expected a level number");
        const auto level = subset[j].get<long long>();
        if (level < 1 || static_cast<std::size_t>(level) > input.scheme.size()) {
          throw SchemaError(level_at, "level number out of range (levels are numbered from 1)");
        }
        mask |= std::uint32_t{1} << (level - 1);
      }
      SubPopulation parsed;
      parsed.subset = LevelSet::from_mask(mask);
      parsed.share = read_number(entry, at, "share");
      if (entry.contains("impatience")) {
        const auto& imp = entry["impatience"];
        const auto imp_at = child(at, "impatience");
        require_object(imp, imp_at);
        if (read_string(imp, imp_at, "kind") != "discrete") {
          throw SchemaError(child(imp_at, "kind"), "sub-population impatience must be discrete");
        }
        parsed.impatience = read_discrete(imp, imp_at);
      }
      entries.push_back(std::move(parsed));
    }
    input.subpopulations = SubPopulationMix::validate(std::move(entries), input.scheme.size());
  }

  if (document.contains("departure") && !document["departure"].is_null()) {
    const auto& departure = document["departure"];
    require_object(departure, "/departure");
    reject_unknown_keys(departure, "/departure", {"kind", "mean", "lo", "hi"});
    const auto kind = read_string(departure, "/departure", "kind");
    if (kind == "always-complete") {
      if (departure.contains("mean") && read_number(departure, "/departure", "mean") != 1.0) {
        throw SchemaError("/departure/mean", "always-complete implies mean 1");
      }
      input.departure = EarlyDeparture::always_complete();
    } else if (kind == "point-mass") {
      input.departure = EarlyDeparture::point_mass(read_number(departure, "/departure", "mean"));
    } else if (kind == "uniform-interval") {
      input.departure = EarlyDeparture::uniform_interval(read_number(departure, "/departure", "lo"),
                                                         read_number(departure, "/departure", "hi"));
      if (departure.contains("mean") &&
          std::abs(read_number(departure, "/departure", "mean") - input.departure.mean()) > 1e-12) {
        throw SchemaError("/departure/mean", "mean disagrees with (lo + hi) / 2");
      }
    } else {
      throw SchemaError("/departure/kind",
                        "expected \"always-complete\", \"point-mass\" or \"uniform-interval\"");
    }
  }

  return Scenario::validate(std::move(input));
}

json scenario_to_json(const Scenario& scenario) {
  json levels = json::array();
  for (const auto& level : scenario.scheme().levels()) {
    levels.push_back({{"rate", level.rate_kw}, {"price", level.price_per_kwh}});
  }
  json out = {
      {"lambda", scenario.arrival_rate()},
      {"demand",
       {{"x_min", scenario.demand().x_min()}, {"x_max", scenario.demand().x_max()}, {"shape", "uniform"}}},
      {"impatience", std::visit([](const auto& m) { return impatience_to_json(m); }, scenario.impatience())},
      {"scheme", {{"levels", std::move(levels)}}},
  };
  if (const auto& mix = scenario.subpopulations()) {
    json entries = json::array();
    for (const auto& entry : mix->entries()) {
      json e = {{"subset", one_based(entry.subset.members())}, {"share", entry.share}};
      if (entry.impatience) e["impatience"] = impatience_to_json(*entry.impatience);
      entries.push_back(std::move(e));
    }
    out["subpopulations"] = std::move(entries);
  }
  const auto& departure = scenario.departure();
  json dep = {{"kind", to_string(departure.kind())}};
  switch (departure.kind()) {
    case DepartureKind::kAlwaysComplete:
      break;
    case DepartureKind::kPointMass:
      dep["mean"] = departure.mean();
      break;
    case DepartureKind::kUniformInterval:
      dep["lo"] = departure.lo();
      dep["hi"] = departure.hi();
      break;
  }
  out["departure"] = std::move(dep);
  return out;
}

SimConfig sim_config_from_json(const json& document, const std::string& pointer) {
  SimConfig config;
  if (document.is_null()) return config;
  require_object(document, pointer);
  reject_unknown_keys(document, pointer, {"horizon", "seed", "replications", "warmup"});
  if (document.contains("horizon")) config.horizon_hours = read_number(document, pointer, "horizon");
  if (document.contains("seed")) {
    const auto& seed = document["seed"];
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
      throw SchemaError(child(pointer, "seed"), "expected a nonnegative integer");
    }
    config.seed = seed.get<std::uint64_t>();
  }
  if (document.contains("replications")) {
    const auto& reps = document["replications"];
    if (!reps.is_number_integer() || reps.get<long long>() < 1) {
      throw SchemaError(child(pointer, "replications"), "expected a positive integer");
    }
    config.replications = reps.get<std::size_t>();
  }
  if (document.contains("warmup")) config.warmup_hours = read_number(document, pointer, "warmup");
  config.validate();
  return config;
}

SweepSpec sweep_spec_from_json(const json& document, const std::string& pointer) {
  require_object(document, pointer);
  reject_unknown_keys(document, pointer, {"index", "from", "to"});
  const auto& index = require_key(document, pointer, "index");
  if (!index.is_number_integer() || index.get<long long>() < 1) {
    throw SchemaError(child(pointer, "index"), "expected a value number (numbered from 1)");
  }
  SweepSpec spec;
  spec.value_index = index.get<std::size_t>() - 1;
  spec.from = read_number(document, pointer, "from");
  spec.to = read_number(document, pointer, "to");
  return spec;
}

// ---------------------------------------------------------------------------

json to_json(const OccupancyReport& report) {
  return {{"expected_occupancy", report.expected_occupancy},
          {"level_probabilities", report.level_probabilities},
          {"mean_inverse_rate", report.mean_inverse_rate},
          {"mean_demand", report.mean_demand},
          {"mean_completion", report.mean_completion}};
}

json to_json(const ChoiceRegions& regions, const PricingScheme& scheme) {
  json levels = json::array();
  std::vector<std::size_t> dominated;
  for (std::size_t k = 0; k < regions.level_count(); ++k) {
    if (!regions.allowed().contains(k)) continue;
    const auto& region = regions.region(k);
    levels.push_back({{"level", k + 1},
                      {"rate", scheme.rate(k)},
                      {"price", scheme.price(k)},
                      {"lower", number_or_null(region.lower)},
                      {"upper", number_or_null(region.upper)},
                      {"dominated", region.dominated()}});
    if (region.dominated()) dominated.push_back(k + 1);
  }
  return {{"levels", std::move(levels)},
          {"boundaries", regions.boundaries()},
          {"dominated_levels", std::move(dominated)}};
}

json to_json(const SensitivityReport& report) {
  json jumps = json::array();
  for (const auto& jump : report.jumps) {
    jumps.push_back({{"value_index", jump.value_index + 1},
                     {"boundary", jump.boundary},
                     {"magnitude", jump.magnitude}});
  }
  return {{"worst_case_bound", report.worst_case_bound},
          {"grad_p", report.grad_p},
          {"grad_pB", report.grad_pB},
          {"jumps", std::move(jumps)},
          {"d_occupancy_d_mean_theta", report.d_occupancy_d_mean_theta}};
}

json to_json(const StepFunction& step) {
  return {{"value_index", step.value_index + 1},
          {"from", step.range_lo},
          {"to", step.range_hi},
          {"breakpoints", step.breakpoints},
          {"plateaus", step.plateaus}};
}

json to_json(const SimResult& result) {
  json out = {{"time_average_occupancy", result.time_average_occupancy},
              {"standard_error", result.standard_error},
              {"replication_averages", result.replication_averages},
              {"level_frequencies", result.level_frequencies},
              {"mean_demand", result.mean_demand},
              {"mean_completion", result.mean_completion},
              {"mean_service_hours", result.mean_service_hours},
              {"arrivals", result.arrivals},
              {"tie_breaks", result.tie_breaks}};
  out["mixture_acceptance_rate"] =
      result.mixture_acceptance_rate ? json(*result.mixture_acceptance_rate) : json(nullptr);
  out["chi_square_statistic"] =
      result.chi_square_statistic ? number_or_null(*result.chi_square_statistic) : json(nullptr);
  out["chi_square_p_value"] = result.chi_square_p_value ? json(*result.chi_square_p_value) : json(nullptr);
  return out;
}

json to_json(const OccupancyError& error) {
  return {{"estimated", error.estimated},
          {"true", error.truth},
          {"delta", error.delta},
          {"relative_to_estimated",
           error.relative_to_estimated ? json(*error.relative_to_estimated) : json(nullptr)},
          {"relative_to_true", error.relative_to_true ? json(*error.relative_to_true) : json(nullptr)}};
}

json to_json(const ReproductionRecord& record) {
  return {{"name", record.name},         {"expected", record.expected}, {"computed", record.computed},
          {"tolerance", record.tolerance}, {"passed", record.passed},     {"note", record.note}};
}

// ---------------------------------------------------------------------------

ErrorBody describe_exception(const std::exception& error) {
  if (const auto* e = dynamic_cast<const SchemaError*>(&error)) {
    return {400, {{"error", {{"code", "SchemaError"}, {"pointer", e->pointer()}, {"message", e->what()}}}}};
  }
  if (const auto* e = dynamic_cast<const AmbiguousImpatience*>(&error)) {
    return {422,
            {{"error",
              {{"code", e->code()},
               {"message", e->what()},
               {"value_index", e->value_index() + 1},
               {"levels", {e->level_k() + 1, e->level_i() + 1}}}}}};
  }
  if (const auto* e = dynamic_cast<const MonotonicityViolation*>(&error)) {
    return {422,
            {{"error",
              {{"code", e->code()}, {"message", e->what()}, {"levels", {e->slower() + 1, e->faster() + 1}}}}}};
  }
  if (const auto* e = dynamic_cast<const DuplicateLevel*>(&error)) {
    return {422,
            {{"error",
              {{"code", e->code()}, {"message", e->what()}, {"levels", {e->first() + 1, e->second() + 1}}}}}};
  }
  if (const auto* e = dynamic_cast<const TieDetected*>(&error)) {
    return {422,
            {{"error",
              {{"code", e->code()}, {"message", e->what()}, {"levels", {e->level_k() + 1, e->level_i() + 1}}}}}};
  }
  if (const auto* e = dynamic_cast<const AssumptionViolation*>(&error)) {
    return {422, {{"error", {{"code", e->code()}, {"message", e->what()}}}}};
  }
  if (const auto* e = dynamic_cast<const InvalidParameter*>(&error)) {
    return {400, {{"error", {{"code", e->code()}, {"field", e->field()}, {"message", e->what()}}}}};
  }
  if (const auto* e = dynamic_cast<const ValidationError*>(&error)) {
    return {400, {{"error", {{"code", e->code()}, {"message", e->what()}}}}};
  }
  if (dynamic_cast<const json::exception*>(&error)) {
    return {400, {{"error", {{"code", "SchemaError"}, {"pointer", ""}, {"message", error.what()}}}}};
  }
  return {500, {{"error", {{"code", "InternalError"}, {"message", error.what()}}}}};
}

}  // namespace chargesense::codec
