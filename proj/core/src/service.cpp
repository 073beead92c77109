// SPDX-License-Identifier: Apache-2.0
#include "chargesense/service.hpp"

#include <httplib.h>

#include "chargesense/documents.hpp"
#include "chargesense/scenario_io.hpp"
#include "json_codec.hpp"

namespace chargesense {

namespace {

using codec::json;

json parse_body(std::string_view body) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("malformed JSON: ") + e.what());
  }
}

const json& member(const json& object, std::string_view key) {
  if (!object.is_object()) throw SchemaError("", "expected an object");
  const auto it = object.find(std::string(key));
  if (it == object.end()) throw SchemaError("/" + std::string(key), "missing required key");
  return *it;
}

void reject_unknown(const json& object, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : object.items()) {
    bool known = false;
    for (auto name : allowed) known = known || key == name;
    if (!known) throw SchemaError("/" + key, "unknown key");
  }
}

// The scenario decoder reports pointers relative to the scenario root.
Scenario nested_scenario(const json& document) {
  try {
    return codec::scenario_from_json(member(document, "scenario"));
  } catch (const SchemaError& e) {
    throw SchemaError("/scenario" + e.pointer(), e.what());
  }
}

HttpResponse ok(std::string body) { return {200, std::move(body), "application/json"}; }

HttpResponse health() {
  return ok(json{{"status", "ok"},
                 {"service", kServiceName},
                 {"version", kServiceVersion},
                 {"compiler", __VERSION__},
                 {"cplusplus", __cplusplus}}
                .dump(2));
}

HttpResponse evaluate(std::string_view body) {
  return ok(evaluate_document(parse_scenario(body)));
}

HttpResponse sweep(std::string_view body) {
  const auto document = parse_body(body);
  reject_unknown(document, {"scenario", "sweep"});
  const auto scenario = nested_scenario(document);
  const auto spec = codec::sweep_spec_from_json(member(document, "sweep"), "/sweep");
  return ok(sweep_document(sweep_impatience_value(scenario, spec.value_index, spec.from, spec.to)));
}

HttpResponse simulate_request(std::string_view body) {
  const auto document = parse_body(body);
  reject_unknown(document, {"scenario", "config"});
  const auto scenario = nested_scenario(document);
  const auto config = codec::sim_config_from_json(document.value("config", json()), "/config");
  return ok(simulate_document(scenario, config, simulate(scenario, config)));
}

HttpResponse error_response(int status, std::string code, std::string message) {
  return {status, json{{"error", {{"code", std::move(code)}, {"message", std::move(message)}}}}.dump(2),
          "application/json"};
}

}  // namespace

HttpResponse handle_request(std::string_view method, std::string_view path, std::string_view body) {
  struct Route {
    std::string_view method;
    std::string_view path;
    HttpResponse (*handler)(std::string_view);
  };
  static constexpr Route kRoutes[] = {
      {"POST", "/v1/evaluate", evaluate},
      {"POST", "/v1/sweep", sweep},
      {"POST", "/v1/simulate", simulate_request},
      {"GET", "/v1/health", [](std::string_view) { return health(); }},
  };

  bool path_known = false;
  for (const auto& route : kRoutes) {
    if (route.path != path) continue;
    path_known = true;
    if (route.method != method) continue;
    try {
      return route.handler(body);
    } catch (const std::exception& e) {
      auto described = error_document(e);
      return {described.status, std::move(described.body), "application/json"};
    }
  }
  if (path_known) return error_response(405, "MethodNotAllowed", std::string(method) + " not allowed here");
  return error_response(404, "NotFound", "no route for " + std::string(path));
}

HttpService::HttpService() : server_(std::make_unique<httplib::Server>()) {
  const auto forward = [](const httplib::Request& request, httplib::Response& response) {
    const auto result = handle_request(request.method, request.path, request.body);
    response.status = result.status;
    response.set_content(result.body, result.content_type);
  };
  server_->Get(R"(/v1/.*)", forward);
  server_->Post(R"(/v1/.*)", forward);
}

HttpService::~HttpService() { stop(); }

int HttpService::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpService::listen() { return server_->is_valid() && server_->listen_after_bind(); }

void HttpService::stop() { server_->stop(); }

bool serve(const std::string& host, int port) {
  HttpService service;
  if (service.bind(host, port) < 0) return false;
  return service.listen();
}

}  // namespace chargesense
