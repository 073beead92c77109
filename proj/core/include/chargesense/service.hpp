// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace httplib {
class Server;
}

namespace chargesense {

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Stateless request handler behind the HTTP service:
///   POST /v1/evaluate  scenario                        -> evaluate document
///   POST /v1/sweep     {"scenario", "sweep": {"index", "from", "to"}} -> step function
///   POST /v1/simulate  {"scenario", "config"?: {...}}  -> simulate document
///   GET  /v1/health                                    -> build info
/// Schema and parameter errors answer 400; assumption violations answer 422.
HttpResponse handle_request(std::string_view method, std::string_view path, std::string_view body);

/// HTTP/1.1 front end for handle_request. Requests are handled concurrently.
class HttpService {
 public:
  HttpService();
  ~HttpService();
  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  /// Port 0 picks a free port. Returns the bound port, or -1 on failure.
  int bind(const std::string& host, int port);
  /// Blocks until stop(). Returns false if not bound.
  bool listen();
  void stop();

 private:
  std::unique_ptr<httplib::Server> server_;
};

/// Blocks serving handle_request over HTTP/1.1 until the process is stopped.
/// Returns false if the socket cannot be bound.
bool serve(const std::string& host, int port);

inline constexpr std::string_view kServiceName = "chargesense";
inline constexpr std::string_view kServiceVersion = "0.1.0";

}  // namespace chargesense
