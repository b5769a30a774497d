#pragma once

// Eigen must come before httplib: <resolv.h> defines a `_res` macro.
#include "semgeo/util/linalg.hpp"

#include "httplib.h"

#include <cmath>
#include <span>
#include <string>
#include <utility>

#include "semgeo/embed/fetch.hpp"
#include "semgeo/embed/provider.hpp"

namespace semgeo {

/// Splits "scheme://host[:port][/prefix]" into the origin and path prefix.
inline std::pair<std::string, std::string> split_base_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  const std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto slash = url.find('/', host_start);
  if (slash == std::string::npos) return {url, ""};
  std::string prefix = url.substr(slash);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, slash), prefix};
}

/// Transport backed by cpp-httplib (HTTPS when built with OpenSSL).
inline Transport http_transport() {
  return [](const HttpRequest& req) -> HttpResponse {
    auto [origin, prefix] = split_base_url(req.base_url);
    httplib::Client client(origin);
    const auto seconds = static_cast<time_t>(std::floor(req.timeout_s));
    const auto micros = static_cast<time_t>((req.timeout_s - static_cast<double>(seconds)) * 1e6);
    client.set_connection_timeout(seconds, micros);
    client.set_read_timeout(seconds, micros);
    client.set_write_timeout(seconds, micros);
    httplib::Headers headers;
    std::string content_type = "application/json";
    for (const auto& [k, v] : req.headers) {
      if (k == "Content-Type") {
        content_type = v;
      } else {
        headers.emplace(k, v);
      }
    }
    auto res = client.Post(prefix + req.path, headers, req.body, content_type);
    if (!res) {
      const httplib::Error err = res.error();
      const bool timed_out = err == httplib::Error::Read || err == httplib::Error::Write ||
                             err == httplib::Error::ConnectionTimeout;
      throw TransportError("HTTP request to " + req.base_url + req.path + " failed: " + httplib::to_string(err), timed_out);
    }
    return HttpResponse{res->status, res->body};
  };
}

}  // namespace semgeo
