#include <algorithm>
#include <cctype>

#include <httplib.h>

#include "annoaudit/fetch.hpp"
#include "annoaudit/uri.hpp"

namespace annoaudit {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

HttpFetcher::HttpFetcher(HttpFetcherOptions options) : options_(std::move(options)) {}

FetchResponse HttpFetcher::fetch(const FetchRequest& request) {
  auto uri = parse_uri(request.uri);
  if (!uri || !uri->has_authority || (uri->scheme != "http" && uri->scheme != "https"))
    return FetchResponse::failure(TransportError::ConnError, "unsupported URI: " + request.uri);

  std::string host = uri->host;
  int port = uri->effective_port();
  std::string scheme = uri->scheme;
  if (options_.connect_to) {
    host = options_.connect_to->first;
    port = options_.connect_to->second;
    scheme = "http";
  }

  auto client = std::make_unique<httplib::Client>(scheme + "://" + host + ":" + std::to_string(port));
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - secs);
  client->set_connection_timeout(secs.count(), usecs.count());
  client->set_read_timeout(secs.count(), usecs.count());
  client->set_write_timeout(secs.count(), usecs.count());
  client->set_follow_location(false);
  client->set_keep_alive(false);
  client->set_url_encode(false);
#ifdef CPPHTTPLIB_OPENSSL_SUPPORT
  if (scheme == "https") client->enable_server_certificate_verification(true);
#endif

  httplib::Headers headers;
  std::string host_header = uri->host.find(':') != std::string::npos ? "[" + uri->host + "]" : uri->host;
  if (uri->port) host_header += ":" + std::to_string(*uri->port);
  headers.emplace("Host", host_header);
  headers.emplace("User-Agent", options_.user_agent);
  headers.emplace("Accept", "*/*");
  if (request.accept_datetime) headers.emplace("Accept-Datetime", *request.accept_datetime);

  httplib::Request req;
  req.method = request.method;
  req.path = uri->target();
  req.headers = std::move(headers);

  auto started = std::chrono::steady_clock::now();
  auto result = client->send(req);
  if (!result) {
    auto err = result.error();
    auto elapsed = std::chrono::steady_clock::now() - started;
    bool timed_out = err == httplib::Error::ConnectionTimeout ||
                     (err == httplib::Error::Read && elapsed >= options_.timeout * 9 / 10);
    return FetchResponse::failure(timed_out ? TransportError::Timeout : TransportError::ConnError,
                                  httplib::to_string(err));
  }

  FetchResponse out;
  out.status = result->status;
  for (const auto& [k, v] : result->headers) out.headers.emplace_back(lower(k), v);
  std::sort(out.headers.begin(), out.headers.end());
  out.body = std::move(result->body);
  return out;
}

}  // namespace annoaudit
