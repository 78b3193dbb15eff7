#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace annoaudit {

enum class TransportError { None, Timeout, ConnError };

std::string_view to_string(TransportError e);

struct FetchRequest {
  std::string method = "GET";
  std::string uri;
  /// RFC 1123 value for the Accept-Datetime header (TimeGate negotiation).
  std::optional<std::string> accept_datetime;
};

/// One HTTP exchange, without following redirects. Header names are stored
/// lowercased.
struct FetchResponse {
  int status = 0;
  TransportError error = TransportError::None;
  std::string error_detail;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;

  bool transport_ok() const { return error == TransportError::None; }
  std::optional<std::string> header(std::string_view name) const;
  /// Content-Type without parameters, lowercased. Empty when absent.
  std::string media_type() const;
  /// The charset parameter of Content-Type, lowercased.
  std::string charset() const;

  static FetchResponse failure(TransportError e, std::string detail);
};

class Fetcher {
 public:
  virtual ~Fetcher() = default;
  virtual FetchResponse fetch(const FetchRequest& request) = 0;
};

struct HttpFetcherOptions {
  std::chrono::milliseconds timeout{30'000};
  std::string user_agent = "annoaudit/0.3";
  /// When set, every connection goes to this host:port instead of the URI's
  /// authority; the Host header still names the original authority.
  std::optional<std::pair<std::string, int>> connect_to;
};

/// Plain HTTP/1.1 client. One connection per request.
class HttpFetcher final : public Fetcher {
 public:
  explicit HttpFetcher(HttpFetcherOptions options);
  FetchResponse fetch(const FetchRequest& request) override;

 private:
  HttpFetcherOptions options_;
};

/// Bounds the number of requests in flight and allows at most one in-flight
/// request per host.
class PoliteFetcher final : public Fetcher {
 public:
  PoliteFetcher(Fetcher& inner, std::size_t max_inflight);
  FetchResponse fetch(const FetchRequest& request) override;

 private:
  Fetcher& inner_;
  std::size_t max_inflight_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::size_t inflight_ = 0;
  std::set<std::string> busy_hosts_;
};

/// Result of following a redirect chain.
struct FollowedResponse {
  FetchResponse response;
  /// Every URI visited, starting with the requested one.
  std::vector<std::string> chain;
  bool too_many_redirects = false;

  const std::string& final_uri() const { return chain.back(); }
};

bool is_redirect(int status);

/// Issues `request` and follows Location headers up to `max_redirects` hops.
/// Accept-Datetime is re-sent on every hop.
FollowedResponse fetch_following(Fetcher& fetcher, FetchRequest request, int max_redirects);

}  // namespace annoaudit
