#include "annoaudit/fetch.hpp"

#include <algorithm>
#include <cctype>

#include "annoaudit/uri.hpp"

namespace annoaudit {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view to_string(TransportError e) {
  switch (e) {
    case TransportError::None:
      return "None";
    case TransportError::Timeout:
      return "Timeout";
    case TransportError::ConnError:
      return "ConnError";
  }
  return "ConnError";
}

std::optional<std::string> FetchResponse::header(std::string_view name) const {
  auto key = lower(name);
  for (const auto& [k, v] : headers)
    if (k == key) return v;
  return std::nullopt;
}

std::string FetchResponse::media_type() const {
  auto ct = header("content-type");
  if (!ct) return {};
  std::string_view v = *ct;
  v = v.substr(0, v.find(';'));
  return lower(trim(v));
}

std::string FetchResponse::charset() const {
  auto ct = header("content-type");
  if (!ct) return {};
  auto low = lower(*ct);
  auto pos = low.find("charset=");
  if (pos == std::string::npos) return {};
  std::string_view v = std::string_view(low).substr(pos + 8);
  v = v.substr(0, v.find(';'));
  v = trim(v);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
  return std::string(v);
}

FetchResponse FetchResponse::failure(TransportError e, std::string detail) {
  FetchResponse r;
  r.error = e;
  r.error_detail = std::move(detail);
  return r;
}

PoliteFetcher::PoliteFetcher(Fetcher& inner, std::size_t max_inflight)
    : inner_(inner), max_inflight_(std::max<std::size_t>(1, max_inflight)) {}

FetchResponse PoliteFetcher::fetch(const FetchRequest& request) {
  std::string host;
  if (auto u = parse_uri(request.uri)) host = u->host + ":" + std::to_string(u->effective_port());
  {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return inflight_ < max_inflight_ && !busy_hosts_.contains(host); });
    ++inflight_;
    busy_hosts_.insert(host);
  }
  struct Release {
    PoliteFetcher& self;
    const std::string& host;
    ~Release() {
      {
        std::lock_guard lock(self.mu_);
        --self.inflight_;
        self.busy_hosts_.erase(host);
      }
      self.cv_.notify_all();
    }
  } release{*this, host};
  return inner_.fetch(request);
}

bool is_redirect(int status) {
  return status == 301 || status == 302 || status == 303 || status == 307 || status == 308;
}

FollowedResponse fetch_following(Fetcher& fetcher, FetchRequest request, int max_redirects) {
  FollowedResponse out;
  out.chain.push_back(request.uri);
  for (int hop = 0;; ++hop) {
    out.response = fetcher.fetch(request);
    if (!out.response.transport_ok() || !is_redirect(out.response.status)) return out;
    auto location = out.response.header("location");
    if (!location) return out;
    auto base = parse_uri(request.uri);
    if (!base) return out;
    auto next = resolve_reference(*base, *location);
    if (!next) return out;
    if (hop >= max_redirects) {
      out.too_many_redirects = true;
      return out;
    }
    request.uri = *next;
    // 303 switches to GET; HEAD stays HEAD.
    if (out.response.status == 303 && request.method != "HEAD") request.method = "GET";
    out.chain.push_back(request.uri);
  }
}

}  // namespace annoaudit
