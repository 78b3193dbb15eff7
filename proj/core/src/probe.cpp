#include "annoaudit/probe.hpp"

#include <algorithm>
#include <cctype>
#include <random>

#include <unicode/utf8.h>

#include "annoaudit/text.hpp"
#include "annoaudit/time.hpp"
#include "annoaudit/uri.hpp"

namespace annoaudit {

namespace {

std::vector<std::uint64_t> bigrams(std::string_view s) {
  std::vector<std::uint64_t> out;
  const auto* p = reinterpret_cast<const uint8_t*>(s.data());
  int32_t i = 0, n = static_cast<int32_t>(s.size());
  std::int64_t prev = -1;
  while (i < n) {
    UChar32 c;
    U8_NEXT(p, i, n, c);
    if (c < 0) c = 0xFFFD;
    if (prev >= 0) out.push_back((static_cast<std::uint64_t>(prev) << 21) | static_cast<std::uint64_t>(c));
    prev = c;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::chrono::milliseconds retry_delay(const FetchResponse& r, std::chrono::seconds cap) {
  using namespace std::chrono;
  seconds wait{1};
  if (auto value = r.header("retry-after")) {
    std::string_view v = *value;
    if (!v.empty() && std::all_of(v.begin(), v.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      wait = seconds{v.size() > 6 ? cap.count() : std::stol(std::string(v))};
    } else if (auto when = parse_rfc1123(v)) {
      auto now = floor<seconds>(system_clock::now());
      wait = *when > now ? *when - now : seconds{0};
    }
  }
  return duration_cast<milliseconds>(std::min(wait, cap));
}

// HEAD (or GET) with redirects and a single retry on 429.
FollowedResponse request_status(std::string_view uri, const std::string& method, Fetcher& fetcher,
                                const ProbeConfig& config) {
  FetchRequest req{method, std::string(uri), std::nullopt};
  auto followed = fetch_following(fetcher, req, config.max_redirects);
  if (followed.response.transport_ok() && followed.response.status == 429) {
    config.sleep(retry_delay(followed.response, config.retry_after_cap));
    followed = fetch_following(fetcher, req, config.max_redirects);
  }
  return followed;
}

bool head_refused(const FollowedResponse& f) {
  if (f.response.error == TransportError::ConnError) return true;
  return f.response.transport_ok() && (f.response.status == 405 || f.response.status == 501);
}

}  // namespace

std::string FinalStatus::str() const {
  if (transport != TransportError::None) return std::string(to_string(transport));
  return std::to_string(http);
}

std::optional<FinalStatus> FinalStatus::parse(std::string_view s) {
  if (s == "Timeout") return FinalStatus{0, TransportError::Timeout};
  if (s == "ConnError") return FinalStatus{0, TransportError::ConnError};
  if (s.empty() || s.size() > 3 ||
      !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return std::nullopt;
  return FinalStatus{std::stoi(std::string(s)), TransportError::None};
}

std::string_view to_string(ProbeGroup g) {
  return g == ProbeGroup::OkGroup ? "OkGroup" : "ErrorGroup";
}

ProbeGroup classify(const FinalStatus& status, bool soft_4xx) {
  return status.is_http() && status.http == 200 && !soft_4xx ? ProbeGroup::OkGroup : ProbeGroup::ErrorGroup;
}

double similarity(std::string_view a, std::string_view b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  auto ba = bigrams(a);
  auto bb = bigrams(b);
  if (ba.empty() || bb.empty()) return a == b ? 1.0 : 0.0;

  std::size_t shared = 0;
  for (std::size_t i = 0, j = 0; i < ba.size() && j < bb.size();) {
    if (ba[i] == bb[j]) {
      ++shared;
      ++i;
      ++j;
    } else if (ba[i] < bb[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return 2.0 * static_cast<double>(shared) / static_cast<double>(ba.size() + bb.size());
}

std::string soft404_token(std::string_view uri, std::uint64_t seed, int length) {
  static constexpr char kAlphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789";
  std::mt19937_64 rng(seed ^ fnv1a(uri));
  std::string token;
  token.reserve(static_cast<std::size_t>(std::max(0, length)));
  for (int i = 0; i < length; ++i) token += kAlphabet[rng() % 36];
  return token;
}

std::optional<std::string> soft404_probe_uri(std::string_view uri, std::string_view token) {
  auto parsed = parse_uri(uri);
  if (!parsed || !parsed->has_authority) return std::nullopt;
  Uri probe = *parsed;
  probe.fragment.clear();
  const std::string& path = parsed->path;
  if (path.empty() || path == "/") {
    probe.path = "/" + std::string(token);
  } else {
    auto last_slash = path.rfind('/');
    std::string parent = path.substr(0, last_slash + 1);  // keeps the trailing '/'
    std::string leaf = path.substr(last_slash + 1);
    if (parent == "/") {
      probe.path = "/" + std::string(token) + "/" + leaf;
    } else {
      parent.pop_back();
      probe.path = parent + std::string(token) + "/" + leaf;
    }
  }
  return probe.str();
}

std::string comparison_text(const FetchedBody& body) {
  static const ExtractorRegistry kBuiltins;
  try {
    return extract_text(body.bytes, body.media_type, kBuiltins, body.charset).text;
  } catch (const ExtractionUnavailable&) {
    bool lossy = false;
    return normalize_string(decode_to_utf8(body.bytes, body.charset, lossy));
  }
}

bool detect_soft_4xx(std::string_view uri, const FetchedBody& original, Fetcher& fetcher,
                     const ProbeConfig& config) {
  auto token = soft404_token(uri, config.rng_seed, config.soft404_token_len);
  auto junk = soft404_probe_uri(uri, token);
  if (!junk) return false;
  auto followed = fetch_following(fetcher, FetchRequest{"GET", *junk, std::nullopt}, config.max_redirects);
  const auto& r = followed.response;
  if (!r.transport_ok() || r.status != 200) return false;
  FetchedBody sibling{r.body, r.media_type(), r.charset()};
  return similarity(comparison_text(original), comparison_text(sibling)) >= config.soft404_threshold;
}

bool detect_soft_4xx(std::string_view uri, Fetcher& fetcher, const ProbeConfig& config) {
  auto followed = fetch_following(fetcher, FetchRequest{"GET", std::string(uri), std::nullopt},
                                  config.max_redirects);
  const auto& r = followed.response;
  if (!r.transport_ok() || r.status != 200) return false;
  return detect_soft_4xx(uri, FetchedBody{r.body, r.media_type(), r.charset()}, fetcher, config);
}

ProbeOutcome probe(std::string_view uri, Fetcher& fetcher, const ProbeConfig& config) {
  ProbeOutcome out;
  out.uri = std::string(uri);

  auto status = request_status(uri, "HEAD", fetcher, config);
  if (head_refused(status)) status = request_status(uri, "GET", fetcher, config);

  out.redirect_chain = status.chain;
  const auto& r = status.response;
  out.final_status = r.transport_ok() ? FinalStatus{r.status, TransportError::None}
                                      : FinalStatus{0, r.error};

  if (out.final_status.is_http() && out.final_status.http == 200) {
    auto page = fetch_following(fetcher, FetchRequest{"GET", std::string(uri), std::nullopt},
                                config.max_redirects);
    const auto& g = page.response;
    if (!g.transport_ok()) {
      out.final_status = FinalStatus{0, g.error};
    } else if (g.status != 200) {
      out.final_status = FinalStatus{g.status, TransportError::None};
    } else {
      out.body = FetchedBody{g.body, g.media_type(), g.charset()};
      out.soft_4xx = detect_soft_4xx(uri, *out.body, fetcher, config);
    }
  }
  out.group = classify(out.final_status, out.soft_4xx);
  return out;
}

}  // namespace annoaudit
