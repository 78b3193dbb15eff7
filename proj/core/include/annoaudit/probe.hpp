#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "annoaudit/fetch.hpp"

namespace annoaudit {

struct ProbeConfig {
  double timeout_s = 30.0;
  int max_redirects = 10;
  double soft404_threshold = 0.93;
  int soft404_token_len = 12;
  std::uint64_t rng_seed = 0;
  std::string user_agent = "annoaudit/0.3";
  std::size_t max_inflight = 8;
  std::chrono::seconds retry_after_cap{60};
  /// Used for the Retry-After wait on 429.
  std::function<void(std::chrono::milliseconds)> sleep = [](std::chrono::milliseconds d) {
    std::this_thread::sleep_for(d);
  };
};

/// Either an HTTP status or a transport failure.
struct FinalStatus {
  int http = 0;
  TransportError transport = TransportError::None;

  bool is_http() const { return transport == TransportError::None; }
  /// "200", "404", "Timeout", "ConnError".
  std::string str() const;
  static std::optional<FinalStatus> parse(std::string_view s);
  friend bool operator==(const FinalStatus&, const FinalStatus&) = default;
};

enum class ProbeGroup { OkGroup, ErrorGroup };

std::string_view to_string(ProbeGroup g);

struct FetchedBody {
  std::string bytes;
  std::string media_type;
  std::string charset;
};

struct ProbeOutcome {
  std::string uri;
  FinalStatus final_status;
  /// URIs visited, starting with `uri`.
  std::vector<std::string> redirect_chain;
  bool soft_4xx = false;
  ProbeGroup group = ProbeGroup::ErrorGroup;
  /// Present only when the final status is 200.
  std::optional<FetchedBody> body;
};

/// ErrorGroup unless the final status is 200 and the page is not a soft 4xx.
ProbeGroup classify(const FinalStatus& status, bool soft_4xx);

/// Sørensen–Dice coefficient over the multisets of adjacent code-point pairs.
/// Both inputs empty gives 1, exactly one empty gives 0. Inputs shorter than
/// two code points have no pairs and score 1 only when equal.
double similarity(std::string_view a, std::string_view b);

/// Random token of `length` characters from [a-z0-9], determined by the seed
/// and the URI.
std::string soft404_token(std::string_view uri, std::uint64_t seed, int length);

/// Sibling URI that almost surely does not exist: the token is appended to the
/// name of the last segment's parent directory, or added as a new directory
/// when that parent is the root. Query is kept, fragment dropped.
std::optional<std::string> soft404_probe_uri(std::string_view uri, std::string_view token);

/// True when both `uri` and its junk sibling answer 200 and their normalized
/// texts are at least `config.soft404_threshold` similar. Any failure fetching
/// the sibling means the site tells real from junk paths, so false.
bool detect_soft_4xx(std::string_view uri, Fetcher& fetcher, const ProbeConfig& config);

/// Same, reusing an already fetched 200 body of `uri`.
bool detect_soft_4xx(std::string_view uri, const FetchedBody& original, Fetcher& fetcher,
                     const ProbeConfig& config);

/// Text used for the soft-404 comparison: extracted and normalized when the
/// media type is understood, otherwise the normalized raw text.
std::string comparison_text(const FetchedBody& body);

/// HEAD with redirects, GET when HEAD is refused (405, 501 or a dropped
/// connection), one Retry-After-honoring retry on 429, then GET of the body
/// and the soft-4xx check when the status is 200.
ProbeOutcome probe(std::string_view uri, Fetcher& fetcher, const ProbeConfig& config);

}  // namespace annoaudit
