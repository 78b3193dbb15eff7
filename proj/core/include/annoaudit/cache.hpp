#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>

#include "annoaudit/fetch.hpp"

namespace annoaudit {

class CacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

struct CacheEntry {
  std::string method;
  std::string uri;
  std::string accept_datetime;
  std::string fetched_at;
  int status = 0;
  TransportError error = TransportError::None;
  std::string error_detail;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body_digest;
};

/// Records every exchange on disk so a measurement can be replayed.
///
/// Layout: `<dir>/index.jsonl` holds one CacheEntry per line, appended as
/// responses arrive; `<dir>/bodies/<sha256>` holds each distinct body once.
/// Entries are keyed by (method, URI, Accept-Datetime). Within a run the
/// index is only appended to. When a key appears more than once on disk the
/// first entry wins.
///
/// In offline mode misses never reach the network and come back as
/// ConnError with detail "offline cache miss".
class CachingFetcher final : public Fetcher {
 public:
  /// `inner` may be null only when `offline` is true. Throws CacheError when
  /// the directory cannot be created or the index cannot be read.
  CachingFetcher(Fetcher* inner, std::filesystem::path dir, bool offline);

  /// Throws CacheError when a new entry cannot be persisted.
  FetchResponse fetch(const FetchRequest& request) override;

  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }
  std::size_t network_requests() const { return network_; }
  std::size_t size() const;

 private:
  using Key = std::tuple<std::string, std::string, std::string>;

  FetchResponse replay(const CacheEntry& e) const;
  void persist(const Key& key, const FetchResponse& r);

  Fetcher* inner_;
  std::filesystem::path dir_;
  bool offline_;
  mutable std::mutex mu_;
  std::map<Key, CacheEntry> entries_;
  std::atomic<std::size_t> hits_{0}, misses_{0}, network_{0};
};

}  // namespace annoaudit
