#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "annoaudit/audit.hpp"
#include "annoaudit/time.hpp"

namespace annoaudit::fixture {

inline constexpr int kManifestVersion = 1;

struct PageVersion {
  SecondStamp datetime{};
  std::string body;
  std::string media_type = "text/html";
};

struct Page {
  std::string uri;
  /// Ascending by datetime.
  std::vector<PageVersion> versions;
  /// Index into versions served on the live web; nullopt means deleted (404).
  std::optional<std::size_t> live_version;
};

/// Snapshots one archive holds of one URI.
struct Holding {
  std::string archive_host;  // e.g. "web.archive.org"
  std::string uri;
  std::vector<SecondStamp> snapshots;
};

enum class BehaviorKind { Real404, Soft404, Timeout, Status, Redirect };

std::string_view to_string(BehaviorKind k);

/// Live-web misbehavior of one URI. Soft404 turns the URI's whole host into
/// a site answering every path with the same 200 page.
struct Behavior {
  BehaviorKind kind = BehaviorKind::Real404;
  int status = 0;        // for Status
  std::string location;  // for Redirect
};

struct FixtureAnnotation {
  std::string id;
  std::string uri;
  std::string exact;
  Timestamp updated{};
};

struct FixtureManifest {
  int version = kManifestVersion;
  std::vector<Page> pages;
  std::vector<Holding> holdings;
  std::map<std::string, Behavior> behaviors;
  /// URIs for which the aggregator answers 503.
  std::set<std::string> timemap_errors;
  /// Archive hosts that answer 503 for every memento.
  std::set<std::string> broken_archives;
  std::vector<FixtureAnnotation> annotations;
  std::map<std::string, Category> expected_verdicts;

  const Page* find_page(std::string_view uri) const;
};

/// Body of the page every path of a soft-404 host answers with.
inline constexpr std::string_view kSoft404Body =
    "<html><head><title>Sign in</title></head><body><p>Please log in to view this page.</p></body></html>";

/// Path prefix of the TimeMap endpoint on the aggregator host.
inline constexpr std::string_view kTimeMapPrefix = "/timemap/link/";
inline constexpr std::string_view kTimeGatePrefix = "/timegate/";
inline constexpr std::string_view kAggregatorHost = "aggregator.fixture.test";

/// http://<archive_host>/web/<yyyymmddhhmmss>/<uri>
std::string memento_uri(std::string_view archive_host, SecondStamp when, std::string_view uri);

/// The version of `page` in effect at `when`, if any.
const PageVersion* version_at(const Page& page, SecondStamp when);

/// JSON form of the manifest.
std::string to_json(const FixtureManifest& m);

/// Throws std::runtime_error on a malformed document or version mismatch.
FixtureManifest manifest_from_json(std::string_view text);

/// Checks that every snapshot has a page version at or before it.
std::vector<std::string> validate(const FixtureManifest& m);

/// The manifest annotations as Hypothes.is-shaped documents, one per line.
std::string annotations_jsonl(const FixtureManifest& m);

}  // namespace annoaudit::fixture
