#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "annoaudit/fetch.hpp"
#include "annoaudit/time.hpp"

namespace annoaudit {

/// An archived snapshot (URI-M) and its capture instant.
struct MementoRef {
  std::string uri_m;
  SecondStamp memento_datetime{};
  std::string archive;  // label from archive_host()

  friend bool operator==(const MementoRef&, const MementoRef&) = default;
};

/// Mementos of one original resource, ascending by datetime. Equal datetimes
/// keep their order of appearance.
struct TimeMap {
  std::string uri_r;
  std::vector<MementoRef> mementos;
  /// Memento links dropped for a missing or unparseable datetime.
  std::size_t skipped_links = 0;
  /// Target of a rel="timemap" link pointing at a continuation page.
  std::optional<std::string> next_page;
};

class TimeMapParseError : public std::runtime_error {
 public:
  TimeMapParseError(std::size_t offset, const std::string& what)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// The aggregator could not be asked (transport failure or server error).
/// Distinct from an empty TimeMap.
class TimeMapUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One parsed entry of a link-format document.
struct Link {
  std::string target;
  std::vector<std::pair<std::string, std::string>> params;  // names lowercased

  std::optional<std::string> param(std::string_view name) const;
  /// True when the space-separated rel value contains `rel`.
  bool has_rel(std::string_view rel) const;
};

/// Tokenizes a link-format (RFC 6690 / Link header) document. Commas inside
/// quoted values and inside <...> are handled.
std::vector<Link> parse_link_format(std::string_view body);

/// Keeps every link whose rel includes "memento" and whose datetime parses.
TimeMap parse_timemap(std::string_view body, std::string_view uri_r);

/// Writes a TimeMap as link-format: an "original" link, a "self" link, then
/// one link per memento with rel "first memento" / "memento" / "last memento".
std::string serialize_timemap(const TimeMap& timemap);

/// Builds the aggregator request for `uri_r`.
std::string timemap_request_uri(std::string_view aggregator_base, std::string_view uri_r);

/// Asks the aggregator for the TimeMap of `uri_r`, following one continuation
/// page. 404 or an empty body yields an empty TimeMap; transport failures,
/// 5xx and unparseable bodies throw TimeMapUnavailable.
TimeMap fetch_timemap(std::string_view uri_r, std::string_view aggregator_base, Fetcher& fetcher,
                      int max_redirects = 10);

/// Datetime negotiation through a TimeGate: sends Accept-Datetime and reads
/// the Memento-Datetime of the memento it lands on. Returns nullopt when the
/// TimeGate has nothing or cannot be reached.
std::optional<MementoRef> negotiate_timegate(std::string_view timegate_uri, SecondStamp when,
                                             Fetcher& fetcher, int max_redirects = 10);

/// Which side(s) of the annotation instant have mementos.
enum class NeighborhoodShape { BeforeAndAfter, BeforeOnly, AfterOnly, NoMementos };

std::string_view to_string(NeighborhoodShape s);

struct MementoNeighborhood {
  /// All mementos at the latest datetime <= the annotation instant.
  std::vector<MementoRef> before;
  /// All mementos at the earliest datetime > the annotation instant.
  std::vector<MementoRef> after;

  NeighborhoodShape shape() const;
};

/// Selects the closest mementos around `annotated_at` (truncated to seconds).
/// A memento captured at the annotation second counts as "before".
MementoNeighborhood nearest_pair(const TimeMap& timemap, Timestamp annotated_at);

/// Canonical archive label for a URI-M: the well-known archives get their
/// usual names, anything else its authority.
std::string archive_host(std::string_view uri_m);

}  // namespace annoaudit
