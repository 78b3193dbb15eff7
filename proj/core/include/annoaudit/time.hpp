#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace annoaudit {

/// UTC instant with microsecond resolution (annotation timestamps carry six
/// fractional digits).
using Timestamp = std::chrono::sys_time<std::chrono::microseconds>;

/// Second-resolution instant, the precision of Memento-Datetime on the wire.
using SecondStamp = std::chrono::sys_seconds;

/// Parses "YYYY-MM-DDTHH:MM:SS[.ffffff](Z|+HH:MM|-HH:MM)". Fractional digits
/// beyond six are truncated. Returns nullopt on any syntax or range error.
std::optional<Timestamp> parse_iso8601(std::string_view text);

/// Formats as "YYYY-MM-DDTHH:MM:SS.ffffffZ".
std::string format_iso8601(Timestamp t);

/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(SecondStamp t);

/// Parses an RFC 1123 date ("Wed, 10 Dec 2014 12:10:18 GMT"). The weekday is
/// optional and not cross-checked.
std::optional<SecondStamp> parse_rfc1123(std::string_view text);

std::string format_rfc1123(SecondStamp t);

/// 14-digit archive timestamp "YYYYMMDDhhmmss", as used in Wayback URIs.
std::string format_compact(SecondStamp t);
std::optional<SecondStamp> parse_compact(std::string_view text);

inline SecondStamp truncate_to_seconds(Timestamp t) {
  return std::chrono::floor<std::chrono::seconds>(t);
}

}  // namespace annoaudit
