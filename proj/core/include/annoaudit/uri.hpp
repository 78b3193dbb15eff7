#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace annoaudit {

/// Components of an absolute URI (RFC 3986 generic syntax). Only the pieces
/// the audit needs are split out; everything is kept as raw text.
struct Uri {
  std::string scheme;  // lowercased
  std::string host;    // lowercased, brackets stripped for IPv6 literals
  std::optional<int> port;
  std::string path;
  std::string query;   // without '?'
  std::string fragment;
  bool has_authority = false;

  /// Path plus "?query" when a query is present; "/" for an empty path.
  std::string target() const;

  /// scheme://host[:port]
  std::string origin() const;

  std::string str() const;

  int effective_port() const;
};

/// Splits an absolute URI. Returns nullopt for relative references and for
/// strings with characters that cannot appear in a URI (spaces, controls).
std::optional<Uri> parse_uri(std::string_view text);

/// Resolves a Location header value against the URI it was returned for.
std::optional<std::string> resolve_reference(const Uri& base, std::string_view ref);

/// Percent-encodes everything outside the unreserved set and the characters
/// that are safe inside a URI path component appended to another URI.
std::string percent_encode_uri_component(std::string_view text);

}  // namespace annoaudit
