#pragma once

#include <string>
#include <string_view>

namespace annoaudit {

enum class TriageClass { Resolvable, ExcludedLocalhost, ExcludedUrn, ExcludedMalformed };

std::string_view to_string(TriageClass c);
bool triage_from_string(std::string_view s, TriageClass& out);

inline bool is_excluded(TriageClass c) { return c != TriageClass::Resolvable; }

struct TriageResult {
  std::string uri;
  TriageClass triage_class = TriageClass::Resolvable;
};

/// Decides from the URI string alone whether a target can be fetched from the
/// public web. Loopback addresses count as localhost; every scheme other than
/// http/https falls in the URN class.
TriageResult triage_uri(std::string_view uri);

/// True for "localhost", "*.localhost", 127.0.0.0/8 and ::1 (including the
/// IPv4-mapped form).
bool is_loopback_host(std::string_view host);

}  // namespace annoaudit
