#include "annoaudit/triage.hpp"

#include <algorithm>
#include <cctype>

#include "annoaudit/uri.hpp"

namespace annoaudit {

namespace {

bool parse_ipv4(std::string_view host, unsigned& first_octet) {
  int octets = 0;
  std::size_t pos = 0;
  while (pos <= host.size()) {
    auto dot = host.find('.', pos);
    auto part = host.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
    if (part.empty() || part.size() > 3 ||
        !std::all_of(part.begin(), part.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      return false;
    unsigned v = std::stoul(std::string(part));
    if (v > 255) return false;
    if (octets == 0) first_octet = v;
    ++octets;
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  return octets == 4;
}

}  // namespace

std::string_view to_string(TriageClass c) {
  switch (c) {
    case TriageClass::Resolvable:
      return "Resolvable";
    case TriageClass::ExcludedLocalhost:
      return "ExcludedLocalhost";
    case TriageClass::ExcludedUrn:
      return "ExcludedUrn";
    case TriageClass::ExcludedMalformed:
      return "ExcludedMalformed";
  }
  return "ExcludedMalformed";
}

bool triage_from_string(std::string_view s, TriageClass& out) {
  for (auto c : {TriageClass::Resolvable, TriageClass::ExcludedLocalhost, TriageClass::ExcludedUrn,
                 TriageClass::ExcludedMalformed}) {
    if (to_string(c) == s) {
      out = c;
      return true;
    }
  }
  return false;
}

bool is_loopback_host(std::string_view host) {
  if (host == "localhost" || host.ends_with(".localhost") || host == "localhost.") return true;
  if (host == "::1" || host == "0:0:0:0:0:0:0:1") return true;
  if (host.starts_with("::ffff:")) host.remove_prefix(7);
  unsigned first = 0;
  return parse_ipv4(host, first) && first == 127;
}

TriageResult triage_uri(std::string_view uri) {
  TriageResult r{std::string(uri), TriageClass::Resolvable};
  auto parsed = parse_uri(uri);
  if (!parsed) {
    r.triage_class = TriageClass::ExcludedMalformed;
    return r;
  }
  if (parsed->scheme != "http" && parsed->scheme != "https") {
    r.triage_class = TriageClass::ExcludedUrn;
    return r;
  }
  if (!parsed->has_authority || parsed->host.empty()) {
    r.triage_class = TriageClass::ExcludedMalformed;
    return r;
  }
  if (is_loopback_host(parsed->host)) r.triage_class = TriageClass::ExcludedLocalhost;
  return r;
}

}  // namespace annoaudit
