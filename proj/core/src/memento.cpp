#include "annoaudit/memento.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "annoaudit/uri.hpp"

namespace annoaudit {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

struct Cursor {
  std::string_view s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && is_space(s[pos])) ++pos;
  }
  bool done() const { return pos >= s.size(); }
  char peek() const { return pos < s.size() ? s[pos] : '\0'; }
};

std::string read_quoted(Cursor& c) {
  std::size_t start = c.pos;
  ++c.pos;  // opening quote
  std::string value;
  while (!c.done()) {
    char ch = c.s[c.pos++];
    if (ch == '\\' && !c.done()) {
      value += c.s[c.pos++];
    } else if (ch == '"') {
      return value;
    } else {
      value += ch;
    }
  }
  throw TimeMapParseError(start, "unterminated quoted string");
}

const char* rel_for(std::size_t i, std::size_t n) {
  if (n == 1) return "first last memento";
  if (i == 0) return "first memento";
  if (i + 1 == n) return "last memento";
  return "memento";
}

}  // namespace

std::optional<std::string> Link::param(std::string_view name) const {
  for (const auto& [k, v] : params)
    if (k == name) return v;
  return std::nullopt;
}

bool Link::has_rel(std::string_view rel) const {
  auto value = param("rel");
  if (!value) return false;
  std::istringstream ss(lower(*value));
  std::string token;
  while (ss >> token)
    if (token == rel) return true;
  return false;
}

std::vector<Link> parse_link_format(std::string_view body) {
  std::vector<Link> links;
  Cursor c{body};
  c.skip_ws();
  while (!c.done()) {
    if (c.peek() == ',') {  // tolerate empty elements
      ++c.pos;
      c.skip_ws();
      continue;
    }
    if (c.peek() != '<') throw TimeMapParseError(c.pos, "expected '<' at start of link");
    auto close = body.find('>', c.pos);
    if (close == std::string_view::npos) throw TimeMapParseError(c.pos, "unterminated link target");
    Link link;
    link.target = std::string(body.substr(c.pos + 1, close - c.pos - 1));
    c.pos = close + 1;
    c.skip_ws();

    while (c.peek() == ';') {
      ++c.pos;
      c.skip_ws();
      std::size_t name_start = c.pos;
      while (!c.done() && !is_space(c.peek()) && c.peek() != '=' && c.peek() != ';' && c.peek() != ',')
        ++c.pos;
      auto name = lower(body.substr(name_start, c.pos - name_start));
      if (name.empty()) throw TimeMapParseError(name_start, "empty link parameter name");
      c.skip_ws();
      std::string value;
      if (c.peek() == '=') {
        ++c.pos;
        c.skip_ws();
        if (c.peek() == '"') {
          value = read_quoted(c);
        } else {
          std::size_t vstart = c.pos;
          while (!c.done() && !is_space(c.peek()) && c.peek() != ';' && c.peek() != ',') ++c.pos;
          value = std::string(body.substr(vstart, c.pos - vstart));
        }
      }
      link.params.emplace_back(std::move(name), std::move(value));
      c.skip_ws();
    }
    links.push_back(std::move(link));
    if (c.done()) break;
    if (c.peek() != ',') throw TimeMapParseError(c.pos, "expected ',' between links");
    ++c.pos;
    c.skip_ws();
  }
  return links;
}

TimeMap parse_timemap(std::string_view body, std::string_view uri_r) {
  TimeMap tm;
  tm.uri_r = std::string(uri_r);
  for (const auto& link : parse_link_format(body)) {
    if (link.has_rel("memento")) {
      auto dt = link.param("datetime");
      auto stamp = dt ? parse_rfc1123(*dt) : std::nullopt;
      if (!stamp) {
        ++tm.skipped_links;
        continue;
      }
      tm.mementos.push_back(MementoRef{link.target, *stamp, archive_host(link.target)});
    } else if (link.has_rel("timemap") && !link.has_rel("self")) {
      if (!tm.next_page) tm.next_page = link.target;
    }
  }
  std::stable_sort(tm.mementos.begin(), tm.mementos.end(),
                   [](const MementoRef& a, const MementoRef& b) { return a.memento_datetime < b.memento_datetime; });
  return tm;
}

std::string serialize_timemap(const TimeMap& timemap) {
  std::string out;
  out += "<" + timemap.uri_r + ">; rel=\"original\"";
  out += ",\n<" + timemap.uri_r + ">; rel=\"self\"; type=\"application/link-format\"";
  const auto n = timemap.mementos.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& m = timemap.mementos[i];
    out += ",\n<" + m.uri_m + ">; rel=\"" + rel_for(i, n) + "\"; datetime=\"" +
           format_rfc1123(m.memento_datetime) + "\"";
  }
  out += "\n";
  return out;
}

std::string timemap_request_uri(std::string_view aggregator_base, std::string_view uri_r) {
  return std::string(aggregator_base) + percent_encode_uri_component(uri_r);
}

namespace {

TimeMap fetch_one_page(const std::string& request_uri, std::string_view uri_r, Fetcher& fetcher,
                       int max_redirects) {
  auto followed = fetch_following(fetcher, FetchRequest{"GET", request_uri, std::nullopt}, max_redirects);
  const auto& r = followed.response;
  if (!r.transport_ok())
    throw TimeMapUnavailable("aggregator request failed (" + std::string(to_string(r.error)) + "): " +
                             r.error_detail);
  if (followed.too_many_redirects) throw TimeMapUnavailable("aggregator redirect loop");
  if (r.status == 404) return TimeMap{std::string(uri_r), {}, 0, std::nullopt};
  if (r.status < 200 || r.status >= 300)
    throw TimeMapUnavailable("aggregator returned status " + std::to_string(r.status));
  try {
    return parse_timemap(r.body, uri_r);
  } catch (const TimeMapParseError& e) {
    throw TimeMapUnavailable(std::string("unparseable TimeMap: ") + e.what());
  }
}

}  // namespace

TimeMap fetch_timemap(std::string_view uri_r, std::string_view aggregator_base, Fetcher& fetcher,
                      int max_redirects) {
  auto tm = fetch_one_page(timemap_request_uri(aggregator_base, uri_r), uri_r, fetcher, max_redirects);
  if (tm.next_page) {
    auto more = fetch_one_page(*tm.next_page, uri_r, fetcher, max_redirects);
    tm.mementos.insert(tm.mementos.end(), more.mementos.begin(), more.mementos.end());
    tm.skipped_links += more.skipped_links;
    std::stable_sort(tm.mementos.begin(), tm.mementos.end(), [](const MementoRef& a, const MementoRef& b) {
      return a.memento_datetime < b.memento_datetime;
    });
  }
  return tm;
}

std::optional<MementoRef> negotiate_timegate(std::string_view timegate_uri, SecondStamp when,
                                             Fetcher& fetcher, int max_redirects) {
  FetchRequest req{"HEAD", std::string(timegate_uri), format_rfc1123(when)};
  auto followed = fetch_following(fetcher, req, max_redirects);
  const auto& r = followed.response;
  if (!r.transport_ok() || r.status != 200) return std::nullopt;
  auto dt = r.header("memento-datetime");
  if (!dt) return std::nullopt;
  auto stamp = parse_rfc1123(*dt);
  if (!stamp) return std::nullopt;
  const auto& uri_m = followed.final_uri();
  return MementoRef{uri_m, *stamp, archive_host(uri_m)};
}

std::string_view to_string(NeighborhoodShape s) {
  switch (s) {
    case NeighborhoodShape::BeforeAndAfter:
      return "before_and_after";
    case NeighborhoodShape::BeforeOnly:
      return "before_only";
    case NeighborhoodShape::AfterOnly:
      return "after_only";
    case NeighborhoodShape::NoMementos:
      return "no_mementos";
  }
  return "no_mementos";
}

NeighborhoodShape MementoNeighborhood::shape() const {
  if (!before.empty() && !after.empty()) return NeighborhoodShape::BeforeAndAfter;
  if (!before.empty()) return NeighborhoodShape::BeforeOnly;
  if (!after.empty()) return NeighborhoodShape::AfterOnly;
  return NeighborhoodShape::NoMementos;
}

MementoNeighborhood nearest_pair(const TimeMap& timemap, Timestamp annotated_at) {
  const auto t = truncate_to_seconds(annotated_at);
  const auto& ms = timemap.mementos;
  auto split = std::upper_bound(ms.begin(), ms.end(), t, [](SecondStamp v, const MementoRef& m) {
    return v < m.memento_datetime;
  });

  MementoNeighborhood n;
  if (split != ms.end()) {
    auto last = split;
    while (last != ms.end() && last->memento_datetime == split->memento_datetime) ++last;
    n.after.assign(split, last);
  }
  if (split != ms.begin()) {
    auto first = std::prev(split);
    const auto when = first->memento_datetime;
    while (first != ms.begin() && std::prev(first)->memento_datetime == when) --first;
    n.before.assign(first, split);
  }
  return n;
}

std::string archive_host(std::string_view uri_m) {
  auto uri = parse_uri(uri_m);
  if (!uri || uri->host.empty()) return std::string(uri_m);
  const auto& host = uri->host;
  if (host == "web.archive.org" || host == "wayback.archive.org" || host == "archive.org")
    return "Internet Archive";
  if (host == "archive.is" || host == "archive.today" || host == "archive.ph" || host == "archive.li" ||
      host == "archive.md" || host == "archive.fo" || host == "archive.vn")
    return "archive.is";
  if (host == "wayback.archive-it.org" || host == "archive-it.org") return "Archive-It";
  std::string authority = host;
  if (uri->port) authority += ":" + std::to_string(*uri->port);
  return authority;
}

}  // namespace annoaudit
