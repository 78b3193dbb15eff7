#include "annoaudit/fixture/oracle.hpp"

#include <vector>

namespace annoaudit::fixture {

namespace {

enum class Live { Yes, No, Gone };
enum class Side { Yes, No, Empty, Unknown };

bool starts_with(const std::string& s, const std::string& p) { return s.compare(0, p.size(), p) == 0; }

std::string host_part(const std::string& uri) {
  auto start = uri.find("://");
  if (start == std::string::npos) return {};
  start += 3;
  auto end = uri.find_first_of("/?#", start);
  return uri.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

bool excluded(const std::string& uri) {
  if (starts_with(uri, "urn:")) return true;
  auto host = host_part(uri);
  return host == "localhost" || starts_with(host, "localhost:") || starts_with(host, "127.");
}

bool text_has(const PageVersion& v, const std::string& quote) {
  if (v.media_type != "text/html" && v.media_type != "text/plain") return false;
  return v.body.find(quote) != std::string::npos;
}

Live live_state(const FixtureManifest& m, std::string uri, const std::string& quote) {
  for (int hops = 0; hops <= 10; ++hops) {
    for (const auto& [buri, b] : m.behaviors)
      if (b.kind == BehaviorKind::Soft404 && host_part(buri) == host_part(uri)) return Live::Gone;
    auto it = m.behaviors.find(uri);
    if (it != m.behaviors.end()) {
      if (it->second.kind == BehaviorKind::Redirect) {
        uri = it->second.location;
        continue;
      }
      return Live::Gone;
    }
    for (const auto& p : m.pages) {
      if (p.uri != uri) continue;
      if (!p.live_version) return Live::Gone;
      return text_has(p.versions[*p.live_version], quote) ? Live::Yes : Live::No;
    }
    return Live::Gone;
  }
  return Live::Gone;
}

struct Snapshot {
  std::string archive;
  SecondStamp when;
};

Side side_state(const FixtureManifest& m, const std::vector<Snapshot>& tied, const std::string& uri,
                const std::string& quote) {
  if (tied.empty()) return Side::Empty;
  const Page* page = nullptr;
  for (const auto& p : m.pages)
    if (p.uri == uri) page = &p;
  int fetched = 0;
  for (const auto& s : tied) {
    if (m.broken_archives.count(s.archive)) continue;
    const PageVersion* v = nullptr;
    for (const auto& candidate : page->versions)
      if (candidate.datetime <= s.when) v = &candidate;
    if (!v) continue;
    ++fetched;
    if (text_has(*v, quote)) return Side::Yes;
  }
  return fetched == 0 ? Side::Unknown : Side::No;
}

Category decide(Live live, Side before, Side after) {
  bool archived = before == Side::Yes || after == Side::Yes;
  bool unknown = before == Side::Unknown || after == Side::Unknown;
  if (live == Live::Yes) {
    if (archived) return Category::AttachedArchived;
    if (unknown) return Category::Indeterminate;
    return Category::InDanger;
  }
  if (archived) return Category::Recoverable;
  if (unknown) return Category::Indeterminate;
  return Category::Orphaned;
}

}  // namespace

std::map<std::string, Category> oracle_verdicts(const FixtureManifest& m) {
  std::map<std::string, Category> out;
  for (const auto& a : m.annotations) {
    if (excluded(a.uri)) {
      out[a.id] = Category::Excluded;
      continue;
    }
    Live live = live_state(m, a.uri, a.exact);
    if (m.timemap_errors.count(a.uri)) {
      out[a.id] = decide(live, Side::Unknown, Side::Unknown);
      continue;
    }
    std::vector<Snapshot> all;
    for (const auto& h : m.holdings)
      if (h.uri == a.uri)
        for (auto s : h.snapshots) all.push_back({h.archive_host, s});

    auto t = std::chrono::floor<std::chrono::seconds>(a.updated);
    bool have_before = false, have_after = false;
    SecondStamp latest{}, earliest{};
    for (const auto& s : all) {
      if (s.when <= t && (!have_before || s.when > latest)) {
        latest = s.when;
        have_before = true;
      }
      if (s.when > t && (!have_after || s.when < earliest)) {
        earliest = s.when;
        have_after = true;
      }
    }
    std::vector<Snapshot> before, after;
    for (const auto& s : all) {
      if (have_before && s.when == latest) before.push_back(s);
      if (have_after && s.when == earliest) after.push_back(s);
    }
    out[a.id] = decide(live, side_state(m, before, a.uri, a.exact), side_state(m, after, a.uri, a.exact));
  }
  return out;
}

}  // namespace annoaudit::fixture
