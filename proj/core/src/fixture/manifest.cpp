#include "annoaudit/fixture/manifest.hpp"

#include <stdexcept>

#include <json.hpp>

namespace annoaudit::fixture {

namespace {

using nlohmann::ordered_json;

SecondStamp seconds_from(const std::string& s) {
  auto t = parse_iso8601(s);
  if (!t) throw std::runtime_error("manifest: bad datetime " + s);
  return truncate_to_seconds(*t);
}

BehaviorKind behavior_from(const std::string& s) {
  for (auto k : {BehaviorKind::Real404, BehaviorKind::Soft404, BehaviorKind::Timeout, BehaviorKind::Status,
                 BehaviorKind::Redirect})
    if (to_string(k) == s) return k;
  throw std::runtime_error("manifest: unknown behavior " + s);
}

}  // namespace

std::string_view to_string(BehaviorKind k) {
  switch (k) {
    case BehaviorKind::Real404:
      return "real_404";
    case BehaviorKind::Soft404:
      return "soft_404";
    case BehaviorKind::Timeout:
      return "timeout";
    case BehaviorKind::Status:
      return "status";
    case BehaviorKind::Redirect:
      return "redirect";
  }
  return "real_404";
}

const Page* FixtureManifest::find_page(std::string_view uri) const {
  for (const auto& p : pages)
    if (p.uri == uri) return &p;
  return nullptr;
}

std::string memento_uri(std::string_view archive_host, SecondStamp when, std::string_view uri) {
  return "http://" + std::string(archive_host) + "/web/" + format_compact(when) + "/" + std::string(uri);
}

const PageVersion* version_at(const Page& page, SecondStamp when) {
  const PageVersion* found = nullptr;
  for (const auto& v : page.versions)
    if (v.datetime <= when) found = &v;
  return found;
}

std::string to_json(const FixtureManifest& m) {
  ordered_json j;
  j["manifest_version"] = m.version;
  auto pages = ordered_json::array();
  for (const auto& p : m.pages) {
    auto versions = ordered_json::array();
    for (const auto& v : p.versions)
      versions.push_back({{"datetime", format_iso8601(v.datetime)}, {"media_type", v.media_type}, {"body", v.body}});
    pages.push_back({{"uri", p.uri},
                     {"versions", versions},
                     {"live_version", p.live_version ? ordered_json(*p.live_version) : ordered_json()}});
  }
  j["pages"] = pages;

  auto holdings = ordered_json::array();
  for (const auto& h : m.holdings) {
    auto snaps = ordered_json::array();
    for (auto s : h.snapshots) snaps.push_back(format_iso8601(s));
    holdings.push_back({{"archive", h.archive_host}, {"uri", h.uri}, {"snapshots", snaps}});
  }
  j["archive_holdings"] = holdings;

  auto behaviors = ordered_json::object();
  for (const auto& [uri, b] : m.behaviors) {
    ordered_json e{{"kind", std::string(to_string(b.kind))}};
    if (b.kind == BehaviorKind::Status) e["status"] = b.status;
    if (b.kind == BehaviorKind::Redirect) e["location"] = b.location;
    behaviors[uri] = e;
  }
  j["behaviors"] = behaviors;
  j["timemap_errors"] = m.timemap_errors;
  j["broken_archives"] = m.broken_archives;

  auto annotations = ordered_json::array();
  for (const auto& a : m.annotations)
    annotations.push_back(
        {{"id", a.id}, {"uri", a.uri}, {"exact", a.exact}, {"updated", format_iso8601(a.updated)}});
  j["annotations"] = annotations;

  auto expected = ordered_json::object();
  for (const auto& [id, c] : m.expected_verdicts) expected[id] = std::string(to_string(c));
  j["expected_verdicts"] = expected;
  return j.dump(2) + "\n";
}

FixtureManifest manifest_from_json(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text.begin(), text.end());
  } catch (const ordered_json::parse_error& e) {
    throw std::runtime_error(std::string("manifest: ") + e.what());
  }
  FixtureManifest m;
  m.version = j.value("manifest_version", 0);
  if (m.version != kManifestVersion)
    throw std::runtime_error("manifest: unsupported manifest_version " + std::to_string(m.version));

  for (const auto& p : j.value("pages", ordered_json::array())) {
    Page page;
    page.uri = p.at("uri").get<std::string>();
    for (const auto& v : p.at("versions"))
      page.versions.push_back(PageVersion{seconds_from(v.at("datetime").get<std::string>()),
                                          v.at("body").get<std::string>(), v.value("media_type", "text/html")});
    if (auto lv = p.find("live_version"); lv != p.end() && lv->is_number_unsigned())
      page.live_version = lv->get<std::size_t>();
    m.pages.push_back(std::move(page));
  }
  for (const auto& h : j.value("archive_holdings", ordered_json::array())) {
    Holding holding;
    holding.archive_host = h.at("archive").get<std::string>();
    holding.uri = h.at("uri").get<std::string>();
    for (const auto& s : h.at("snapshots")) holding.snapshots.push_back(seconds_from(s.get<std::string>()));
    m.holdings.push_back(std::move(holding));
  }
  const auto behaviors = j.value("behaviors", ordered_json::object());
  for (const auto& [uri, b] : behaviors.items()) {
    Behavior behavior;
    behavior.kind = behavior_from(b.at("kind").get<std::string>());
    behavior.status = b.value("status", 0);
    behavior.location = b.value("location", "");
    m.behaviors[uri] = behavior;
  }
  m.timemap_errors = j.value("timemap_errors", std::set<std::string>{});
  m.broken_archives = j.value("broken_archives", std::set<std::string>{});
  for (const auto& a : j.value("annotations", ordered_json::array())) {
    auto updated = parse_iso8601(a.at("updated").get<std::string>());
    if (!updated) throw std::runtime_error("manifest: bad annotation timestamp");
    m.annotations.push_back(FixtureAnnotation{a.at("id").get<std::string>(), a.at("uri").get<std::string>(),
                                              a.at("exact").get<std::string>(), *updated});
  }
  const auto expected = j.value("expected_verdicts", ordered_json::object());
  for (const auto& [id, c] : expected.items()) {
    auto cat = category_from_string(c.get<std::string>());
    if (!cat) throw std::runtime_error("manifest: unknown category " + c.get<std::string>());
    m.expected_verdicts[id] = *cat;
  }
  return m;
}

std::vector<std::string> validate(const FixtureManifest& m) {
  std::vector<std::string> problems;
  for (const auto& h : m.holdings) {
    const Page* page = m.find_page(h.uri);
    if (!page) {
      problems.push_back("holding for unknown page " + h.uri);
      continue;
    }
    for (auto s : h.snapshots)
      if (!version_at(*page, s)) problems.push_back("snapshot " + format_iso8601(s) + " of " + h.uri + " predates every version");
  }
  for (const auto& p : m.pages)
    if (p.live_version && *p.live_version >= p.versions.size()) problems.push_back("live_version out of range for " + p.uri);
  return problems;
}

std::string annotations_jsonl(const FixtureManifest& m) {
  std::string out;
  for (const auto& a : m.annotations) {
    ordered_json doc;
    doc["id"] = a.id;
    doc["updated"] = format_iso8601(a.updated);
    doc["created"] = format_iso8601(a.updated);
    doc["target"] = ordered_json::array(
        {{{"source", a.uri},
          {"selector", ordered_json::array({{{"type", "TextQuoteSelector"}, {"exact", a.exact}}})}}});
    doc["text"] = "";
    doc["tags"] = ordered_json::array();
    doc["uri"] = a.uri;
    out += doc.dump() + "\n";
  }
  return out;
}

}  // namespace annoaudit::fixture
