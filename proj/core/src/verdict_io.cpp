#include <json.hpp>

#include "annoaudit/audit.hpp"

namespace annoaudit {

namespace {

using nlohmann::ordered_json;

constexpr std::array kAllCaveats = {Caveat::LossyDecode, Caveat::ExternalExtractor, Caveat::RendererPass,
                                    Caveat::ExtractionUnavailable};

ordered_json caveats_json(CaveatSet set) {
  auto arr = ordered_json::array();
  for (auto c : kAllCaveats)
    if (has_caveat(set, c)) arr.push_back(std::string(to_string(c)));
  return arr;
}

CaveatSet caveats_from(const ordered_json& arr) {
  CaveatSet set = 0;
  for (const auto& item : arr)
    for (auto c : kAllCaveats)
      if (item.get<std::string>() == to_string(c)) set = set | c;
  return set;
}

ordered_json side_json(const SideVerdict& side) {
  ordered_json j;
  j["state"] = std::string(to_string(side.state));
  j["memento_datetime"] = side.memento_datetime ? ordered_json(format_iso8601(*side.memento_datetime)) : ordered_json();
  auto checks = ordered_json::array();
  for (const auto& c : side.checks) {
    checks.push_back({{"uri_m", c.memento.uri_m},
                      {"archive", c.memento.archive},
                      {"datetime", format_iso8601(c.memento.memento_datetime)},
                      {"outcome", std::string(to_string(c.outcome))},
                      {"caveats", caveats_json(c.caveats)}});
  }
  j["mementos"] = checks;
  return j;
}

template <typename T>
T required(const ordered_json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string("verdict is missing field \"") + key + "\"");
  try {
    return it->get<T>();
  } catch (const ordered_json::exception&) {
    throw SchemaError(std::string("verdict field \"") + key + "\" has the wrong type");
  }
}

SecondStamp seconds_from(const std::string& text) {
  auto t = parse_iso8601(text);
  if (!t) throw SchemaError("bad datetime " + text);
  return truncate_to_seconds(*t);
}

SideVerdict side_from(const ordered_json& j) {
  SideVerdict side;
  auto state = side_from_string(required<std::string>(j, "state"));
  if (!state) throw SchemaError("bad memento side state");
  side.state = *state;
  if (auto dt = j.find("memento_datetime"); dt != j.end() && dt->is_string())
    side.memento_datetime = seconds_from(dt->get<std::string>());
  for (const auto& c : j.value("mementos", ordered_json::array())) {
    MementoCheck check;
    check.memento.uri_m = required<std::string>(c, "uri_m");
    check.memento.archive = required<std::string>(c, "archive");
    check.memento.memento_datetime = seconds_from(required<std::string>(c, "datetime"));
    auto outcome = required<std::string>(c, "outcome");
    if (outcome == "attached")
      check.outcome = MementoOutcome::Attached;
    else if (outcome == "not_attached")
      check.outcome = MementoOutcome::NotAttached;
    else
      check.outcome = MementoOutcome::FetchFailed;
    check.caveats = caveats_from(c.value("caveats", ordered_json::array()));
    side.checks.push_back(std::move(check));
  }
  return side;
}

}  // namespace

std::string verdict_to_json(const AuditVerdict& v) {
  const bool excluded = v.category == Category::Excluded;
  ordered_json j;
  j["schema_version"] = kVerdictSchemaVersion;
  j["annotation_id"] = v.annotation_id;
  j["target_uri"] = v.target_uri;
  j["created_at"] = format_iso8601(v.created_at);
  j["triage"] = std::string(to_string(v.triage));
  j["status"] = status_label(v);
  if (v.probe) {
    j["probe"] = {{"final_status", v.probe->final_status.str()},
                  {"soft_4xx", v.probe->soft_4xx},
                  {"group", std::string(to_string(v.probe->group))},
                  {"redirect_chain", v.probe->redirect_chain}};
  } else {
    j["probe"] = nullptr;
  }
  j["live_attached"] = excluded ? ordered_json() : ordered_json(std::string(to_string(v.live)));
  j["live_match_offset"] = v.live_match_offset ? ordered_json(*v.live_match_offset) : ordered_json();
  j["live_caveats"] = caveats_json(v.live_caveats);
  j["before"] = side_json(v.before);
  j["after"] = side_json(v.after);
  j["timemap_unavailable"] = v.timemap_unavailable;
  j["category"] = std::string(to_string(v.category));
  j["recovering_archives"] = v.recovering_archives;
  j["trace"] = v.trace;
  return j.dump();
}

AuditVerdict verdict_from_json(std::string_view line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line.begin(), line.end());
  } catch (const ordered_json::parse_error& e) {
    throw SchemaError(std::string("verdict is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("verdict is not a JSON object");
  auto version = j.find("schema_version");
  if (version == j.end() || !version->is_number_integer() || version->get<int>() != kVerdictSchemaVersion)
    throw SchemaError("unsupported verdict schema_version (expected " + std::to_string(kVerdictSchemaVersion) + ")");

  AuditVerdict v;
  v.annotation_id = required<std::string>(j, "annotation_id");
  v.target_uri = required<std::string>(j, "target_uri");
  auto created = parse_iso8601(required<std::string>(j, "created_at"));
  if (!created) throw SchemaError("bad created_at");
  v.created_at = *created;
  if (!triage_from_string(required<std::string>(j, "triage"), v.triage)) throw SchemaError("bad triage class");

  if (auto p = j.find("probe"); p != j.end() && p->is_object()) {
    ProbeSummary ps;
    auto status = FinalStatus::parse(required<std::string>(*p, "final_status"));
    if (!status) throw SchemaError("bad final_status");
    ps.final_status = *status;
    ps.soft_4xx = required<bool>(*p, "soft_4xx");
    ps.group = required<std::string>(*p, "group") == "OkGroup" ? ProbeGroup::OkGroup : ProbeGroup::ErrorGroup;
    ps.redirect_chain = p->value("redirect_chain", std::vector<std::string>{});
    v.probe = std::move(ps);
  }

  auto category = category_from_string(required<std::string>(j, "category"));
  if (!category) throw SchemaError("bad category");
  v.category = *category;

  if (auto live = j.find("live_attached"); live != j.end() && live->is_string()) {
    auto parsed = live_from_string(live->get<std::string>());
    if (!parsed) throw SchemaError("bad live_attached");
    v.live = *parsed;
  } else if (v.category != Category::Excluded) {
    throw SchemaError("verdict is missing live_attached");
  }
  if (auto off = j.find("live_match_offset"); off != j.end() && off->is_number_unsigned())
    v.live_match_offset = off->get<std::size_t>();
  v.live_caveats = caveats_from(j.value("live_caveats", ordered_json::array()));
  v.before = side_from(required<ordered_json>(j, "before"));
  v.after = side_from(required<ordered_json>(j, "after"));
  v.timemap_unavailable = j.value("timemap_unavailable", false);
  v.recovering_archives = j.value("recovering_archives", std::vector<std::string>{});
  v.trace = j.value("trace", std::vector<std::string>{});
  return v;
}

}  // namespace annoaudit
