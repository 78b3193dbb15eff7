#include "annoaudit/audit.hpp"

#include <algorithm>
#include <set>

namespace annoaudit {

namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> parse_enum(std::string_view s, const std::array<Enum, N>& values) {
  for (auto v : values)
    if (to_string(v) == s) return v;
  return std::nullopt;
}

const ExtractorRegistry& registry_or_default(const AuditServices& s) {
  static const ExtractorRegistry kDefault;
  return s.extractors ? *s.extractors : kDefault;
}

struct TextCheck {
  bool attached = false;
  std::optional<std::size_t> offset;
  CaveatSet caveats = 0;
};

TextCheck check_body(const FetchedBody& body, const std::string& exact, const ExtractorRegistry& extractors) {
  TextCheck out;
  try {
    auto text = extract_text(body.bytes, body.media_type, extractors, body.charset);
    auto check = quote_attached(text, exact);
    out.attached = check.attached;
    out.offset = check.match_offset;
    out.caveats = check.caveats;
  } catch (const ExtractionUnavailable&) {
    out.caveats = out.caveats | Caveat::ExtractionUnavailable;
  }
  return out;
}

SideVerdict check_side(const std::vector<MementoRef>& tied, const AnnotationRecord& record,
                       const AuditServices& services, std::vector<std::string>& trace, const char* label) {
  SideVerdict side;
  if (tied.empty()) {
    side.state = SideAttachment::NoMemento;
    return side;
  }
  side.memento_datetime = tied.front().memento_datetime;
  bool any_attached = false;
  bool any_fetched = false;
  // Every tied memento is checked so that each archive gets credit.
  for (const auto& m : tied) {
    MementoCheck check{m, MementoOutcome::FetchFailed, 0};
    auto body = services.fetch_memento ? services.fetch_memento(m) : std::nullopt;
    if (!body) {
      trace.push_back(std::string(label) + ": fetch failed " + m.uri_m);
    } else {
      any_fetched = true;
      auto tc = check_body(*body, record.exact, registry_or_default(services));
      check.caveats = tc.caveats;
      check.outcome = tc.attached ? MementoOutcome::Attached : MementoOutcome::NotAttached;
      any_attached = any_attached || tc.attached;
    }
    side.checks.push_back(std::move(check));
  }
  if (any_attached)
    side.state = SideAttachment::Yes;
  else if (!any_fetched)
    side.state = SideAttachment::Unknown;
  else
    side.state = SideAttachment::No;
  return side;
}

}  // namespace

std::string_view to_string(LiveAttachment v) {
  switch (v) {
    case LiveAttachment::Yes:
      return "Yes";
    case LiveAttachment::No:
      return "No";
    case LiveAttachment::Inaccessible:
      return "Inaccessible";
  }
  return "Inaccessible";
}

std::string_view to_string(SideAttachment v) {
  switch (v) {
    case SideAttachment::Yes:
      return "Yes";
    case SideAttachment::No:
      return "No";
    case SideAttachment::NoMemento:
      return "NoMemento";
    case SideAttachment::Unknown:
      return "Unknown";
  }
  return "Unknown";
}

std::string_view to_string(Category v) {
  switch (v) {
    case Category::Excluded:
      return "Excluded";
    case Category::AttachedArchived:
      return "AttachedArchived";
    case Category::InDanger:
      return "InDanger";
    case Category::Recoverable:
      return "Recoverable";
    case Category::Orphaned:
      return "Orphaned";
    case Category::Indeterminate:
      return "Indeterminate";
  }
  return "Indeterminate";
}

std::string_view to_string(MementoOutcome v) {
  switch (v) {
    case MementoOutcome::Attached:
      return "attached";
    case MementoOutcome::NotAttached:
      return "not_attached";
    case MementoOutcome::FetchFailed:
      return "fetch_failed";
  }
  return "fetch_failed";
}

std::optional<LiveAttachment> live_from_string(std::string_view s) { return parse_enum(s, kLiveStates); }
std::optional<SideAttachment> side_from_string(std::string_view s) { return parse_enum(s, kSideStates); }
std::optional<Category> category_from_string(std::string_view s) { return parse_enum(s, kCategories); }

Category categorize(LiveAttachment live, SideAttachment before, SideAttachment after) {
  const bool archived = before == SideAttachment::Yes || after == SideAttachment::Yes;
  const bool unknown = before == SideAttachment::Unknown || after == SideAttachment::Unknown;
  if (live == LiveAttachment::Yes) {
    if (archived) return Category::AttachedArchived;
    return unknown ? Category::Indeterminate : Category::InDanger;
  }
  if (archived) return Category::Recoverable;
  return unknown ? Category::Indeterminate : Category::Orphaned;
}

AuditServices make_http_services(Fetcher& fetcher, const ProbeConfig& config, std::string aggregator_base,
                                 const ExtractorRegistry& extractors) {
  AuditServices s;
  s.extractors = &extractors;
  s.probe = [&fetcher, &config](std::string_view uri) { return probe(uri, fetcher, config); };
  s.timemap = [&fetcher, &config, base = std::move(aggregator_base)](std::string_view uri_r) {
    return fetch_timemap(uri_r, base, fetcher, config.max_redirects);
  };
  s.fetch_memento = [&fetcher, &config](const MementoRef& m) -> std::optional<FetchedBody> {
    auto followed = fetch_following(fetcher, FetchRequest{"GET", m.uri_m, std::nullopt}, config.max_redirects);
    const auto& r = followed.response;
    if (!r.transport_ok() || r.status != 200) return std::nullopt;
    return FetchedBody{r.body, r.media_type(), r.charset()};
  };
  return s;
}

AuditVerdict audit_annotation(const AnnotationRecord& record, const AuditServices& services) {
  AuditVerdict v;
  v.annotation_id = record.id;
  v.target_uri = record.target_uri;
  v.created_at = record.created_at;

  v.triage = triage_uri(record.target_uri).triage_class;
  if (is_excluded(v.triage)) {
    v.category = Category::Excluded;
    v.before.state = v.after.state = SideAttachment::Unknown;
    v.trace.push_back("excluded: " + std::string(to_string(v.triage)));
    return v;
  }

  auto outcome = services.probe(record.target_uri);
  v.probe = ProbeSummary{outcome.final_status, outcome.soft_4xx, outcome.group, outcome.redirect_chain};
  v.trace.push_back("probe: " + outcome.final_status.str() + (outcome.soft_4xx ? " (soft 4xx)" : ""));

  if (outcome.group == ProbeGroup::ErrorGroup || !outcome.body) {
    v.live = LiveAttachment::Inaccessible;
  } else {
    auto tc = check_body(*outcome.body, record.exact, registry_or_default(services));
    if (!tc.attached && services.renderer) {
      if (auto rendered = services.renderer(record.target_uri)) {
        auto again = check_body(*rendered, record.exact, registry_or_default(services));
        if (again.attached) {
          tc = again;
          tc.caveats = tc.caveats | Caveat::RendererPass;
          v.trace.push_back("live: attached after renderer pass");
        }
      }
    }
    v.live = tc.attached ? LiveAttachment::Yes : LiveAttachment::No;
    v.live_match_offset = tc.offset;
    v.live_caveats = tc.caveats;
  }

  try {
    auto timemap = services.timemap(record.target_uri);
    auto hood = nearest_pair(timemap, record.created_at);
    v.trace.push_back("timemap: " + std::to_string(timemap.mementos.size()) + " mementos, " +
                      std::string(to_string(hood.shape())));
    v.before = check_side(hood.before, record, services, v.trace, "before");
    v.after = check_side(hood.after, record, services, v.trace, "after");
  } catch (const TimeMapUnavailable& e) {
    v.timemap_unavailable = true;
    v.before.state = v.after.state = SideAttachment::Unknown;
    v.trace.push_back(std::string("timemap unavailable: ") + e.what());
  }

  std::set<std::string> archives;
  for (const auto* side : {&v.before, &v.after})
    for (const auto& c : side->checks)
      if (c.outcome == MementoOutcome::Attached) archives.insert(c.memento.archive);
  v.recovering_archives.assign(archives.begin(), archives.end());

  v.category = categorize(v.live, v.before.state, v.after.state);
  return v;
}

TableShape table_shape(const AuditVerdict& v) {
  auto known = [](SideAttachment s) { return s != SideAttachment::Unknown; };
  if (v.category == Category::Excluded || !known(v.before.state) || !known(v.after.state))
    return TableShape::Undetermined;
  bool has_before = v.before.state != SideAttachment::NoMemento;
  bool has_after = v.after.state != SideAttachment::NoMemento;
  if (has_before && has_after) return TableShape::BothSides;
  if (has_before) return TableShape::BeforeOnly;
  if (has_after) return TableShape::AfterOnly;
  return TableShape::NoMementos;
}

std::string status_label(const AuditVerdict& v) {
  switch (v.triage) {
    case TriageClass::ExcludedLocalhost:
      return "localhost";
    case TriageClass::ExcludedUrn:
      return "URN";
    case TriageClass::ExcludedMalformed:
      return "Unknown";
    case TriageClass::Resolvable:
      break;
  }
  if (!v.probe) return "Unknown";
  if (v.probe->soft_4xx) return "Soft 401/403/404";
  switch (v.probe->final_status.transport) {
    case TransportError::Timeout:
      return "Time out";
    case TransportError::ConnError:
      return "Connection error";
    case TransportError::None:
      break;
  }
  return std::to_string(v.probe->final_status.http);
}

}  // namespace annoaudit
