#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "annoaudit/annotation.hpp"
#include "annoaudit/memento.hpp"
#include "annoaudit/probe.hpp"
#include "annoaudit/text.hpp"
#include "annoaudit/triage.hpp"

namespace annoaudit {

enum class LiveAttachment { Yes, No, Inaccessible };
enum class SideAttachment { Yes, No, NoMemento, Unknown };
enum class Category { Excluded, AttachedArchived, InDanger, Recoverable, Orphaned, Indeterminate };

inline constexpr std::array kLiveStates = {LiveAttachment::Yes, LiveAttachment::No, LiveAttachment::Inaccessible};
inline constexpr std::array kSideStates = {SideAttachment::Yes, SideAttachment::No, SideAttachment::NoMemento,
                                           SideAttachment::Unknown};
inline constexpr std::array kCategories = {Category::Excluded,  Category::AttachedArchived, Category::InDanger,
                                           Category::Recoverable, Category::Orphaned,       Category::Indeterminate};

std::string_view to_string(LiveAttachment v);
std::string_view to_string(SideAttachment v);
std::string_view to_string(Category v);
std::optional<LiveAttachment> live_from_string(std::string_view s);
std::optional<SideAttachment> side_from_string(std::string_view s);
std::optional<Category> category_from_string(std::string_view s);

/// Verdict category from the live state and the two memento sides.
///
///   live Yes:            a side Yes -> AttachedArchived; else a side Unknown
///                        -> Indeterminate; else InDanger.
///   live No/Inaccessible: a side Yes -> Recoverable; else a side Unknown
///                        -> Indeterminate; else Orphaned.
Category categorize(LiveAttachment live, SideAttachment before, SideAttachment after);

enum class MementoOutcome { Attached, NotAttached, FetchFailed };

std::string_view to_string(MementoOutcome v);

struct MementoCheck {
  MementoRef memento;
  MementoOutcome outcome = MementoOutcome::FetchFailed;
  CaveatSet caveats = 0;
};

struct SideVerdict {
  SideAttachment state = SideAttachment::NoMemento;
  std::optional<SecondStamp> memento_datetime;
  std::vector<MementoCheck> checks;
};

struct ProbeSummary {
  FinalStatus final_status;
  bool soft_4xx = false;
  ProbeGroup group = ProbeGroup::ErrorGroup;
  std::vector<std::string> redirect_chain;
};

struct AuditVerdict {
  std::string annotation_id;
  std::string target_uri;
  Timestamp created_at{};
  TriageClass triage = TriageClass::Resolvable;
  std::optional<ProbeSummary> probe;  // absent for excluded targets
  LiveAttachment live = LiveAttachment::Inaccessible;
  std::optional<std::size_t> live_match_offset;
  CaveatSet live_caveats = 0;
  SideVerdict before;
  SideVerdict after;
  bool timemap_unavailable = false;
  Category category = Category::Excluded;
  /// Sorted, distinct labels of archives holding an attaching memento.
  std::vector<std::string> recovering_archives;
  std::vector<std::string> trace;
};

/// The capabilities an audit needs. Each may be replaced in tests.
struct AuditServices {
  std::function<ProbeOutcome(std::string_view uri)> probe;
  /// Throws TimeMapUnavailable when the aggregator cannot answer.
  std::function<TimeMap(std::string_view uri_r)> timemap;
  /// 200 body of a memento, or nullopt on any fetch failure.
  std::function<std::optional<FetchedBody>(const MementoRef& memento)> fetch_memento;
  /// Optional second pass for pages whose text only appears after scripts
  /// run. Called only when the plain fetch did not attach.
  std::function<std::optional<FetchedBody>(std::string_view uri)> renderer;
  const ExtractorRegistry* extractors = nullptr;
};

/// Wires the services to a fetcher, a memento aggregator and an extractor
/// registry. The references must outlive the returned object.
AuditServices make_http_services(Fetcher& fetcher, const ProbeConfig& config, std::string aggregator_base,
                                 const ExtractorRegistry& extractors);

/// Triage, live probe and text check, TimeMap lookup, and the check of every
/// tied memento on each side of the annotation instant. Never throws for
/// network trouble; failures end up in the status fields and the trace.
AuditVerdict audit_annotation(const AnnotationRecord& record, const AuditServices& services);

/// Which memento-availability table a verdict falls in.
enum class TableShape { BothSides, BeforeOnly, AfterOnly, NoMementos, Undetermined };

TableShape table_shape(const AuditVerdict& v);

/// Label of the verdict's row in the status histogram.
std::string status_label(const AuditVerdict& v);

struct ArchiveRecovery {
  std::size_t live_attached = 0;
  std::size_t live_not_attached = 0;
};

struct AuditSummary {
  std::size_t total = 0;          // every verdict, excluded included
  std::size_t excluded = 0;
  std::size_t audited = 0;        // total - excluded
  std::array<std::size_t, kCategories.size()> categories{};

  /// Index live*4 + before*2 + after, each 1 for attached.
  std::array<std::size_t, 8> both_sides{};
  /// Index live*2 + side.
  std::array<std::size_t, 4> before_only{};
  std::array<std::size_t, 4> after_only{};
  /// Index: live attached.
  std::array<std::size_t, 2> no_mementos{};
  /// Audited verdicts with an Unknown side; they are not in the four tables.
  std::size_t undetermined_tables = 0;

  std::map<std::string, ArchiveRecovery> archives;
  std::map<std::string, std::size_t> status_histogram;

  std::size_t live_attached = 0;      // audited with live = Yes
  std::size_t live_not_attached = 0;  // audited with live = No or Inaccessible

  std::size_t count(Category c) const;
  /// Audited verdicts minus the indeterminate ones.
  std::size_t percentage_base() const;
  /// Attached / not-attached row sums over the four memento tables.
  std::size_t tables_attached() const;
  std::size_t tables_not_attached() const;
};

AuditSummary aggregate(std::span<const AuditVerdict> verdicts);

inline constexpr int kVerdictSchemaVersion = 1;

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One verdict as a single JSON line (no trailing newline).
std::string verdict_to_json(const AuditVerdict& v);

/// Throws SchemaError for a different schema_version or missing fields.
AuditVerdict verdict_from_json(std::string_view line);

/// Machine-readable summary document.
std::string summary_to_json(const AuditSummary& s);

/// Aligned text tables laid out like the published ones.
std::string render_summary_tables(const AuditSummary& s);

std::string render_census_table(const TypeCensus& c, std::size_t parse_errors);
std::string census_to_json(const TypeCensus& c, std::size_t parse_errors);

}  // namespace annoaudit
