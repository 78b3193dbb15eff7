#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "annoaudit/audit.hpp"

namespace annoaudit {

namespace {

using nlohmann::ordered_json;

constexpr std::size_t category_index(Category c) { return static_cast<std::size_t>(c); }

const char* yn(bool b) { return b ? "Yes" : "No"; }

std::string percent(std::size_t part, std::size_t whole) {
  if (whole == 0) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * static_cast<double>(part) / static_cast<double>(whole));
  return buf;
}

// Minimal aligned table: first column right-aligned counts, the rest left.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }
  void separator() { rows_.push_back({}); }

  std::string render(const std::string& title) const {
    std::vector<std::size_t> width(header_.size(), 0);
    for (std::size_t i = 0; i < header_.size(); ++i) width[i] = header_[i].size();
    for (const auto& r : rows_)
      for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) width[i] = std::max(width[i], r[i].size());
    std::size_t line_width = 0;
    for (auto w : width) line_width += w + 3;

    std::ostringstream out;
    out << title << "\n" << std::string(line_width, '-') << "\n";
    auto emit = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < width.size(); ++i) {
        std::string cell = i < cells.size() ? cells[i] : "";
        std::string pad(width[i] - cell.size(), ' ');
        out << (i == 0 ? pad + cell : cell + pad);
        out << (i + 1 < width.size() ? " | " : "\n");
      }
    };
    emit(header_);
    out << std::string(line_width, '-') << "\n";
    for (const auto& r : rows_) {
      if (r.empty())
        out << std::string(line_width, '-') << "\n";
      else
        emit(r);
    }
    out << std::string(line_width, '-') << "\n\n";
    return out.str();
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Rows of the census table in the published order; the empty combination is
// appended only when present.
constexpr std::array<AnnotationKinds, 7> kCensusOrder = {{{false, true, false},
                                                          {true, true, false},
                                                          {true, true, true},
                                                          {true, false, true},
                                                          {false, true, true},
                                                          {false, false, true},
                                                          {true, false, false}}};

std::vector<std::pair<std::string, ArchiveRecovery>> sorted_archives(const AuditSummary& s) {
  std::vector<std::pair<std::string, ArchiveRecovery>> rows(s.archives.begin(), s.archives.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second.live_attached != b.second.live_attached) return a.second.live_attached > b.second.live_attached;
    return a.second.live_not_attached > b.second.live_not_attached;
  });
  return rows;
}

std::vector<std::pair<std::string, std::size_t>> sorted_histogram(const AuditSummary& s) {
  std::vector<std::pair<std::string, std::size_t>> rows(s.status_histogram.begin(), s.status_histogram.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return rows;
}

}  // namespace

std::size_t AuditSummary::count(Category c) const { return categories[category_index(c)]; }

std::size_t AuditSummary::percentage_base() const { return audited - count(Category::Indeterminate); }

std::size_t AuditSummary::tables_attached() const {
  std::size_t n = no_mementos[1];
  for (std::size_t i = 4; i < 8; ++i) n += both_sides[i];
  for (std::size_t i = 2; i < 4; ++i) n += before_only[i] + after_only[i];
  return n;
}

std::size_t AuditSummary::tables_not_attached() const {
  std::size_t n = no_mementos[0];
  for (std::size_t i = 0; i < 4; ++i) n += both_sides[i];
  for (std::size_t i = 0; i < 2; ++i) n += before_only[i] + after_only[i];
  return n;
}

AuditSummary aggregate(std::span<const AuditVerdict> verdicts) {
  AuditSummary s;
  for (const auto& v : verdicts) {
    ++s.total;
    ++s.categories[category_index(v.category)];
    ++s.status_histogram[status_label(v)];
    if (v.category == Category::Excluded) {
      ++s.excluded;
      continue;
    }
    ++s.audited;
    const bool live = v.live == LiveAttachment::Yes;
    if (live)
      ++s.live_attached;
    else
      ++s.live_not_attached;

    const std::size_t l = live ? 1 : 0;
    const std::size_t b = v.before.state == SideAttachment::Yes ? 1 : 0;
    const std::size_t a = v.after.state == SideAttachment::Yes ? 1 : 0;
    switch (table_shape(v)) {
      case TableShape::BothSides:
        ++s.both_sides[l * 4 + b * 2 + a];
        break;
      case TableShape::BeforeOnly:
        ++s.before_only[l * 2 + b];
        break;
      case TableShape::AfterOnly:
        ++s.after_only[l * 2 + a];
        break;
      case TableShape::NoMementos:
        ++s.no_mementos[l];
        break;
      case TableShape::Undetermined:
        ++s.undetermined_tables;
        break;
    }

    for (const auto& archive : v.recovering_archives) {
      auto& row = s.archives[archive];
      if (live)
        ++row.live_attached;
      else
        ++row.live_not_attached;
    }
  }
  return s;
}

std::string summary_to_json(const AuditSummary& s) {
  ordered_json j;
  j["schema_version"] = kVerdictSchemaVersion;
  j["total"] = s.total;
  j["excluded"] = s.excluded;
  j["audited"] = s.audited;
  j["percentage_base"] = s.percentage_base();

  ordered_json cats = ordered_json::object();
  for (auto c : kCategories) cats[std::string(to_string(c))] = s.count(c);
  j["categories"] = cats;

  ordered_json pct = ordered_json::object();
  for (auto c : {Category::AttachedArchived, Category::InDanger, Category::Recoverable, Category::Orphaned})
    pct[std::string(to_string(c))] =
        s.percentage_base() ? 100.0 * static_cast<double>(s.count(c)) / static_cast<double>(s.percentage_base()) : 0.0;
  j["category_percentages"] = pct;

  j["live"] = {{"attached", s.live_attached},
               {"not_attached", s.live_not_attached},
               {"tables_attached", s.tables_attached()},
               {"tables_not_attached", s.tables_not_attached()}};

  auto rows3 = ordered_json::array();
  for (int i = 7; i >= 0; --i)
    rows3.push_back({{"live", (i & 4) != 0}, {"before", (i & 2) != 0}, {"after", (i & 1) != 0},
                     {"count", s.both_sides[static_cast<std::size_t>(i)]}});
  auto side_rows = [](const std::array<std::size_t, 4>& t, const char* key) {
    auto rows = ordered_json::array();
    for (int i = 3; i >= 0; --i)
      rows.push_back({{"live", (i & 2) != 0}, {key, (i & 1) != 0}, {"count", t[static_cast<std::size_t>(i)]}});
    return rows;
  };
  j["tables"] = {{"before_and_after", rows3},
                 {"before_only", side_rows(s.before_only, "before")},
                 {"after_only", side_rows(s.after_only, "after")},
                 {"no_mementos",
                  ordered_json::array({{{"live", true}, {"count", s.no_mementos[1]}},
                                       {{"live", false}, {"count", s.no_mementos[0]}}})},
                 {"undetermined", s.undetermined_tables}};

  auto archives = ordered_json::array();
  std::size_t total_live = 0, total_not = 0;
  for (const auto& [name, row] : sorted_archives(s)) {
    archives.push_back({{"archive", name},
                        {"live_attached", row.live_attached},
                        {"live_not_attached", row.live_not_attached}});
    total_live += row.live_attached;
    total_not += row.live_not_attached;
  }
  j["archives"] = {{"rows", archives},
                   {"total_live_attached", total_live},
                   {"total_live_not_attached", total_not},
                   {"base_live_attached", s.count(Category::AttachedArchived)},
                   {"base_live_not_attached", s.count(Category::Recoverable)},
                   {"note", "an annotation recovered by several archives counts once per archive"}};

  auto hist = ordered_json::array();
  for (const auto& [label, n] : sorted_histogram(s)) hist.push_back({{"status", label}, {"count", n}});
  j["status_histogram"] = hist;
  return j.dump(2) + "\n";
}

std::string render_summary_tables(const AuditSummary& s) {
  std::string out;

  TextTable status({"Number of Annotations", "Status Code"});
  for (const auto& [label, n] : sorted_histogram(s)) status.row({std::to_string(n), label});
  out += status.render("HTTP status of annotation targets");

  TextTable live({"Number of Annotations", "Attached to Live Web", "Share"});
  live.row({std::to_string(s.live_attached), "Yes", percent(s.live_attached, s.audited)});
  live.row({std::to_string(s.live_not_attached), "No", percent(s.live_not_attached, s.audited)});
  out += live.render("Attachment to the live web (" + std::to_string(s.audited) + " audited, " +
                     std::to_string(s.excluded) + " excluded)");

  TextTable both({"Number of Annotations", "Attached to Live Web Page", "Memento (L)", "Memento (R)"});
  for (int i = 7; i >= 0; --i)
    both.row({std::to_string(s.both_sides[static_cast<std::size_t>(i)]), yn(i & 4), yn(i & 2), yn(i & 1)});
  out += both.render("Mementos before and after the annotation date");

  TextTable before({"Number of Annotations", "Attached to Live Web Page", "Memento (L)"});
  TextTable after({"Number of Annotations", "Attached to Live Web Page", "Memento (R)"});
  for (int i = 3; i >= 0; --i) {
    before.row({std::to_string(s.before_only[static_cast<std::size_t>(i)]), yn(i & 2), yn(i & 1)});
    after.row({std::to_string(s.after_only[static_cast<std::size_t>(i)]), yn(i & 2), yn(i & 1)});
  }
  out += before.render("Mementos only before the annotation date");
  out += after.render("Mementos only after the annotation date");

  TextTable none({"Number of Annotations", "Attached to Live Web"});
  none.row({std::to_string(s.no_mementos[1]), "Yes"});
  none.row({std::to_string(s.no_mementos[0]), "No"});
  out += none.render("No mementos");
  if (s.undetermined_tables)
    out += "(" + std::to_string(s.undetermined_tables) + " audited annotations had an unknown memento side)\n\n";

  const auto base_live = s.count(Category::AttachedArchived);
  const auto base_not = s.count(Category::Recoverable);
  TextTable archives({"Archive", "Attached to Live Web", "Not Attached to Live Web"});
  std::size_t total_live = 0, total_not = 0;
  for (const auto& [name, row] : sorted_archives(s)) {
    archives.row({name, std::to_string(row.live_attached) + " (" + percent(row.live_attached, base_live) + ")",
                  std::to_string(row.live_not_attached) + " (" + percent(row.live_not_attached, base_not) + ")"});
    total_live += row.live_attached;
    total_not += row.live_not_attached;
  }
  archives.separator();
  archives.row({"Total", std::to_string(total_live) + " (" + percent(total_live, base_live) + ")",
                std::to_string(total_not) + " (" + percent(total_not, base_not) + ")"});
  out += archives.render("Annotation targets recovered by archive (multi-counted across archives)");

  TextTable cats({"Number of Annotations", "Category", "Share"});
  for (auto c : {Category::AttachedArchived, Category::InDanger, Category::Recoverable, Category::Orphaned})
    cats.row({std::to_string(s.count(c)), std::string(to_string(c)), percent(s.count(c), s.percentage_base())});
  cats.separator();
  cats.row({std::to_string(s.count(Category::Indeterminate)), "indeterminate", "-"});
  cats.row({std::to_string(s.count(Category::Excluded)), "excluded", "-"});
  out += cats.render("Status of annotations");

  out += "Attached rows across the memento tables: " + std::to_string(s.tables_attached()) +
         "; not attached: " + std::to_string(s.tables_not_attached()) + "\n";
  return out;
}

std::string render_census_table(const TypeCensus& c, std::size_t parse_errors) {
  TextTable t({"Number of Annotations", "Highlighted Text", "Notes", "Tags"});
  auto mark = [](bool b) { return std::string(b ? "x" : ""); };
  for (auto k : kCensusOrder) t.row({std::to_string(c.count(k)), mark(k.highlight), mark(k.note), mark(k.tags)});
  if (auto empty = c.count(AnnotationKinds{}); empty > 0) t.row({std::to_string(empty), "", "", ""});
  t.separator();
  t.row({"Total (" + std::to_string(c.total) + ")", "", "", ""});
  std::string out = t.render("Annotation types");
  out += "Highlighted text annotations: " + std::to_string(c.highlighted()) + "\n";
  out += "Parse errors: " + std::to_string(parse_errors) + "\n";
  return out;
}

std::string census_to_json(const TypeCensus& c, std::size_t parse_errors) {
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < c.counts.size(); ++i) {
    auto k = AnnotationKinds::from_index(i);
    rows.push_back({{"highlight", k.highlight}, {"note", k.note}, {"tags", k.tags}, {"count", c.counts[i]}});
  }
  ordered_json j{{"total", c.total}, {"highlighted", c.highlighted()}, {"parse_errors", parse_errors},
                 {"combinations", rows}};
  return j.dump(2) + "\n";
}

}  // namespace annoaudit
