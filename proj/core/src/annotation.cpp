#include "annoaudit/annotation.hpp"

#include <istream>

#include <json.hpp>

namespace annoaudit {

namespace {

using nlohmann::json;

std::optional<std::string> string_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

bool has_text(const std::optional<std::string>& s) {
  if (!s) return false;
  return s->find_first_not_of(" \t\r\n") != std::string::npos;
}

struct QuoteHit {
  std::string source;
  const json* selector = nullptr;
};

// Targets may be a single object or an array; selectors likewise.
template <typename F>
void for_each_item(const json& node, F&& f) {
  if (node.is_array()) {
    for (const auto& item : node)
      if (f(item)) return;
  } else if (node.is_object()) {
    f(node);
  }
}

std::optional<QuoteHit> find_quote(const json& doc) {
  auto targets = doc.find("target");
  if (targets == doc.end()) return std::nullopt;

  std::optional<QuoteHit> hit;
  for_each_item(*targets, [&](const json& target) {
    if (!target.is_object()) return false;
    auto selectors = target.find("selector");
    if (selectors == target.end()) return false;
    const json* found = nullptr;
    for_each_item(*selectors, [&](const json& sel) {
      if (!sel.is_object()) return false;
      if (string_field(sel, "type") != "TextQuoteSelector") return false;
      auto exact = string_field(sel, "exact");
      if (!exact || exact->empty()) return false;
      found = &sel;
      return true;
    });
    if (!found) return false;
    auto source = string_field(target, "source");
    if (!source) source = string_field(doc, "uri");
    hit = QuoteHit{source.value_or(""), found};
    return true;
  });
  return hit;
}

}  // namespace

std::string_view to_string(SkipReason r) {
  switch (r) {
    case SkipReason::NoHighlight:
      return "no_highlight";
    case SkipReason::BadTimestamp:
      return "bad_timestamp";
  }
  return "unknown";
}

AnnotationKinds kinds_of(const ParsedAnnotation& p) {
  return std::visit([](const auto& v) { return v.kinds; }, p);
}

ParsedAnnotation parse_annotation(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte, e.what());
  }
  if (!doc.is_object()) throw ParseError(0, "annotation document is not a JSON object");

  auto id = string_field(doc, "id").value_or("");
  auto note = string_field(doc, "text");

  std::vector<std::string> tags;
  if (auto t = doc.find("tags"); t != doc.end() && t->is_array())
    for (const auto& tag : *t)
      if (tag.is_string()) tags.push_back(tag.get<std::string>());

  auto quote = find_quote(doc);
  AnnotationKinds kinds{quote.has_value(), has_text(note), !tags.empty()};
  if (!quote) return Skipped{SkipReason::NoHighlight, id, kinds};

  std::optional<std::string> stamp_text;
  if (doc.contains("updated"))
    stamp_text = string_field(doc, "updated");
  else
    stamp_text = string_field(doc, "created");
  std::optional<Timestamp> stamp;
  if (stamp_text) stamp = parse_iso8601(*stamp_text);
  if (!stamp) return Skipped{SkipReason::BadTimestamp, id, kinds};

  AnnotationRecord rec;
  rec.id = std::move(id);
  rec.target_uri = std::move(quote->source);
  rec.exact = quote->selector->at("exact").get<std::string>();
  rec.prefix = string_field(*quote->selector, "prefix");
  rec.suffix = string_field(*quote->selector, "suffix");
  rec.created_at = *stamp;
  rec.body_text = std::move(note);
  rec.tags = std::move(tags);
  rec.kinds = kinds;
  return rec;
}

std::size_t TypeCensus::highlighted() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (AnnotationKinds::from_index(i).highlight) n += counts[i];
  return n;
}

TypeCensus census(std::span<const ParsedAnnotation> records) {
  TypeCensus c;
  for (const auto& r : records) c.add(kinds_of(r));
  return c;
}

std::vector<AnnotationRecord> filter_highlighted(std::span<const ParsedAnnotation> records) {
  std::vector<AnnotationRecord> out;
  for (const auto& r : records)
    if (const auto* rec = std::get_if<AnnotationRecord>(&r); rec && rec->kinds.highlight)
      out.push_back(*rec);
  return out;
}

std::vector<LineError> read_annotations(std::istream& in,
                                        const std::function<void(ParsedAnnotation&&)>& sink) {
  std::vector<LineError> errors;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      sink(parse_annotation(line));
    } catch (const ParseError& e) {
      errors.push_back({lineno, e.byte_offset(), e.what()});
    }
  }
  return errors;
}

Corpus read_corpus(std::istream& in) {
  Corpus c;
  c.errors = read_annotations(in, [&](ParsedAnnotation&& p) { c.documents.push_back(std::move(p)); });
  return c;
}

}  // namespace annoaudit
