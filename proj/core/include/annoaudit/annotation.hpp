#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "annoaudit/time.hpp"

namespace annoaudit {

/// Which kinds of content an annotation carries.
struct AnnotationKinds {
  bool highlight = false;
  bool note = false;
  bool tags = false;

  /// Dense index in [0, 8): highlight is bit 2, note bit 1, tags bit 0.
  std::size_t index() const { return (highlight ? 4u : 0u) | (note ? 2u : 0u) | (tags ? 1u : 0u); }
  static AnnotationKinds from_index(std::size_t i) { return {(i & 4u) != 0, (i & 2u) != 0, (i & 1u) != 0}; }
  friend bool operator==(const AnnotationKinds&, const AnnotationKinds&) = default;
};

/// One highlighted-text annotation admitted to the audit.
struct AnnotationRecord {
  std::string id;
  std::string target_uri;  // verbatim "source"
  std::string exact;
  std::optional<std::string> prefix;
  std::optional<std::string> suffix;
  Timestamp created_at{};
  std::optional<std::string> body_text;
  std::vector<std::string> tags;
  AnnotationKinds kinds;

  friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) = default;
};

enum class SkipReason { NoHighlight, BadTimestamp };

std::string_view to_string(SkipReason r);

/// A well-formed document that is not auditable. The kinds are kept so the
/// census still sees it.
struct Skipped {
  SkipReason reason;
  std::string id;
  AnnotationKinds kinds;

  friend bool operator==(const Skipped&, const Skipped&) = default;
};

using ParsedAnnotation = std::variant<AnnotationRecord, Skipped>;

AnnotationKinds kinds_of(const ParsedAnnotation& p);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t byte_offset, const std::string& what)
      : std::runtime_error(what), byte_offset_(byte_offset) {}
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

/// Parses one annotation document in the Hypothes.is API shape. The first
/// target carrying a TextQuoteSelector with a non-empty "exact" supplies the
/// quote and the target URI. The creation instant comes from "updated",
/// falling back to "created" only when "updated" is absent.
///
/// Throws ParseError when the bytes are not a JSON object.
ParsedAnnotation parse_annotation(std::string_view document);

struct TypeCensus {
  std::array<std::size_t, 8> counts{};
  std::size_t total = 0;

  std::size_t count(AnnotationKinds k) const { return counts[k.index()]; }
  std::size_t highlighted() const;
  void add(AnnotationKinds k) {
    ++counts[k.index()];
    ++total;
  }
};

TypeCensus census(std::span<const ParsedAnnotation> records);

/// Records with a highlight, in input order.
std::vector<AnnotationRecord> filter_highlighted(std::span<const ParsedAnnotation> records);

struct LineError {
  std::size_t line = 0;  // 1-based
  std::size_t byte_offset = 0;
  std::string message;
};

/// Reads newline-delimited documents, calling `sink` for every parsed one.
/// Blank lines are ignored; malformed lines are reported and skipped.
std::vector<LineError> read_annotations(std::istream& in,
                                        const std::function<void(ParsedAnnotation&&)>& sink);

struct Corpus {
  std::vector<ParsedAnnotation> documents;
  std::vector<LineError> errors;
};

Corpus read_corpus(std::istream& in);

}  // namespace annoaudit
