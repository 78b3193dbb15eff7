#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace annoaudit {

/// Per-check notes about known false-negative sources.
enum class Caveat : std::uint8_t {
  LossyDecode = 1,           // bytes were not valid in the declared charset
  ExternalExtractor = 2,     // text came from an external command (e.g. PDF)
  RendererPass = 4,          // the plain fetch missed and a renderer re-fetch was used
  ExtractionUnavailable = 8  // no extractor for the media type; treated as not attached
};

using CaveatSet = std::uint8_t;

inline CaveatSet operator|(CaveatSet s, Caveat c) { return static_cast<CaveatSet>(s | static_cast<std::uint8_t>(c)); }
inline bool has_caveat(CaveatSet s, Caveat c) { return (s & static_cast<std::uint8_t>(c)) != 0; }

std::string_view to_string(Caveat c);

/// Text with markup removed, NFC-composed, whitespace runs collapsed to one
/// space and trimmed.
struct NormalizedText {
  std::string text;
  std::string source_media_type;
  CaveatSet caveats = 0;
};

/// NFC, collapse every run of Unicode white space to U+0020, trim. Case is
/// kept. Invalid UTF-8 sequences become U+FFFD.
std::string normalize_string(std::string_view utf8);

NormalizedText normalize(std::string_view utf8);

/// Converts `bytes` in `charset` (empty means UTF-8) to UTF-8. Sets `lossy`
/// when replacement characters had to be substituted.
std::string decode_to_utf8(std::string_view bytes, std::string_view charset, bool& lossy);

/// Drops comments, script and style content, and tags; decodes character
/// references. Block-level tags become a space, inline tags vanish. The
/// result is not yet normalized.
std::string strip_html(std::string_view html);

/// Decodes "&name;", "&#n;" and "&#xh;". Unknown or unterminated references
/// are left as written.
std::string decode_entities(std::string_view text);

/// Looks up a named character reference (without '&' and ';').
std::optional<char32_t> lookup_entity(std::string_view name);

class ExtractionUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Turns raw bytes into UTF-8 text. Returns nullopt when extraction fails.
using Extractor = std::function<std::optional<std::string>(std::string_view body)>;

/// Media type to extractor. HTML, XHTML and plain text are built in; other
/// types (PDF in practice) are added at startup and the registry is only
/// read afterwards.
class ExtractorRegistry {
 public:
  ExtractorRegistry() = default;

  void add(std::string media_type, Extractor extractor);

  /// Registers a shell command that reads the body on stdin and writes UTF-8
  /// text on stdout, e.g. "pdftotext -q - -".
  void add_command(std::string media_type, std::string command);

  const Extractor* find(std::string_view media_type) const;

  bool empty() const { return extractors_.empty(); }

 private:
  std::map<std::string, Extractor, std::less<>> extractors_;
};

/// Runs `command` through /bin/sh with `input` on stdin and returns stdout,
/// or nullopt when the command cannot be started or exits non-zero.
std::optional<std::string> run_filter_command(const std::string& command, std::string_view input);

bool is_html_media_type(std::string_view media_type);

/// Extracts normalized text from a 200 response body. An empty media type is
/// sniffed. Throws ExtractionUnavailable when no extractor handles the type
/// or the registered extractor fails.
NormalizedText extract_text(std::string_view body, std::string_view media_type,
                            const ExtractorRegistry& extractors, std::string_view charset = {});

struct AttachmentCheck {
  bool attached = false;
  /// Code-point index of the first match in the normalized page text.
  std::optional<std::size_t> match_offset;
  CaveatSet caveats = 0;
  /// URI-M of the memento checked; nullopt for the live page.
  std::optional<std::string> memento;
};

/// Exact, case-sensitive substring test of the normalized quote against the
/// normalized page. Throws std::invalid_argument for a quote that normalizes
/// to nothing.
AttachmentCheck quote_attached(const NormalizedText& page, std::string_view exact);

/// Number of code points in valid UTF-8.
std::size_t utf8_length(std::string_view s);

}  // namespace annoaudit
