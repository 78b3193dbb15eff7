#include "annoaudit/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <cstdlib>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

namespace annoaudit {

namespace {

constexpr std::array<std::string_view, 44> kBlockTags = {
    "address", "article", "aside",  "blockquote", "body",   "br",     "caption", "dd",
    "details", "div",     "dl",     "dt",         "fieldset", "figcaption", "figure", "footer",
    "form",    "h1",      "h2",     "h3",         "h4",     "h5",     "h6",      "head",
    "header",  "hr",      "html",   "li",         "main",   "nav",    "ol",      "option",
    "p",       "pre",     "section", "summary",   "table",  "td",     "th",      "title",
    "tr",      "ul",      "tbody",  "thead"};

bool is_block_tag(std::string_view name) {
  return std::find(kBlockTags.begin(), kBlockTags.end(), name) != kBlockTags.end();
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Case-insensitive search for an ASCII needle.
std::size_t ifind(std::string_view hay, std::string_view needle, std::size_t from) {
  if (needle.size() > hay.size()) return std::string_view::npos;
  for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
    bool eq = true;
    for (std::size_t k = 0; k < needle.size(); ++k) {
      if (std::tolower(static_cast<unsigned char>(hay[i + k])) != needle[k]) {
        eq = false;
        break;
      }
    }
    if (eq) return i;
  }
  return std::string_view::npos;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF) || cp == 0) cp = 0xFFFD;
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Finds the '>' closing a tag that starts at `lt`, skipping quoted values.
std::size_t tag_end(std::string_view html, std::size_t lt) {
  char quote = 0;
  for (std::size_t i = lt + 1; i < html.size(); ++i) {
    char c = html[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '>') {
      return i;
    }
  }
  return std::string_view::npos;
}

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || !n) std::abort();
  return *n;
}

icu::UnicodeString to_nfc(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  auto out = nfc().normalize(s, status);
  return U_FAILURE(status) ? s : out;
}

bool valid_utf8(std::string_view s) {
  const auto* p = reinterpret_cast<const uint8_t*>(s.data());
  int32_t i = 0, n = static_cast<int32_t>(s.size());
  while (i < n) {
    UChar32 c;
    U8_NEXT(p, i, n, c);
    if (c < 0) return false;
  }
  return true;
}

std::string sniff_media_type(std::string_view body) {
  if (body.starts_with("%PDF-")) return "application/pdf";
  return "text/html";
}

}  // namespace

std::string_view to_string(Caveat c) {
  switch (c) {
    case Caveat::LossyDecode:
      return "lossy_decode";
    case Caveat::ExternalExtractor:
      return "external_extractor";
    case Caveat::RendererPass:
      return "renderer_pass";
    case Caveat::ExtractionUnavailable:
      return "extraction_unavailable";
  }
  return "unknown";
}

std::string normalize_string(std::string_view utf8) {
  auto src = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  auto composed = to_nfc(src);

  icu::UnicodeString collapsed;
  bool pending_space = false;
  for (int32_t i = 0; i < composed.length();) {
    UChar32 c = composed.char32At(i);
    i += U16_LENGTH(c);
    if (u_isUWhiteSpace(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space && !collapsed.isEmpty()) collapsed.append(static_cast<UChar>(0x20));
    pending_space = false;
    collapsed.append(c);
  }
  // Removing leading white space can leave a combining mark in front; compose
  // once more so the result is a fixed point.
  UErrorCode status = U_ZERO_ERROR;
  if (!nfc().isNormalized(collapsed, status)) collapsed = to_nfc(collapsed);

  std::string out;
  collapsed.toUTF8String(out);
  return out;
}

NormalizedText normalize(std::string_view utf8) {
  NormalizedText t;
  t.text = normalize_string(utf8);
  t.source_media_type = "text/plain";
  return t;
}

std::string decode_to_utf8(std::string_view bytes, std::string_view charset, bool& lossy) {
  lossy = false;
  auto cs = ascii_lower(charset);
  if (cs.empty() || cs == "utf-8" || cs == "utf8" || cs == "us-ascii" || cs == "ascii") {
    if (valid_utf8(bytes)) return std::string(bytes);
    lossy = true;
    std::string out;
    const auto* p = reinterpret_cast<const uint8_t*>(bytes.data());
    int32_t i = 0, n = static_cast<int32_t>(bytes.size());
    while (i < n) {
      UChar32 c;
      U8_NEXT(p, i, n, c);
      append_utf8(out, c < 0 ? 0xFFFD : static_cast<char32_t>(c));
    }
    return out;
  }
  icu::UnicodeString u(bytes.data(), static_cast<int32_t>(bytes.size()), cs.c_str());
  if (u.isBogus()) {
    // Unknown charset: fall back to UTF-8.
    return decode_to_utf8(bytes, "utf-8", lossy);
  }
  if (u.indexOf(static_cast<UChar>(0xFFFD)) >= 0) lossy = true;
  std::string out;
  u.toUTF8String(out);
  return out;
}

std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c != '&') {
      out += c;
      ++i;
      continue;
    }
    auto semi = text.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 40) {
      out += c;
      ++i;
      continue;
    }
    auto ref = text.substr(i + 1, semi - i - 1);
    std::optional<char32_t> cp;
    if (ref.size() >= 2 && ref[0] == '#') {
      bool hex = ref[1] == 'x' || ref[1] == 'X';
      auto digits = ref.substr(hex ? 2 : 1);
      if (!digits.empty() && digits.size() <= 8 &&
          std::all_of(digits.begin(), digits.end(), [hex](char d) {
            return hex ? std::isxdigit(static_cast<unsigned char>(d)) != 0
                       : std::isdigit(static_cast<unsigned char>(d)) != 0;
          }))
        cp = static_cast<char32_t>(std::stoul(std::string(digits), nullptr, hex ? 16 : 10));
    } else {
      cp = lookup_entity(ref);
    }
    if (!cp) {
      out += c;
      ++i;
      continue;
    }
    append_utf8(out, *cp);
    i = semi + 1;
  }
  return out;
}

std::string strip_html(std::string_view html) {
  std::string text;
  text.reserve(html.size() / 2);
  std::size_t i = 0;
  auto flush_text = [&](std::size_t from, std::size_t to) {
    text += decode_entities(html.substr(from, to - from));
  };

  std::size_t run = 0;
  while (i < html.size()) {
    if (html[i] != '<') {
      ++i;
      continue;
    }
    std::size_t lt = i;
    char next = lt + 1 < html.size() ? html[lt + 1] : '\0';
    bool closing = next == '/';
    char name_start = closing && lt + 2 < html.size() ? html[lt + 2] : next;

    if (html.substr(lt).starts_with("<!--")) {
      flush_text(run, lt);
      auto end = html.find("-->", lt + 4);
      i = run = end == std::string_view::npos ? html.size() : end + 3;
      continue;
    }
    if (next == '!' || next == '?') {
      flush_text(run, lt);
      auto end = html.find('>', lt);
      i = run = end == std::string_view::npos ? html.size() : end + 1;
      continue;
    }
    if (!std::isalpha(static_cast<unsigned char>(name_start))) {
      ++i;  // a literal '<'
      continue;
    }

    flush_text(run, lt);
    std::size_t name_begin = lt + (closing ? 2 : 1);
    std::size_t name_end = name_begin;
    while (name_end < html.size() && std::isalnum(static_cast<unsigned char>(html[name_end])))
      ++name_end;
    auto name = ascii_lower(html.substr(name_begin, name_end - name_begin));
    auto end = tag_end(html, lt);
    if (end == std::string_view::npos) {
      i = run = html.size();
      break;
    }
    i = run = end + 1;

    if (!closing && (name == "script" || name == "style")) {
      auto close = ifind(html, "</" + name, i);
      if (close == std::string_view::npos) {
        i = run = html.size();
        break;
      }
      auto close_end = tag_end(html, close);
      i = run = close_end == std::string_view::npos ? html.size() : close_end + 1;
      continue;
    }
    if (is_block_tag(name)) text += ' ';
  }
  flush_text(run, html.size());
  return text;
}

bool is_html_media_type(std::string_view media_type) {
  return media_type == "text/html" || media_type == "application/xhtml+xml";
}

NormalizedText extract_text(std::string_view body, std::string_view media_type,
                            const ExtractorRegistry& extractors, std::string_view charset) {
  std::string type = media_type.empty() ? sniff_media_type(body) : ascii_lower(media_type);

  NormalizedText out;
  out.source_media_type = type;
  bool lossy = false;

  if (const Extractor* custom = extractors.find(type)) {
    auto raw = (*custom)(body);
    if (!raw) throw ExtractionUnavailable("extractor failed for " + type);
    auto utf8 = decode_to_utf8(*raw, "utf-8", lossy);
    out.text = normalize_string(is_html_media_type(type) ? strip_html(utf8) : utf8);
    out.caveats = out.caveats | Caveat::ExternalExtractor;
  } else if (is_html_media_type(type)) {
    out.text = normalize_string(strip_html(decode_to_utf8(body, charset, lossy)));
  } else if (type == "text/plain") {
    out.text = normalize_string(decode_to_utf8(body, charset, lossy));
  } else {
    throw ExtractionUnavailable("no extractor registered for " + type);
  }
  if (lossy) out.caveats = out.caveats | Caveat::LossyDecode;
  return out;
}

AttachmentCheck quote_attached(const NormalizedText& page, std::string_view exact) {
  auto needle = normalize_string(exact);
  if (needle.empty()) throw std::invalid_argument("quote is empty after normalization");
  AttachmentCheck check;
  check.caveats = page.caveats;
  auto pos = page.text.find(needle);
  if (pos != std::string::npos) {
    check.attached = true;
    check.match_offset = utf8_length(std::string_view(page.text).substr(0, pos));
  }
  return check;
}

std::size_t utf8_length(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

}  // namespace annoaudit
