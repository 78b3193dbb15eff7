#include "annoaudit/uri.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace annoaudit {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_scheme_char(char c, bool first) {
  if (std::isalpha(static_cast<unsigned char>(c))) return true;
  if (first) return false;
  return std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
}

bool forbidden(unsigned char c) { return c <= 0x20 || c == 0x7f || c == '"' || c == '<' || c == '>'; }

// RFC 3986 section 5.2.4.
std::string remove_dot_segments(std::string_view path) {
  std::vector<std::string_view> out;
  bool absolute = !path.empty() && path.front() == '/';
  std::size_t pos = absolute ? 1 : 0;
  bool trailing_slash = false;
  while (pos <= path.size()) {
    auto next = path.find('/', pos);
    auto seg = path.substr(pos, next == std::string_view::npos ? std::string_view::npos
                                                               : next - pos);
    trailing_slash = false;
    if (seg == "..") {
      if (!out.empty()) out.pop_back();
      trailing_slash = true;
    } else if (seg == ".") {
      trailing_slash = true;
    } else {
      out.push_back(seg);
    }
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  std::string result = absolute ? "/" : "";
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i) result += '/';
    result += out[i];
  }
  if (trailing_slash && !result.empty() && result.back() != '/') result += '/';
  return result;
}

}  // namespace

std::string Uri::target() const {
  std::string t = path.empty() ? "/" : path;
  if (!query.empty()) t += "?" + query;
  return t;
}

int Uri::effective_port() const {
  if (port) return *port;
  return scheme == "https" ? 443 : 80;
}

std::string Uri::origin() const {
  std::string o = scheme + "://";
  o += host.find(':') != std::string::npos ? "[" + host + "]" : host;
  if (port) o += ":" + std::to_string(*port);
  return o;
}

std::string Uri::str() const {
  std::string s;
  if (has_authority) {
    s = origin() + path;
  } else {
    s = scheme + ":" + path;
  }
  if (!query.empty()) s += "?" + query;
  if (!fragment.empty()) s += "#" + fragment;
  return s;
}

std::optional<Uri> parse_uri(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (std::any_of(text.begin(), text.end(), [](char c) { return forbidden(static_cast<unsigned char>(c)); }))
    return std::nullopt;

  auto colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0) return std::nullopt;
  for (std::size_t i = 0; i < colon; ++i)
    if (!is_scheme_char(text[i], i == 0)) return std::nullopt;

  Uri uri;
  uri.scheme = lower(text.substr(0, colon));
  auto rest = text.substr(colon + 1);

  if (auto hash = rest.find('#'); hash != std::string_view::npos) {
    uri.fragment = std::string(rest.substr(hash + 1));
    rest = rest.substr(0, hash);
  }
  if (auto q = rest.find('?'); q != std::string_view::npos) {
    uri.query = std::string(rest.substr(q + 1));
    rest = rest.substr(0, q);
  }

  if (rest.starts_with("//")) {
    uri.has_authority = true;
    rest.remove_prefix(2);
    auto slash = rest.find('/');
    auto authority = rest.substr(0, slash);
    uri.path = slash == std::string_view::npos ? "" : std::string(rest.substr(slash));

    if (auto at = authority.rfind('@'); at != std::string_view::npos)
      authority = authority.substr(at + 1);

    std::string_view host = authority;
    std::string_view port;
    if (authority.starts_with("[")) {
      auto close = authority.find(']');
      if (close == std::string_view::npos) return std::nullopt;
      host = authority.substr(1, close - 1);
      auto after = authority.substr(close + 1);
      if (!after.empty()) {
        if (after.front() != ':') return std::nullopt;
        port = after.substr(1);
      }
    } else if (auto pc = authority.rfind(':'); pc != std::string_view::npos) {
      host = authority.substr(0, pc);
      port = authority.substr(pc + 1);
    }
    if (host.empty() && (uri.scheme == "http" || uri.scheme == "https")) return std::nullopt;
    uri.host = lower(host);
    if (!port.empty()) {
      if (port.size() > 5 ||
          !std::all_of(port.begin(), port.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        return std::nullopt;
      int p = std::stoi(std::string(port));
      if (p > 65535) return std::nullopt;
      uri.port = p;
    }
  } else {
    uri.path = std::string(rest);
    if (uri.path.empty()) return std::nullopt;
  }
  return uri;
}

std::optional<std::string> resolve_reference(const Uri& base, std::string_view ref) {
  if (auto abs = parse_uri(ref)) {
    abs->path = remove_dot_segments(abs->path);
    return abs->str();
  }
  if (ref.empty()) return base.str();

  Uri out = base;
  out.fragment.clear();
  std::string_view r = ref;
  if (auto hash = r.find('#'); hash != std::string_view::npos) {
    out.fragment = std::string(r.substr(hash + 1));
    r = r.substr(0, hash);
  }
  std::string query;
  bool has_query = false;
  if (auto q = r.find('?'); q != std::string_view::npos) {
    query = std::string(r.substr(q + 1));
    has_query = true;
    r = r.substr(0, q);
  }

  if (r.starts_with("//")) {
    auto full = parse_uri(base.scheme + ":" + std::string(ref));
    if (!full) return std::nullopt;
    return full->str();
  }
  if (r.empty()) {
    if (has_query) out.query = query;
  } else if (r.front() == '/') {
    out.path = remove_dot_segments(r);
    out.query = query;
  } else {
    std::string merged;
    if (base.has_authority && base.path.empty()) {
      merged = "/" + std::string(r);
    } else {
      auto last = base.path.rfind('/');
      merged = (last == std::string::npos ? "" : base.path.substr(0, last + 1)) + std::string(r);
    }
    out.path = remove_dot_segments(merged);
    out.query = query;
  }
  return out.str();
}

std::string percent_encode_uri_component(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(text.size());
  for (unsigned char c : text) {
    bool keep = std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~' || c == ':' ||
                c == '/' || c == '@' || c == '!' || c == '$' || c == '\'' || c == '(' ||
                c == ')' || c == '*' || c == ',' || c == ';' || c == '=' || c == '+' ||
                c == '&' || c == '%';
    if (keep) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xf];
    }
  }
  return out;
}

}  // namespace annoaudit
