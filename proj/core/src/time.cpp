#include "annoaudit/time.hpp"

#include <array>
#include <cctype>
#include <cstdio>

namespace annoaudit {

namespace {

using namespace std::chrono;

constexpr std::array<std::string_view, 7> kWeekdays = {"Sun", "Mon", "Tue", "Wed",
                                                       "Thu", "Fri", "Sat"};
constexpr std::array<std::string_view, 12> kMonths = {"Jan", "Feb", "Mar", "Apr",
                                                      "May", "Jun", "Jul", "Aug",
                                                      "Sep", "Oct", "Nov", "Dec"};

// Reads exactly `width` decimal digits at `pos`.
bool read_fixed(std::string_view s, std::size_t& pos, std::size_t width, int& out) {
  if (pos + width > s.size()) return false;
  int v = 0;
  for (std::size_t i = 0; i < width; ++i) {
    char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  pos += width;
  out = v;
  return true;
}

bool expect(std::string_view s, std::size_t& pos, char c) {
  if (pos >= s.size() || s[pos] != c) return false;
  ++pos;
  return true;
}

std::optional<sys_seconds> make_instant(int y, int mo, int d, int h, int mi, int sec) {
  if (mo < 1 || mo > 12 || h > 23 || mi > 59 || sec > 60) return std::nullopt;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                     day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  // Leap seconds collapse onto :59 plus one second.
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec};
}

struct Civil {
  int year;
  unsigned month, day, hour, minute, second;
  unsigned weekday;
};

Civil to_civil(sys_seconds t) {
  auto dp = floor<days>(t);
  year_month_day ymd{dp};
  hh_mm_ss hms{t - dp};
  return Civil{static_cast<int>(ymd.year()),
               static_cast<unsigned>(ymd.month()),
               static_cast<unsigned>(ymd.day()),
               static_cast<unsigned>(hms.hours().count()),
               static_cast<unsigned>(hms.minutes().count()),
               static_cast<unsigned>(hms.seconds().count()),
               weekday{dp}.c_encoding()};
}

}  // namespace

std::optional<Timestamp> parse_iso8601(std::string_view s) {
  std::size_t pos = 0;
  int y, mo, d, h, mi, sec;
  if (!read_fixed(s, pos, 4, y) || !expect(s, pos, '-') || !read_fixed(s, pos, 2, mo) ||
      !expect(s, pos, '-') || !read_fixed(s, pos, 2, d))
    return std::nullopt;
  if (pos >= s.size() || (s[pos] != 'T' && s[pos] != 't' && s[pos] != ' '))
    return std::nullopt;
  ++pos;
  if (!read_fixed(s, pos, 2, h) || !expect(s, pos, ':') || !read_fixed(s, pos, 2, mi) ||
      !expect(s, pos, ':') || !read_fixed(s, pos, 2, sec))
    return std::nullopt;

  long micros = 0;
  if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
    ++pos;
    std::size_t digits = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      if (digits < 6) micros = micros * 10 + (s[pos] - '0');
      ++digits;
      ++pos;
    }
    if (digits == 0) return std::nullopt;
    for (std::size_t i = digits; i < 6; ++i) micros *= 10;
  }

  minutes offset{0};
  if (pos >= s.size()) return std::nullopt;
  if (s[pos] == 'Z' || s[pos] == 'z') {
    ++pos;
  } else if (s[pos] == '+' || s[pos] == '-') {
    int sign = s[pos] == '-' ? -1 : 1;
    ++pos;
    int oh, om;
    if (!read_fixed(s, pos, 2, oh)) return std::nullopt;
    if (pos < s.size() && s[pos] == ':') ++pos;
    if (!read_fixed(s, pos, 2, om) || oh > 23 || om > 59) return std::nullopt;
    offset = minutes{sign * (oh * 60 + om)};
  } else {
    return std::nullopt;
  }
  if (pos != s.size()) return std::nullopt;

  auto base = make_instant(y, mo, d, h, mi, sec);
  if (!base) return std::nullopt;
  return Timestamp{time_point_cast<microseconds>(*base - offset) + microseconds{micros}};
}

std::string format_iso8601(Timestamp t) {
  auto secs = floor<seconds>(t);
  auto c = to_civil(secs);
  auto frac = (t - secs).count();
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02u:%02u:%02u.%06ldZ", c.year, c.month,
                c.day, c.hour, c.minute, c.second, static_cast<long>(frac));
  return buf;
}

std::string format_iso8601(SecondStamp t) {
  auto c = to_civil(t);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02u:%02u:%02uZ", c.year, c.month, c.day,
                c.hour, c.minute, c.second);
  return buf;
}

std::optional<SecondStamp> parse_rfc1123(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);

  std::size_t pos = 0;
  if (s.size() >= 4 && std::isalpha(static_cast<unsigned char>(s[0]))) {
    auto comma = s.find(',');
    if (comma == std::string_view::npos || comma > 9) return std::nullopt;
    pos = comma + 1;
    while (pos < s.size() && s[pos] == ' ') ++pos;
  }

  int d = 0;
  std::size_t start = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])) &&
         pos - start < 2) {
    d = d * 10 + (s[pos] - '0');
    ++pos;
  }
  if (pos == start || !expect(s, pos, ' ')) return std::nullopt;

  if (pos + 3 > s.size()) return std::nullopt;
  auto mon_text = s.substr(pos, 3);
  int mo = 0;
  for (std::size_t i = 0; i < kMonths.size(); ++i) {
    auto m = kMonths[i];
    bool eq = true;
    for (std::size_t k = 0; k < 3; ++k)
      if (std::tolower(static_cast<unsigned char>(m[k])) !=
          std::tolower(static_cast<unsigned char>(mon_text[k])))
        eq = false;
    if (eq) mo = static_cast<int>(i) + 1;
  }
  if (mo == 0) return std::nullopt;
  pos += 3;

  int y, h, mi, sec;
  if (!expect(s, pos, ' ') || !read_fixed(s, pos, 4, y) || !expect(s, pos, ' ') ||
      !read_fixed(s, pos, 2, h) || !expect(s, pos, ':') || !read_fixed(s, pos, 2, mi) ||
      !expect(s, pos, ':') || !read_fixed(s, pos, 2, sec))
    return std::nullopt;
  auto zone = s.substr(pos);
  while (!zone.empty() && zone.front() == ' ') zone.remove_prefix(1);
  if (zone != "GMT" && zone != "UTC" && zone != "+0000" && zone != "Z") return std::nullopt;
  return make_instant(y, mo, d, h, mi, sec);
}

std::string format_rfc1123(SecondStamp t) {
  auto c = to_civil(t);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%s, %02u %s %04d %02u:%02u:%02u GMT",
                kWeekdays[c.weekday].data(), c.day, kMonths[c.month - 1].data(), c.year,
                c.hour, c.minute, c.second);
  return buf;
}

std::string format_compact(SecondStamp t) {
  auto c = to_civil(t);
  char buf[24];
  std::snprintf(buf, sizeof buf, "%04d%02u%02u%02u%02u%02u", c.year, c.month, c.day, c.hour,
                c.minute, c.second);
  return buf;
}

std::optional<SecondStamp> parse_compact(std::string_view s) {
  if (s.size() != 14) return std::nullopt;
  std::size_t pos = 0;
  int y, mo, d, h, mi, sec;
  if (!read_fixed(s, pos, 4, y) || !read_fixed(s, pos, 2, mo) || !read_fixed(s, pos, 2, d) ||
      !read_fixed(s, pos, 2, h) || !read_fixed(s, pos, 2, mi) || !read_fixed(s, pos, 2, sec))
    return std::nullopt;
  return make_instant(y, mo, d, h, mi, sec);
}

}  // namespace annoaudit
