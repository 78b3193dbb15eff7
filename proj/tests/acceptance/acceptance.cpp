// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <annoaudit/annotation.hpp>
#include <annoaudit/audit.hpp>
#include <annoaudit/fixture/generator.hpp>
#include <annoaudit/fixture/server.hpp>
#include <annoaudit/memento.hpp>
#include <annoaudit/pipeline.hpp>
#include <annoaudit/probe.hpp>
#include <annoaudit/text.hpp>

#include "support.hpp"

using namespace annoaudit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(const std::string& name, double limit_s, const std::function<Outcome()>& body) {
  auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool in_time = secs < limit_s;
  bool pass = out.ok && in_time;
  if (!pass) ++failures;
  char timing[64];
  std::snprintf(timing, sizeof timing, "%.3fs < %.0fs", secs, limit_s);
  std::cout << (pass ? "PASS " : "FAIL ") << name << " [" << timing << (in_time ? "" : " EXCEEDED") << "] "
            << out.detail << std::endl;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

Outcome aggregation_replay() {
  auto s = aggregate(testing::published_table_verdicts());
  auto orphaned = s.count(Category::Orphaned);
  auto danger = s.count(Category::InDanger);
  auto recoverable = s.count(Category::Recoverable);
  auto not_attached = s.live_not_attached;
  std::ostringstream d;
  d << "Orphaned=" << orphaned << " InDanger=" << danger << " Recoverable=" << recoverable
    << " NotAttached=" << not_attached << " (tables: attached=" << s.tables_attached()
    << " not_attached=" << s.tables_not_attached() << ")";
  return {orphaned == 3813 && danger == 8357 && recoverable == 547 && not_attached == 4360 &&
              s.tables_not_attached() == 4360,
          d.str()};
}

Outcome census_replay() {
  struct Row {
    std::size_t n;
    bool h, note, tags;
  };
  const Row rows[] = {{11289, false, true, false}, {9858, true, true, false}, {9252, true, true, true},
                      {1835, true, false, true},   {1356, false, true, true}, {348, false, false, true},
                      {8, true, false, false}};
  std::string corpus;
  std::size_t id = 0;
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.n; ++i)
      corpus += testing::annotation_doc("a" + std::to_string(id++), r.h, r.note, r.tags) + "\n";
  std::istringstream in(corpus);
  auto parsed = read_corpus(in);
  auto c = census(parsed.documents);
  auto highlighted = filter_highlighted(parsed.documents).size();
  bool rows_ok = true;
  for (const auto& r : rows) rows_ok = rows_ok && c.count({r.h, r.note, r.tags}) == r.n;
  std::ostringstream d;
  d << "total=" << c.total << " highlighted=" << c.highlighted() << " filtered=" << highlighted
    << " parse_errors=" << parsed.errors.size();
  return {c.total == 33946 && c.highlighted() == 20953 && highlighted == 20953 && rows_ok && parsed.errors.empty(),
          d.str()};
}

Outcome categorize_exhaustive() {
  using L = LiveAttachment;
  using S = SideAttachment;
  std::size_t combos = 0, consistent = 0;
  for (auto live : kLiveStates)
    for (auto b : kSideStates)
      for (auto a : kSideStates) {
        ++combos;
        auto c = categorize(live, b, a);
        const bool live_yes = live == L::Yes;
        const bool any_yes = b == S::Yes || a == S::Yes;
        const bool any_unknown = b == S::Unknown || a == S::Unknown;
        const bool none_attached = !any_yes && !any_unknown;
        bool ok = c != Category::Excluded;
        ok = ok && ((c == Category::AttachedArchived) == (live_yes && any_yes));
        ok = ok && ((c == Category::InDanger) == (live_yes && none_attached));
        ok = ok && ((c == Category::Recoverable) == (!live_yes && any_yes));
        ok = ok && ((c == Category::Orphaned) == (!live_yes && none_attached));
        ok = ok && ((c == Category::Indeterminate) == (any_unknown && !any_yes));
        ok = ok && categorize(live, b, a) == c;
        if (ok) ++consistent;
      }
  return {combos == 48 && consistent == 48,
          std::to_string(consistent) + "/" + std::to_string(combos) + " combinations consistent"};
}

Outcome nearest_pair_oracle() {
  std::mt19937_64 rng(0x6e656172);
  const std::size_t trials = 10000;
  std::size_t agree = 0, ties_seen = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    TimeMap tm;
    const auto n = rng() % 51;
    const auto spread = 1 + rng() % 40;  // small spreads force duplicates
    for (std::size_t i = 0; i < n; ++i) {
      SecondStamp when{std::chrono::seconds(1400000000 + static_cast<long>(rng() % spread) * 60)};
      tm.mementos.push_back(MementoRef{"m" + std::to_string(i), when, "a" + std::to_string(i % 3)});
    }
    std::stable_sort(tm.mementos.begin(), tm.mementos.end(),
                     [](const MementoRef& x, const MementoRef& y) { return x.memento_datetime < y.memento_datetime; });
    std::int64_t base_us = (1400000000LL - 120 + static_cast<std::int64_t>(rng() % ((spread + 4) * 60))) * 1000000LL;
    if (n > 0 && rng() % 4 == 0)
      base_us = tm.mementos[rng() % n].memento_datetime.time_since_epoch().count() * 1000000LL;
    Timestamp t{std::chrono::microseconds(base_us + static_cast<std::int64_t>(rng() % 1000000))};

    // Linear-scan oracle.
    const auto ts = std::chrono::floor<std::chrono::seconds>(t);
    std::optional<SecondStamp> lo, hi;
    for (const auto& m : tm.mementos) {
      if (m.memento_datetime <= ts && (!lo || m.memento_datetime > *lo)) lo = m.memento_datetime;
      if (m.memento_datetime > ts && (!hi || m.memento_datetime < *hi)) hi = m.memento_datetime;
    }
    std::vector<std::string> want_before, want_after;
    for (const auto& m : tm.mementos) {
      if (lo && m.memento_datetime == *lo) want_before.push_back(m.uri_m);
      if (hi && m.memento_datetime == *hi) want_after.push_back(m.uri_m);
    }
    if (want_before.size() > 1 || want_after.size() > 1) ++ties_seen;

    auto hood = nearest_pair(tm, t);
    std::vector<std::string> got_before, got_after;
    for (const auto& m : hood.before) got_before.push_back(m.uri_m);
    for (const auto& m : hood.after) got_after.push_back(m.uri_m);
    if (got_before == want_before && got_after == want_after) ++agree;
  }
  return {agree == trials, std::to_string(agree) + "/" + std::to_string(trials) + " agree (" +
                               std::to_string(ties_seen) + " with ties)"};
}

RunConfig fixture_run(const fixture::FixtureServer& server, const fs::path& input, const fs::path& out) {
  RunConfig c;
  c.input = input;
  c.out_dir = out;
  c.aggregator_base = fixture::FixtureServer::aggregator_base();
  c.connect_to = std::make_pair(server.host(), server.port());
  c.probe.timeout_s = 0.4;
  c.probe.sleep = [](std::chrono::milliseconds) {};
  c.concurrency = 4;
  return c;
}

Outcome end_to_end() {
  testing::TempDir dir;
  std::size_t manifests = 0, annotations = 0, agree = 0;
  std::map<Category, std::size_t> seen;
  std::string first_mismatch;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    auto m = fixture::generate_manifest(seed);
    fixture::FixtureServer server(m, {"127.0.0.1", 0, std::chrono::milliseconds(2000)});
    server.start();
    auto work = dir.path() / std::to_string(seed);
    fs::create_directories(work);
    write(work / "annotations.jsonl", fixture::annotations_jsonl(m));
    std::ostringstream err;
    auto run = run_audit(fixture_run(server, work / "annotations.jsonl", work / "out"), err);
    server.stop();
    ++manifests;
    if (run.exit_code != kExitOk) {
      if (first_mismatch.empty()) first_mismatch = "seed " + std::to_string(seed) + " exit " + std::to_string(run.exit_code);
      continue;
    }
    // Categories as written to disk, read back through the verdict schema.
    std::ifstream verdicts(work / "out" / "verdicts.jsonl");
    for (const auto& v : read_verdicts(verdicts)) {
      ++annotations;
      ++seen[v.category];
      if (v.category == m.expected_verdicts.at(v.annotation_id))
        ++agree;
      else if (first_mismatch.empty())
        first_mismatch = "seed " + std::to_string(seed) + " " + v.annotation_id + " got " +
                         std::string(to_string(v.category)) + " want " +
                         std::string(to_string(m.expected_verdicts.at(v.annotation_id)));
    }
    if (run.verdicts.size() != m.annotations.size() && first_mismatch.empty())
      first_mismatch = "seed " + std::to_string(seed) + " verdict count";
  }
  std::size_t expected_total = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) expected_total += fixture::generate_manifest(seed).annotations.size();
  std::ostringstream d;
  d << manifests << " manifests, " << agree << "/" << annotations << " annotations agree;";
  for (auto c : kCategories) d << " " << to_string(c) << "=" << seen[c];
  if (!first_mismatch.empty()) d << "; first mismatch: " << first_mismatch;
  return {agree == annotations && annotations == expected_total && first_mismatch.empty(), d.str()};
}

Outcome soft404() {
  using fixture::BehaviorKind;
  auto t0 = truncate_to_seconds(*parse_iso8601("2014-01-01T00:00:00Z"));
  const std::string soft = "http://soft.fixture.test/docs/page";
  const std::string real = "http://real.fixture.test/docs/page";
  const std::string half = "http://half.fixture.test/docs/page";
  const std::string near = "http://near.fixture.test/docs/page";
  ProbeConfig config;
  auto junk = [&](const std::string& uri) {
    return *soft404_probe_uri(uri, soft404_token(uri, config.rng_seed, config.soft404_token_len));
  };
  // "abcde" vs "abcxy": pairs {ab,bc,cd,de} and {ab,bc,cx,xy} share two, 2*2/(4+4) = 0.50.
  const std::string near_a = "the archive holds every page we annotated in the spring of that year";
  const std::string near_b = "the archive holds every page we annotated in the spring of this year";
  fixture::FixtureManifest m;
  auto page = [&](const std::string& uri, const std::string& text) {
    m.pages.push_back({uri, {{t0, "<html><body><p>" + text + "</p></body></html>", "text/html"}}, 0});
  };
  page(soft, "anything");
  m.behaviors[soft] = {BehaviorKind::Soft404, 0, {}};
  page(real, "a real page");
  page(half, "abcde");
  page(junk(half), "abcxy");
  page(near, near_a);
  page(junk(near), near_b);
  fixture::FixtureServer server(m);
  server.start();
  HttpFetcherOptions o;
  o.timeout = std::chrono::milliseconds(2000);
  o.connect_to = std::make_pair(server.host(), server.port());
  HttpFetcher http(o);

  const double thresholds[] = {0.5, 0.93, 0.99};
  auto results = [&](const std::string& uri) {
    std::vector<bool> r;
    for (double t : thresholds) {
      auto c = config;
      c.soft404_threshold = t;
      r.push_back(detect_soft_4xx(uri, http, c));
    }
    return r;
  };
  auto monotone = [](const std::vector<bool>& r) {
    for (std::size_t i = 1; i < r.size(); ++i)
      if (r[i] && !r[i - 1]) return false;
    return true;
  };
  auto rs = results(soft), rr = results(real), rh = results(half), rn = results(near);
  double dice_half = similarity("abcde", "abcxy");
  double dice_near = similarity(near_a, near_b);
  bool at_default = detect_soft_4xx(soft, http, config) && !detect_soft_4xx(real, http, config) &&
                    !detect_soft_4xx(half, http, config);
  bool ok = at_default && dice_half == 0.5 && rs == std::vector<bool>{true, true, true} &&
            rr == std::vector<bool>{false, false, false} && rh == std::vector<bool>{true, false, false} &&
            monotone(rs) && monotone(rr) && monotone(rh) && monotone(rn) && rn[0];
  auto fmt = [](const std::vector<bool>& r) {
    std::string s;
    for (bool b : r) s += b ? 'T' : 'F';
    return s;
  };
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "t={0.5,0.93,0.99}: soft=%s real=%s dice0.50=%s near(%.4f)=%s; default threshold soft/real/half ok=%d",
                fmt(rs).c_str(), fmt(rr).c_str(), fmt(rh).c_str(), dice_near, fmt(rn).c_str(), at_default);
  return {ok, buf};
}

Outcome similarity_values() {
  bool self = true;
  for (const char* s : {"a", "night", "Scientific feedback for Climate Change information online", "日本語テキスト"})
    self = self && similarity(s, s) == 1.0;
  double night = similarity("night", "nacht");
  double disjoint = similarity("abcd", "wxyz");
  char buf[128];
  std::snprintf(buf, sizeof buf, "self=%d night/nacht=%.17g abcd/wxyz=%.17g", self, night, disjoint);
  return {self && night == 0.25 && disjoint == 0.0, buf};
}

Outcome determinism() {
  testing::TempDir dir;
  auto m = fixture::generate_manifest(2015);
  fixture::FixtureServer server(m, {"127.0.0.1", 0, std::chrono::milliseconds(2000)});
  server.start();
  write(dir.path() / "in.jsonl", fixture::annotations_jsonl(m));
  std::ostringstream err;
  auto warm = fixture_run(server, dir.path() / "in.jsonl", dir.path() / "warm");
  warm.cache_dir = dir.path() / "cache";
  if (run_audit(warm, err).exit_code != kExitOk) return {false, "warm-up run failed: " + err.str()};
  server.stop();

  std::size_t network = 0;
  for (const char* name : {"a", "b"}) {
    auto c = warm;
    c.out_dir = dir.path() / name;
    c.offline = true;
    c.concurrency = name[0] == 'a' ? 1 : 4;
    auto run = run_audit(c, err);
    if (run.exit_code != kExitOk) return {false, std::string("offline run ") + name + " failed"};
    network += run.network_requests;
  }
  bool same = true;
  for (const char* file : {"verdicts.jsonl", "summary.json", "summary.txt"})
    same = same && slurp(dir.path() / "a" / file) == slurp(dir.path() / "b" / file) &&
           !slurp(dir.path() / "a" / file).empty();
  std::ostringstream d;
  d << m.annotations.size() << " annotations, verdicts/summary identical=" << same
    << ", offline network requests=" << network;
  return {same && network == 0, d.str()};
}

std::string random_string(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces = {
      "a",  "B",      "z",  "é",   "é", "ñ", "ñ",   "Å", "Å",  "日", "本", "x y", ".", "-",
      "&",  "<",      " ",  "  ",  "\t",     "\n",     "\r\n",     " ",  " ",  "　",  " ", "\f", "\v",
      "́", "\xEF\xBB\xBF"};
  std::string s;
  auto n = rng() % 32;
  for (std::size_t i = 0; i < n; ++i) s += pieces[rng() % pieces.size()];
  return s;
}

bool is_ws_piece(const std::string& s) {
  return s == " " || s == "\t" || s == "\n" || s == "\r\n" || s == " " || s == " " || s == "　" ||
         s == " " || s == "\f" || s == "\v";
}

Outcome normalization_properties() {
  std::mt19937_64 rng(0x6e6f726d);
  static const std::vector<std::string> ws = {" ", "  ", "\t", "\n", "\r\n", " ", " ", "　"};
  const std::size_t trials = 10000;
  std::size_t idempotent = 0, invariant = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    auto s = random_string(rng);
    auto once = normalize_string(s);
    if (normalize_string(once) == once) ++idempotent;

    // Re-lay out the white space: widen every white-space character into a
    // random run and pad both ends.
    auto n1 = normalize_string(s);
    std::string relaid = ws[rng() % ws.size()];
    std::size_t pos = 0;
    while (pos < s.size()) {
      bool matched = false;
      for (const auto& w : ws) {
        if (s.compare(pos, w.size(), w) == 0 && is_ws_piece(w)) {
          relaid += ws[rng() % ws.size()] + ws[rng() % ws.size()];
          pos += w.size();
          matched = true;
          break;
        }
      }
      if (!matched) relaid += s[pos++];
    }
    relaid += ws[rng() % ws.size()];
    if (normalize_string(relaid) == n1) ++invariant;
  }
  std::ostringstream d;
  d << "idempotent " << idempotent << "/" << trials << ", white-space invariant " << invariant << "/" << trials;
  return {idempotent == trials && invariant == trials, d.str()};
}

}  // namespace

int main() {
  criterion("aggregation-replay", 1, aggregation_replay);
  criterion("census-replay", 1, census_replay);
  criterion("categorize-exhaustive", 1, categorize_exhaustive);
  criterion("nearest-pair-oracle", 10, nearest_pair_oracle);
  criterion("end-to-end-harness", 120, end_to_end);
  criterion("soft-404-detector", 60, soft404);
  criterion("similarity-values", 1, similarity_values);
  criterion("offline-determinism", 120, determinism);
  criterion("normalization-properties", 60, normalization_properties);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
