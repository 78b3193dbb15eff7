#include "annoaudit/fixture/generator.hpp"

#include <algorithm>
#include <random>

#include "annoaudit/fixture/oracle.hpp"

namespace annoaudit::fixture {

namespace {

using namespace std::chrono;

// No HTML tag names, so a multi-word quote can only match page text.
constexpr std::array kWords = {
    "river",  "stone",   "amber",  "cloud",  "maple",  "orbit",  "lantern", "meadow", "copper", "harbor",
    "thistle", "quartz", "ember",  "willow", "signal", "falcon", "garnet",  "hollow", "island", "juniper",
    "kettle", "lumen",   "marsh",  "nectar", "oxbow",  "pepper", "quill",   "raven",  "saffron", "tundra",
    "umber",  "velvet",  "walnut", "yarrow", "zephyr", "basalt", "cinder",  "delta",  "fjord",  "glacier",
    "heron",  "indigo",  "jasper", "kelp",   "lichen", "mosaic", "nimbus",  "onyx",   "prairie", "ripple"};

constexpr std::array kArchives = {"web.archive.org", "archive.is", "wayback.archive-it.org",
                                  "arquivo.fixture.test"};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
  bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

using Paragraphs = std::vector<std::vector<std::string>>;

Paragraphs random_text(Rng& rng) {
  Paragraphs out(2 + rng.below(4));
  for (auto& p : out) {
    p.resize(6 + rng.below(10));
    for (auto& w : p) w = kWords[rng.below(kWords.size())];
  }
  return out;
}

Paragraphs drift(Paragraphs text, Rng& rng) {
  auto edits = 1 + rng.below(4);
  for (std::size_t e = 0; e < edits; ++e) {
    switch (rng.below(4)) {
      case 0:
        if (text.size() > 1) {
          text.erase(text.begin() + static_cast<std::ptrdiff_t>(rng.below(text.size())));
          break;
        }
        [[fallthrough]];
      case 1: {
        auto fresh = random_text(rng);
        text.insert(text.begin() + static_cast<std::ptrdiff_t>(rng.below(text.size() + 1)), fresh.front());
        break;
      }
      default: {
        auto& p = text[rng.below(text.size())];
        auto n = 1 + rng.below(3);
        for (std::size_t i = 0; i < n; ++i) p[rng.below(p.size())] = kWords[rng.below(kWords.size())];
      }
    }
  }
  return text;
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

std::string render(const Paragraphs& text, const std::string& media_type, const std::string& title) {
  std::string out;
  if (media_type == "text/plain") {
    out = title + "\n";
    for (const auto& p : text) out += join(p) + ".\n";
    return out;
  }
  if (media_type == "text/html") {
    out = "<html><head><title>" + title + "</title></head><body>\n";
    for (const auto& p : text) out += "<p>" + join(p) + ".</p>\n";
    return out + "</body></html>\n";
  }
  out = "BINARY\x01";
  for (const auto& p : text) out += join(p) + ".";
  return out;
}

struct DraftPage {
  Page page;
  std::vector<Paragraphs> texts;
  std::string host;
};

std::string quote_from(const Paragraphs& text, Rng& rng) {
  const auto& p = text[rng.below(text.size())];
  auto len = std::min<std::size_t>(p.size(), 2 + rng.below(4));
  auto start = rng.below(p.size() - len + 1);
  return join(std::vector<std::string>(p.begin() + static_cast<std::ptrdiff_t>(start),
                                       p.begin() + static_cast<std::ptrdiff_t>(start + len)));
}

const SecondStamp kEpoch = sys_days{year{2012} / 1 / 1};
constexpr std::int64_t kSpan = 5LL * 365 * 24 * 3600;

}  // namespace

FixtureManifest generate_manifest(std::uint64_t seed, const GeneratorOptions& options) {
  Rng rng(seed * 0x9E3779B97F4A7C15ULL + 1);
  FixtureManifest m;
  std::vector<DraftPage> drafts;

  std::vector<std::string> hosts;
  for (std::size_t s = 0; s < options.sites; ++s) hosts.push_back("site" + std::to_string(s) + ".fixture.test");
  std::string soft_host;
  if (rng.chance(options.soft404_site_rate)) {
    soft_host = "soft" + std::to_string(seed % 97) + ".fixture.test";
    hosts.push_back(soft_host);
  }

  for (const auto& host : hosts) {
    auto count = host == soft_host ? 1 + rng.below(2) : options.pages_per_site;
    for (std::size_t j = 0; j < count; ++j) {
      DraftPage d;
      d.host = host;
      std::string path;
      switch (rng.below(4)) {
        case 0:
          path = "/p" + std::to_string(j);
          break;
        case 1:
          path = "/docs/p" + std::to_string(j) + ".html";
          break;
        case 2:
          path = "/a/b/p" + std::to_string(j) + "?id=" + std::to_string(rng.below(100));
          break;
        default:
          path = "/blog/" + std::to_string(2012 + rng.below(5)) + "/p" + std::to_string(j) + "/";
      }
      d.page.uri = "http://" + host + path;
      std::string media = rng.chance(0.85) ? "text/html" : (rng.chance(0.7) ? "text/plain" : "application/octet-stream");
      std::string title = "PAGE " + std::to_string(j) + " OF " + host.substr(0, host.find('.'));
      std::transform(title.begin(), title.end(), title.begin(), [](unsigned char c) { return std::toupper(c); });

      auto nversions = 1 + rng.below(4);
      std::vector<std::int64_t> offsets;
      for (std::size_t v = 0; v < nversions; ++v) offsets.push_back(rng.range(0, kSpan));
      std::sort(offsets.begin(), offsets.end());
      offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
      Paragraphs text = random_text(rng);
      for (auto off : offsets) {
        if (!d.texts.empty()) text = drift(text, rng);
        d.texts.push_back(text);
        d.page.versions.push_back(PageVersion{kEpoch + seconds(off), render(text, media, title), media});
      }
      if (rng.chance(0.2))
        d.page.live_version.reset();
      else if (rng.chance(0.12))
        d.page.live_version = rng.below(d.page.versions.size());
      else
        d.page.live_version = d.page.versions.size() - 1;
      if (host == soft_host) m.behaviors[d.page.uri] = Behavior{BehaviorKind::Soft404, 0, {}};
      drafts.push_back(std::move(d));
    }
  }

  // Live-web misbehavior on ordinary hosts.
  bool have_timeout = false;
  std::vector<DraftPage> moved;
  for (auto& d : drafts) {
    if (d.host == soft_host) continue;
    if (!have_timeout && rng.chance(options.timeout_rate)) {
      m.behaviors[d.page.uri] = Behavior{BehaviorKind::Timeout, 0, {}};
      have_timeout = true;
    } else if (rng.chance(0.05)) {
      m.behaviors[d.page.uri] = Behavior{BehaviorKind::Real404, 0, {}};
    } else if (rng.chance(0.06)) {
      constexpr std::array kStatuses = {403, 410, 429, 500, 503};
      m.behaviors[d.page.uri] = Behavior{BehaviorKind::Status, kStatuses[rng.below(kStatuses.size())], {}};
    } else if (rng.chance(0.08)) {
      DraftPage target = d;
      target.page.uri = "http://" + d.host + "/moved" + std::to_string(moved.size()) + "/page";
      if (!target.page.live_version) target.page.live_version = target.page.versions.size() - 1;
      m.behaviors[d.page.uri] = Behavior{BehaviorKind::Redirect, 0, target.page.uri};
      moved.push_back(std::move(target));
    }
  }

  // Archive holdings, with some snapshots shared across archives.
  for (auto& d : drafts) {
    auto first = d.page.versions.front().datetime;
    auto last_offset = (first - kEpoch).count();
    std::vector<SecondStamp> pool;
    auto narchives = rng.below(kArchives.size() + 1);
    std::vector<std::string> chosen(kArchives.begin(), kArchives.end());
    for (std::size_t i = chosen.size(); i > 1; --i) std::swap(chosen[i - 1], chosen[rng.below(i)]);
    chosen.resize(narchives);
    for (const auto& archive : chosen) {
      Holding h{archive, d.page.uri, {}};
      auto n = rng.below(6);
      for (std::size_t k = 0; k < n; ++k) {
        SecondStamp s;
        if (!pool.empty() && rng.chance(0.3))
          s = pool[rng.below(pool.size())];
        else if (rng.chance(0.2) && d.page.versions.size() > 1)
          s = d.page.versions[rng.below(d.page.versions.size())].datetime;
        else
          s = kEpoch + seconds(rng.range(last_offset, kSpan + 3600 * 24 * 30));
        if (std::find(h.snapshots.begin(), h.snapshots.end(), s) == h.snapshots.end()) h.snapshots.push_back(s);
      }
      std::sort(h.snapshots.begin(), h.snapshots.end());
      pool.insert(pool.end(), h.snapshots.begin(), h.snapshots.end());
      if (!h.snapshots.empty()) m.holdings.push_back(std::move(h));
    }
  }

  // Annotations: one or two per page.
  std::size_t next_id = 0;
  auto new_id = [&] { return "fx" + std::to_string(seed) + "-" + std::to_string(next_id++); };
  for (auto& d : drafts) {
    std::size_t n = rng.chance(0.3) ? 2 : 1;
    for (std::size_t k = 0; k < n; ++k) {
      auto first_off = (d.page.versions.front().datetime - kEpoch).count();
      SecondStamp when = kEpoch + seconds(rng.range(first_off, kSpan + 3600 * 24 * 60));
      std::vector<SecondStamp> snaps;
      for (const auto& h : m.holdings)
        if (h.uri == d.page.uri) snaps.insert(snaps.end(), h.snapshots.begin(), h.snapshots.end());
      if (!snaps.empty() && rng.chance(0.2)) when = snaps[rng.below(snaps.size())];
      Timestamp updated = time_point_cast<microseconds>(when) + microseconds(rng.range(0, 999'999));

      std::size_t vi = 0;
      for (std::size_t i = 0; i < d.page.versions.size(); ++i)
        if (d.page.versions[i].datetime <= when) vi = i;
      if (rng.chance(0.2)) vi = rng.below(d.texts.size());
      std::string exact = rng.chance(0.05) ? "zzz unseen words" : quote_from(d.texts[vi], rng);
      m.annotations.push_back(FixtureAnnotation{new_id(), d.page.uri, exact, updated});
    }
    if (rng.chance(options.timemap_error_rate)) m.timemap_errors.insert(d.page.uri);
  }

  for (std::size_t i = 0; i < drafts.size(); ++i) {
    if (!rng.chance(options.excluded_rate)) continue;
    constexpr std::array kExcluded = {"http://localhost:8080/notes/", "urn:x-pdf:", "http://127.0.0.1/draft?n="};
    std::string uri = kExcluded[rng.below(kExcluded.size())] + std::to_string(rng.below(1000));
    m.annotations.push_back(
        FixtureAnnotation{new_id(), uri, "river stone", time_point_cast<microseconds>(kEpoch + seconds(rng.range(0, kSpan)))});
  }

  if (rng.chance(options.broken_archive_rate)) m.broken_archives.insert(kArchives[rng.below(kArchives.size())]);

  for (auto& d : drafts) m.pages.push_back(std::move(d.page));
  for (auto& d : moved) m.pages.push_back(std::move(d.page));
  m.expected_verdicts = oracle_verdicts(m);
  return m;
}

}  // namespace annoaudit::fixture
