#include <random>

#include <doctest.h>

#include <annoaudit/memento.hpp>

#include "support.hpp"

using namespace annoaudit;
using annoaudit::testing::FakeFetcher;

namespace {

SecondStamp at(const char* iso) { return truncate_to_seconds(*parse_iso8601(iso)); }

MementoRef ref(const std::string& host, const char* iso) {
  auto when = at(iso);
  auto uri_m = "http://" + host + "/web/" + format_compact(when) + "/http://a.org/";
  return MementoRef{uri_m, when, archive_host(uri_m)};
}

const char* kThreeLinks =
    "<http://a.org/>; rel=\"original\",\n"
    "<http://web.archive.org/web/20150601000000/http://a.org/>; rel=\"last memento\"; "
    "datetime=\"Mon, 01 Jun 2015 00:00:00 GMT\",\n"
    "<http://web.archive.org/web/20141210121018/http://a.org/>; rel=\"first memento\"; "
    "datetime=\"Wed, 10 Dec 2014 12:10:18 GMT\"\n";

}  // namespace

TEST_CASE("link-format tokenizer") {
  auto links = parse_link_format(R"(<http://x/a,b>; rel="memento first"; title="a, \"b\"", <http://y>;rel=original)");
  REQUIRE(links.size() == 2);
  CHECK(links[0].target == "http://x/a,b");
  CHECK(links[0].has_rel("first"));
  CHECK(links[0].param("title") == "a, \"b\"");
  CHECK(links[1].has_rel("original"));
  CHECK_FALSE(links[1].has_rel("memento"));

  CHECK_THROWS_AS(parse_link_format("http://x; rel=memento"), TimeMapParseError);
  CHECK_THROWS_AS(parse_link_format("<http://x"), TimeMapParseError);
  CHECK_THROWS_AS(parse_link_format("<http://x>; rel=\"memento"), TimeMapParseError);
  CHECK_THROWS_AS(parse_link_format("<http://x>; rel=a <http://y>"), TimeMapParseError);
  CHECK(parse_link_format("  ").empty());
}

TEST_CASE("TimeMap parsing") {
  auto tm = parse_timemap(kThreeLinks, "http://a.org/");
  REQUIRE(tm.mementos.size() == 2);
  CHECK(tm.mementos[0].memento_datetime == at("2014-12-10T12:10:18Z"));
  CHECK(tm.mementos[1].memento_datetime == at("2015-06-01T00:00:00Z"));
  CHECK(tm.mementos[0].archive == "Internet Archive");

  CHECK(parse_timemap("<http://a.org/>; rel=\"original\"", "http://a.org/").mementos.empty());

  auto ties = parse_timemap(
      "<http://web.archive.org/web/1/http://a.org/>; rel=\"memento\"; datetime=\"Wed, 10 Dec 2014 12:10:18 GMT\","
      "<http://archive.is/xyz>; rel=\"memento\"; datetime=\"Wed, 10 Dec 2014 12:10:18 GMT\","
      "<http://bad.org/m>; rel=\"memento\"; datetime=\"someday\","
      "<http://nodate.org/m>; rel=\"memento\"",
      "http://a.org/");
  REQUIRE(ties.mementos.size() == 2);
  CHECK(ties.mementos[0].archive == "Internet Archive");
  CHECK(ties.mementos[1].archive == "archive.is");
  CHECK(ties.skipped_links == 2);
}

TEST_CASE("serialize and parse round trip") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 200; ++round) {
    TimeMap tm;
    tm.uri_r = "http://a.org/p?q=" + std::to_string(round);
    auto n = rng() % 6;
    for (std::size_t i = 0; i < n; ++i) {
      SecondStamp when{std::chrono::seconds(1400000000 + static_cast<long>(rng() % 1000))};
      auto uri_m = "http://arch" + std::to_string(rng() % 3) + ".org/" + std::to_string(i);
      tm.mementos.push_back(MementoRef{uri_m, when, archive_host(uri_m)});
    }
    std::stable_sort(tm.mementos.begin(), tm.mementos.end(),
                     [](const auto& a, const auto& b) { return a.memento_datetime < b.memento_datetime; });
    auto back = parse_timemap(serialize_timemap(tm), tm.uri_r);
    CHECK(back.mementos == tm.mementos);
    CHECK(back.skipped_links == 0);
  }
}

TEST_CASE("nearest_pair picks the closest sides with ties") {
  TimeMap tm;
  tm.mementos = {ref("web.archive.org", "2015-01-01T00:00:00Z"), ref("web.archive.org", "2015-01-02T00:00:00Z"),
                 ref("web.archive.org", "2015-01-04T00:00:00Z"), ref("archive.is", "2015-01-04T00:00:00Z"),
                 ref("web.archive.org", "2015-01-07T00:00:00Z")};
  auto hood = nearest_pair(tm, *parse_iso8601("2015-01-05T00:00:00Z"));
  REQUIRE(hood.before.size() == 2);
  CHECK(hood.before[0].archive == "Internet Archive");
  CHECK(hood.before[1].archive == "archive.is");
  REQUIRE(hood.after.size() == 1);
  CHECK(hood.after[0].memento_datetime == at("2015-01-07T00:00:00Z"));
  CHECK(hood.shape() == NeighborhoodShape::BeforeAndAfter);

  // Same second as a capture: that capture is "before".
  auto same = nearest_pair(tm, *parse_iso8601("2015-01-02T00:00:00.999999Z"));
  REQUIRE(same.before.size() == 1);
  CHECK(same.before[0].memento_datetime == at("2015-01-02T00:00:00Z"));
  CHECK(same.after.size() == 2);

  CHECK(nearest_pair(tm, *parse_iso8601("2014-01-01T00:00:00Z")).shape() == NeighborhoodShape::AfterOnly);
  CHECK(nearest_pair(tm, *parse_iso8601("2016-01-01T00:00:00Z")).shape() == NeighborhoodShape::BeforeOnly);
  CHECK(nearest_pair(TimeMap{}, *parse_iso8601("2016-01-01T00:00:00Z")).shape() == NeighborhoodShape::NoMementos);
}

TEST_CASE("archive labels") {
  CHECK(archive_host("https://web.archive.org/web/20141210121018/http://climatefeedback.org/") == "Internet Archive");
  CHECK(archive_host("https://archive.is/abcde") == "archive.is");
  CHECK(archive_host("http://archive.today/abcde") == "archive.is");
  CHECK(archive_host("http://wayback.archive-it.org/1/2/http://a.org/") == "Archive-It");
  CHECK(archive_host("https://unknown-archive.example/m/1") == "unknown-archive.example");
  CHECK(archive_host("http://wayback.vefsafn.is/wayback/1/http://a.org/") == "wayback.vefsafn.is");
}

TEST_CASE("fetch_timemap outcomes") {
  const std::string base = "http://agg.test/timemap/link/";
  const std::string uri = "http://a.org/p?x=1";
  auto request = timemap_request_uri(base, uri);
  CHECK(request == "http://agg.test/timemap/link/http://a.org/p%3Fx=1");

  FakeFetcher held;
  held.on_get(request, 200, kThreeLinks, "application/link-format");
  CHECK(fetch_timemap(uri, base, held).mementos.size() == 2);

  FakeFetcher none;
  CHECK(fetch_timemap(uri, base, none).mementos.empty());

  FakeFetcher down;
  down.on("GET", request, FetchResponse::failure(TransportError::ConnError, "refused"));
  CHECK_THROWS_AS(fetch_timemap(uri, base, down), TimeMapUnavailable);

  FakeFetcher overloaded;
  overloaded.on_get(request, 503, "busy", "text/plain");
  CHECK_THROWS_AS(fetch_timemap(uri, base, overloaded), TimeMapUnavailable);

  FakeFetcher garbage;
  garbage.on_get(request, 200, "this is not link format", "text/plain");
  CHECK_THROWS_AS(fetch_timemap(uri, base, garbage), TimeMapUnavailable);

  FakeFetcher paged;
  paged.on_get(request, 200,
               std::string("<http://agg.test/page2>; rel=\"timemap\", ") +
                   "<http://web.archive.org/web/20150601000000/http://a.org/>; rel=\"memento\"; "
                   "datetime=\"Mon, 01 Jun 2015 00:00:00 GMT\"",
               "application/link-format");
  paged.on_get("http://agg.test/page2", 200,
               "<http://archive.is/q>; rel=\"memento\"; datetime=\"Wed, 10 Dec 2014 12:10:18 GMT\"",
               "application/link-format");
  auto both = fetch_timemap(uri, base, paged);
  REQUIRE(both.mementos.size() == 2);
  CHECK(both.mementos[0].archive == "archive.is");
}

TEST_CASE("TimeGate negotiation sends Accept-Datetime") {
  FakeFetcher f;
  FetchRequest probe_req{"HEAD", "http://tg.test/timegate/http://a.org/", format_rfc1123(at("2015-01-01T00:00:00Z"))};
  FetchResponse redirect;
  redirect.status = 302;
  redirect.headers.emplace_back("location", "http://web.archive.org/web/20141210121018/http://a.org/");
  f.on("HEAD", probe_req.uri, redirect);
  FetchResponse memento;
  memento.status = 200;
  memento.headers.emplace_back("memento-datetime", "Wed, 10 Dec 2014 12:10:18 GMT");
  f.on("HEAD", "http://web.archive.org/web/20141210121018/http://a.org/", memento);
  auto m = negotiate_timegate(probe_req.uri, at("2015-01-01T00:00:00Z"), f);
  REQUIRE(m);
  CHECK(m->memento_datetime == at("2014-12-10T12:10:18Z"));
  CHECK(m->archive == "Internet Archive");
  CHECK_FALSE(negotiate_timegate("http://tg.test/none", at("2015-01-01T00:00:00Z"), f));
}
