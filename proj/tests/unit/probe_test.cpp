#include <doctest.h>

#include <annoaudit/probe.hpp>

#include "support.hpp"

using namespace annoaudit;
using annoaudit::testing::FakeFetcher;

namespace {

ProbeConfig quick_config() {
  ProbeConfig c;
  c.sleep = [](std::chrono::milliseconds) {};
  return c;
}

FetchResponse transport_failure(TransportError e) { return FetchResponse::failure(e, "scripted"); }

}  // namespace

TEST_CASE("bigram similarity values") {
  CHECK(similarity("night", "nacht") == 0.25);
  CHECK(similarity("abcd", "wxyz") == 0.0);
  CHECK(similarity("some page text", "some page text") == 1.0);
  CHECK(similarity("", "") == 1.0);
  CHECK(similarity("abc", "") == 0.0);
  CHECK(similarity("a", "a") == 1.0);
  CHECK(similarity("a", "b") == 0.0);
  CHECK(similarity("abcde", "abcxy") == 0.5);
  // multiset: "aaaa" has three "aa" pairs, "aa" one.
  CHECK(similarity("aaaa", "aa") == doctest::Approx(0.5));
  CHECK(similarity("日本語", "日本") == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("soft-404 token and sibling URI") {
  auto t1 = soft404_token("http://a.org/x", 0, 12);
  CHECK(t1.size() == 12);
  CHECK(t1.find_first_not_of("abcdefghijklmnopqrstuvwxyz0123456789") == std::string::npos);
  CHECK(soft404_token("http://a.org/x", 0, 12) == t1);
  CHECK(soft404_token("http://a.org/x", 1, 12) != t1);
  CHECK(soft404_token("http://a.org/y", 0, 12) != t1);

  CHECK(soft404_probe_uri("http://a.org/", "TOK") == "http://a.org/TOK");
  CHECK(soft404_probe_uri("http://a.org", "TOK") == "http://a.org/TOK");
  CHECK(soft404_probe_uri("http://a.org/leaf", "TOK") == "http://a.org/TOK/leaf");
  CHECK(soft404_probe_uri("http://a.org/a/b/leaf.html?x=1#frag", "TOK") == "http://a.org/a/bTOK/leaf.html?x=1");
  CHECK(soft404_probe_uri("http://a.org/dir/", "TOK") == "http://a.org/dirTOK/");
  CHECK_FALSE(soft404_probe_uri("urn:x:y", "TOK"));
}

TEST_CASE("probe of a plain 200 page") {
  FakeFetcher f;
  f.on_get("http://a.org/p", 200, "<p>hello there</p>");
  auto out = probe("http://a.org/p", f, quick_config());
  CHECK(out.final_status == FinalStatus{200, TransportError::None});
  CHECK(out.group == ProbeGroup::OkGroup);
  CHECK_FALSE(out.soft_4xx);
  REQUIRE(out.body);
  CHECK(out.body->bytes == "<p>hello there</p>");
  CHECK(out.body->media_type == "text/html");
  CHECK(f.count("HEAD http://a.org/p") == 1);
}

TEST_CASE("probe of a 404 and of a timeout") {
  FakeFetcher f;
  f.on_get("http://a.org/gone", 404);
  auto gone = probe("http://a.org/gone", f, quick_config());
  CHECK(gone.final_status.http == 404);
  CHECK(gone.group == ProbeGroup::ErrorGroup);
  CHECK_FALSE(gone.body);

  f.on("HEAD", "http://a.org/slow", transport_failure(TransportError::Timeout));
  auto slow = probe("http://a.org/slow", f, quick_config());
  CHECK(slow.final_status.transport == TransportError::Timeout);
  CHECK(slow.final_status.str() == "Timeout");
  CHECK(slow.group == ProbeGroup::ErrorGroup);
  CHECK(f.count("GET http://a.org/slow") == 0);
}

TEST_CASE("HEAD refused falls back to GET") {
  FakeFetcher f;
  FetchResponse refused;
  refused.status = 405;
  f.on("HEAD", "http://a.org/p", refused);
  FetchResponse ok;
  ok.status = 200;
  ok.body = "<p>body</p>";
  ok.headers.emplace_back("content-type", "text/html");
  f.on("GET", "http://a.org/p", ok);
  auto out = probe("http://a.org/p", f, quick_config());
  CHECK(out.final_status.http == 200);
  CHECK(out.group == ProbeGroup::OkGroup);

  FakeFetcher dropped;
  dropped.on("HEAD", "http://b.org/", transport_failure(TransportError::ConnError));
  dropped.on("GET", "http://b.org/", ok);
  CHECK(probe("http://b.org/", dropped, quick_config()).final_status.http == 200);
}

TEST_CASE("429 is retried once after Retry-After") {
  FakeFetcher f;
  FetchResponse busy;
  busy.status = 429;
  busy.headers.emplace_back("retry-after", "7");
  FetchResponse ok;
  ok.status = 200;
  f.on("HEAD", "http://a.org/p", busy);
  f.on("HEAD", "http://a.org/p", ok);
  f.on_get("http://a.org/p", 200, "<p>x</p>");
  std::vector<std::chrono::milliseconds> waits;
  auto config = quick_config();
  config.sleep = [&](std::chrono::milliseconds d) { waits.push_back(d); };
  auto out = probe("http://a.org/p", f, config);
  CHECK(out.final_status.http == 200);
  REQUIRE(waits.size() == 1);
  CHECK(waits[0] == std::chrono::seconds(7));

  FakeFetcher always;
  busy.headers = {{"retry-after", "100000"}};
  always.on("HEAD", "http://a.org/p", busy);
  waits.clear();
  auto limited = probe("http://a.org/p", always, config);
  CHECK(limited.final_status.http == 429);
  CHECK(limited.group == ProbeGroup::ErrorGroup);
  CHECK(always.count("HEAD http://a.org/p") == 2);
  CHECK(waits.at(0) == std::chrono::seconds(60));
}

TEST_CASE("redirect chains are recorded") {
  FakeFetcher f;
  f.redirect("http://a.org/old", 301, "/mid");
  f.redirect("http://a.org/mid", 302, "https://b.org/new");
  f.on_get("https://b.org/new", 200, "<p>moved</p>");
  auto out = probe("http://a.org/old", f, quick_config());
  CHECK(out.final_status.http == 200);
  CHECK(out.redirect_chain == std::vector<std::string>{"http://a.org/old", "http://a.org/mid", "https://b.org/new"});

  FakeFetcher loop;
  loop.redirect("http://a.org/x", 302, "http://a.org/y");
  loop.redirect("http://a.org/y", 302, "http://a.org/x");
  auto looped = probe("http://a.org/x", loop, quick_config());
  CHECK(looped.group == ProbeGroup::ErrorGroup);
  CHECK(looped.final_status.http == 302);
}

TEST_CASE("soft-404 detection with scripted sites") {
  auto config = quick_config();
  const std::string uri = "http://login.example/docs/page";
  auto junk = *soft404_probe_uri(uri, soft404_token(uri, config.rng_seed, config.soft404_token_len));

  FakeFetcher same;
  same.on_get(uri, 200, "<p>Please sign in</p>");
  same.on_get(junk, 200, "<p>Please sign in</p>");
  auto out = probe(uri, same, config);
  CHECK(out.soft_4xx);
  CHECK(out.group == ProbeGroup::ErrorGroup);
  CHECK(out.final_status.http == 200);

  FakeFetcher real;
  real.on_get(uri, 200, "<p>Please sign in</p>");
  CHECK_FALSE(detect_soft_4xx(uri, real, config));

  FakeFetcher half;
  half.on_get(uri, 200, "<p>abcde</p>");
  half.on_get(junk, 200, "<p>abcxy</p>");
  CHECK_FALSE(detect_soft_4xx(uri, half, config));
  config.soft404_threshold = 0.5;
  CHECK(detect_soft_4xx(uri, half, config));
}

TEST_CASE("FinalStatus text round trip") {
  for (auto s : {FinalStatus{200, TransportError::None}, FinalStatus{0, TransportError::Timeout},
                 FinalStatus{0, TransportError::ConnError}, FinalStatus{503, TransportError::None}})
    CHECK(FinalStatus::parse(s.str()) == s);
  CHECK_FALSE(FinalStatus::parse("OK"));
  CHECK(classify({200, TransportError::None}, false) == ProbeGroup::OkGroup);
  CHECK(classify({200, TransportError::None}, true) == ProbeGroup::ErrorGroup);
  CHECK(classify({301, TransportError::None}, false) == ProbeGroup::ErrorGroup);
}
