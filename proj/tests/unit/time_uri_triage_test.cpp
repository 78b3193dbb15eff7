#include <doctest.h>

#include <annoaudit/time.hpp>
#include <annoaudit/triage.hpp>
#include <annoaudit/uri.hpp>

using namespace annoaudit;

TEST_CASE("ISO 8601 parsing and formatting") {
  auto t = parse_iso8601("2014-12-03T04:47:21.863568+00:00");
  REQUIRE(t);
  CHECK(format_iso8601(*t) == "2014-12-03T04:47:21.863568Z");
  CHECK(format_iso8601(*parse_iso8601("2015-08-01T23:30:00-01:00")) == "2015-08-02T00:30:00.000000Z");
  CHECK(format_iso8601(*parse_iso8601("2015-08-01T00:00:00.1234567891Z")) == "2015-08-01T00:00:00.123456Z");
  CHECK(format_iso8601(truncate_to_seconds(*t)) == "2014-12-03T04:47:21Z");
  CHECK_FALSE(parse_iso8601("2015-02-30T00:00:00Z"));
  CHECK(parse_iso8601("2015-01-01 00:00:00Z") == parse_iso8601("2015-01-01T00:00:00Z"));
  CHECK_FALSE(parse_iso8601("2015-01-01T00:00:00"));
  CHECK_FALSE(parse_iso8601(""));
}

TEST_CASE("RFC 1123 and compact archive timestamps") {
  auto t = parse_rfc1123("Wed, 10 Dec 2014 12:10:18 GMT");
  REQUIRE(t);
  CHECK(format_rfc1123(*t) == "Wed, 10 Dec 2014 12:10:18 GMT");
  CHECK(format_compact(*t) == "20141210121018");
  CHECK(parse_compact("20141210121018") == t);
  CHECK(parse_rfc1123("10 Dec 2014 12:10:18 GMT") == t);
  CHECK_FALSE(parse_rfc1123("Wed, 10 Foo 2014 12:10:18 GMT"));
  CHECK_FALSE(parse_compact("2014121012101"));
  CHECK_FALSE(parse_compact("20141310121018"));
}

TEST_CASE("URI parsing and reference resolution") {
  auto u = parse_uri("http://Example.org:8080/a/b?x=1#frag");
  REQUIRE(u);
  CHECK(u->scheme == "http");
  CHECK(u->host == "example.org");
  CHECK(u->port == 8080);
  CHECK(u->path == "/a/b");
  CHECK(u->target() == "/a/b?x=1");
  CHECK_FALSE(parse_uri("http://exa mple.org/"));
  CHECK_FALSE(parse_uri("no scheme"));

  auto base = *parse_uri("http://a.org/b/c/d?q");
  CHECK(resolve_reference(base, "../g") == "http://a.org/b/g");
  CHECK(resolve_reference(base, "/x/./y/../z") == "http://a.org/x/z");
  CHECK(resolve_reference(base, "//other.org/p") == "http://other.org/p");
  CHECK(resolve_reference(base, "?y") == "http://a.org/b/c/d?y");
  CHECK(resolve_reference(base, "https://abs.org/") == "https://abs.org/");
}

TEST_CASE("percent encoding of a URI as a path component") {
  CHECK(percent_encode_uri_component("http://a.org/p?q=1#f") == "http://a.org/p%3Fq=1%23f");
  CHECK(percent_encode_uri_component("a b") == "a%20b");
}

TEST_CASE("triage classes") {
  CHECK(triage_uri("http://localhost/notes.html").triage_class == TriageClass::ExcludedLocalhost);
  CHECK(triage_uri("http://127.0.0.1:8000/x").triage_class == TriageClass::ExcludedLocalhost);
  CHECK(triage_uri("http://[::1]/x").triage_class == TriageClass::ExcludedLocalhost);
  CHECK(triage_uri("http://app.localhost/").triage_class == TriageClass::ExcludedLocalhost);
  CHECK(triage_uri("urn:x-pdf:5d2ab4c1e0f").triage_class == TriageClass::ExcludedUrn);
  CHECK(triage_uri("file:///home/me/paper.pdf").triage_class == TriageClass::ExcludedUrn);
  CHECK(triage_uri("http://climatefeedback.org/").triage_class == TriageClass::Resolvable);
  CHECK(triage_uri("https://www.perseus.tufts.edu/hopper/").triage_class == TriageClass::Resolvable);
  CHECK(triage_uri("not a uri").triage_class == TriageClass::ExcludedMalformed);
  CHECK(triage_uri("http:/no-authority").triage_class == TriageClass::ExcludedMalformed);
  CHECK(is_excluded(TriageClass::ExcludedUrn));
  CHECK_FALSE(is_excluded(TriageClass::Resolvable));
  CHECK(is_loopback_host("127.8.9.10"));
  CHECK_FALSE(is_loopback_host("128.0.0.1"));
  CHECK_FALSE(is_loopback_host("localhost.example.org"));
}
