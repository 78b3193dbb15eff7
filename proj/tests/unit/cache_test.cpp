#include <fstream>

#include <doctest.h>

#include <annoaudit/cache.hpp>

#include "support.hpp"

using namespace annoaudit;
using annoaudit::testing::FakeFetcher;
using annoaudit::testing::TempDir;

TEST_CASE("sha256 digests") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("cache records and replays") {
  TempDir dir;
  FakeFetcher net;
  net.on_get("http://a.org/", 200, "<p>hello</p>");
  FetchResponse memento;
  memento.status = 200;
  memento.body = "old";
  memento.headers = {{"memento-datetime", "Wed, 10 Dec 2014 12:10:18 GMT"}, {"set-cookie", "x"}};
  net.on("GET", "http://m.org/1", memento);

  {
    CachingFetcher cache(&net, dir.path(), false);
    auto r = cache.fetch({"GET", "http://a.org/", std::nullopt});
    CHECK(r.status == 200);
    CHECK(r.body == "<p>hello</p>");
    CHECK(r.media_type() == "text/html");
    cache.fetch({"GET", "http://a.org/", std::nullopt});
    CHECK(cache.network_requests() == 1);
    CHECK(cache.hits() == 1);
    auto m = cache.fetch({"GET", "http://m.org/1", std::nullopt});
    CHECK(m.header("memento-datetime") == "Wed, 10 Dec 2014 12:10:18 GMT");
    CHECK_FALSE(m.header("set-cookie"));
    cache.fetch({"GET", "http://a.org/", std::string("Wed, 10 Dec 2014 12:10:18 GMT")});
    CHECK(cache.network_requests() == 3);
    CHECK(cache.size() == 3);
  }

  CachingFetcher offline(nullptr, dir.path(), true);
  CHECK(offline.size() == 3);
  auto r = offline.fetch({"GET", "http://a.org/", std::nullopt});
  CHECK(r.body == "<p>hello</p>");
  auto miss = offline.fetch({"GET", "http://never.org/", std::nullopt});
  CHECK(miss.error == TransportError::ConnError);
  CHECK(miss.error_detail == "offline cache miss");
  CHECK(offline.network_requests() == 0);
  CHECK(offline.misses() == 1);
}

TEST_CASE("transport failures are cached too") {
  TempDir dir;
  FakeFetcher net;
  net.on("HEAD", "http://slow.org/", FetchResponse::failure(TransportError::Timeout, "timed out"));
  {
    CachingFetcher cache(&net, dir.path(), false);
    CHECK(cache.fetch({"HEAD", "http://slow.org/", std::nullopt}).error == TransportError::Timeout);
  }
  CachingFetcher offline(nullptr, dir.path(), true);
  CHECK(offline.fetch({"HEAD", "http://slow.org/", std::nullopt}).error == TransportError::Timeout);
}

TEST_CASE("unusable cache directory") {
  TempDir dir;
  auto file = dir.path() / "plain-file";
  std::ofstream(file) << "x";
  FakeFetcher net;
  CHECK_THROWS_AS(CachingFetcher(&net, file, false), CacheError);
}
