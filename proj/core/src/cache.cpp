#include "annoaudit/cache.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "annoaudit/time.hpp"

namespace annoaudit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Headers worth keeping: enough to replay redirects, TimeGate negotiation,
// media-type dispatch and Retry-After.
bool keep_header(const std::string& name) {
  return name == "content-type" || name == "memento-datetime" || name == "location" ||
         name == "link" || name == "retry-after";
}

TransportError error_from(std::string_view s) {
  if (s == "Timeout") return TransportError::Timeout;
  if (s == "ConnError") return TransportError::ConnError;
  return TransportError::None;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xf];
  }
  return out;
}

CachingFetcher::CachingFetcher(Fetcher* inner, fs::path dir, bool offline)
    : inner_(inner), dir_(std::move(dir)), offline_(offline) {
  if (!inner_ && !offline_) throw CacheError("online cache needs an upstream fetcher");
  std::error_code ec;
  fs::create_directories(dir_ / "bodies", ec);
  if (ec) throw CacheError("cannot create cache directory " + dir_.string() + ": " + ec.message());

  std::ifstream in(dir_ / "index.jsonl");
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw CacheError("corrupt cache index line " + std::to_string(lineno) + ": " + e.what());
    }
    CacheEntry e;
    e.method = j.value("method", "GET");
    e.uri = j.value("uri", "");
    e.accept_datetime = j.value("accept_datetime", "");
    e.fetched_at = j.value("fetched_at", "");
    e.status = j.value("status", 0);
    e.error = error_from(j.value("error", "None"));
    e.error_detail = j.value("error_detail", "");
    for (const auto& h : j.value("headers", json::array()))
      e.headers.emplace_back(h.at(0).get<std::string>(), h.at(1).get<std::string>());
    e.body_digest = j.value("body_digest", "");
    Key key{e.method, e.uri, e.accept_datetime};
    entries_.try_emplace(std::move(key), std::move(e));
  }
}

std::size_t CachingFetcher::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

FetchResponse CachingFetcher::replay(const CacheEntry& e) const {
  FetchResponse r;
  r.status = e.status;
  r.error = e.error;
  r.error_detail = e.error_detail;
  r.headers = e.headers;
  if (!e.body_digest.empty()) {
    std::ifstream in(dir_ / "bodies" / e.body_digest, std::ios::binary);
    if (!in) throw CacheError("missing cached body " + e.body_digest);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.body = ss.str();
  }
  return r;
}

void CachingFetcher::persist(const Key& key, const FetchResponse& r) {
  CacheEntry e;
  std::tie(e.method, e.uri, e.accept_datetime) = key;
  e.fetched_at = format_iso8601(std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()));
  e.status = r.status;
  e.error = r.error;
  e.error_detail = r.error_detail;
  for (const auto& h : r.headers)
    if (keep_header(h.first)) e.headers.push_back(h);
  if (r.transport_ok() && !r.body.empty()) {
    e.body_digest = sha256_hex(r.body);
    auto path = dir_ / "bodies" / e.body_digest;
    std::error_code ec;
    if (!fs::exists(path, ec)) {
      static std::atomic<unsigned long> counter{0};
      auto tmp = path;
      tmp += ".tmp" + std::to_string(counter++);
      {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(r.body.data(), static_cast<std::streamsize>(r.body.size()));
        if (!out) throw CacheError("cannot write cached body " + tmp.string());
      }
      fs::rename(tmp, path, ec);
      if (ec && !fs::exists(path)) throw CacheError("cannot store cached body: " + ec.message());
    }
  }

  json j = {{"method", e.method},     {"uri", e.uri},
            {"accept_datetime", e.accept_datetime},
            {"fetched_at", e.fetched_at}, {"status", e.status},
            {"error", to_string(e.error)}, {"error_detail", e.error_detail},
            {"headers", e.headers},   {"body_digest", e.body_digest}};

  std::lock_guard lock(mu_);
  if (entries_.contains(key)) return;
  std::ofstream out(dir_ / "index.jsonl", std::ios::app);
  out << j.dump() << '\n';
  out.flush();
  if (!out) throw CacheError("cannot append to cache index in " + dir_.string());
  entries_.emplace(key, std::move(e));
}

FetchResponse CachingFetcher::fetch(const FetchRequest& request) {
  Key key{request.method, request.uri, request.accept_datetime.value_or("")};
  {
    std::unique_lock lock(mu_);
    if (auto it = entries_.find(key); it != entries_.end()) {
      CacheEntry e = it->second;
      lock.unlock();
      ++hits_;
      return replay(e);
    }
  }
  ++misses_;
  if (offline_) return FetchResponse::failure(TransportError::ConnError, "offline cache miss");

  ++network_;
  auto r = inner_->fetch(request);
  persist(key, r);
  // Hand back exactly what a later replay would produce.
  CacheEntry e;
  {
    std::lock_guard lock(mu_);
    e = entries_.at(key);
  }
  return replay(e);
}

}  // namespace annoaudit
