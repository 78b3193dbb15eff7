#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include <annoaudit/audit.hpp>
#include <annoaudit/fetch.hpp>

namespace annoaudit::testing {

/// Scripted fetcher: answers from a table keyed by "METHOD uri". A key may
/// hold several responses, served in turn; the last one repeats. Unknown keys
/// answer 404.
class FakeFetcher : public Fetcher {
 public:
  void on(const std::string& method, const std::string& uri, FetchResponse r) {
    routes_[method + " " + uri].push_back(std::move(r));
  }
  void on_get(const std::string& uri, int status, std::string body = {}, std::string type = "text/html") {
    FetchResponse r;
    r.status = status;
    r.body = std::move(body);
    if (!type.empty()) r.headers.emplace_back("content-type", type);
    on("GET", uri, r);
    r.body.clear();
    on("HEAD", uri, r);
  }
  void redirect(const std::string& uri, int status, const std::string& location) {
    FetchResponse r;
    r.status = status;
    r.headers.emplace_back("location", location);
    on("GET", uri, r);
    on("HEAD", uri, r);
  }

  FetchResponse fetch(const FetchRequest& request) override {
    std::lock_guard lock(mu_);
    auto key = request.method + " " + request.uri;
    log_.push_back(key);
    auto it = routes_.find(key);
    if (it == routes_.end()) {
      FetchResponse r;
      r.status = 404;
      return r;
    }
    auto& served = served_[key];
    auto idx = std::min(served, it->second.size() - 1);
    ++served;
    return it->second[idx];
  }

  std::vector<std::string> log() const {
    std::lock_guard lock(mu_);
    return log_;
  }
  std::size_t count(const std::string& key) const {
    std::lock_guard lock(mu_);
    std::size_t n = 0;
    for (const auto& k : log_)
      if (k == key) ++n;
    return n;
  }

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::vector<FetchResponse>> routes_;
  std::map<std::string, std::size_t> served_;
  std::vector<std::string> log_;
};

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("annoaudit-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline AuditVerdict make_verdict(LiveAttachment live, SideAttachment before, SideAttachment after,
                                 std::vector<std::string> archives = {}) {
  AuditVerdict v;
  v.annotation_id = "v";
  v.target_uri = "http://example.org/";
  v.live = live;
  v.before.state = before;
  v.after.state = after;
  ProbeSummary probe;
  probe.final_status = FinalStatus{live == LiveAttachment::Inaccessible ? 404 : 200, TransportError::None};
  probe.group = live == LiveAttachment::Inaccessible ? ProbeGroup::ErrorGroup : ProbeGroup::OkGroup;
  v.probe = probe;
  v.recovering_archives = std::move(archives);
  v.category = categorize(live, before, after);
  return v;
}

/// Verdicts reproducing the published memento-availability table rows: both
/// sides (8 rows), before only (4), after only (4) and no mementos (2).
inline std::vector<AuditVerdict> published_table_verdicts() {
  using L = LiveAttachment;
  using S = SideAttachment;
  std::vector<AuditVerdict> out;
  auto add = [&](std::size_t n, L live, S before, S after) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(make_verdict(live, before, after));
  };
  const L yes = L::Yes, no = L::No;
  add(4091, yes, S::Yes, S::Yes);
  add(93, yes, S::Yes, S::No);
  add(100, yes, S::No, S::Yes);
  add(182, yes, S::No, S::No);
  add(251, no, S::Yes, S::Yes);
  add(69, no, S::Yes, S::No);
  add(44, no, S::No, S::Yes);
  add(156, no, S::No, S::No);

  add(1984, yes, S::Yes, S::NoMemento);
  add(235, yes, S::No, S::NoMemento);
  add(133, no, S::Yes, S::NoMemento);
  add(125, no, S::No, S::NoMemento);

  add(1397, yes, S::NoMemento, S::Yes);
  add(101, yes, S::NoMemento, S::No);
  add(50, no, S::NoMemento, S::Yes);
  add(98, no, S::NoMemento, S::No);

  add(7839, yes, S::NoMemento, S::NoMemento);
  add(3434, no, S::NoMemento, S::NoMemento);
  return out;
}

/// Hypothes.is-shaped document with the given kinds of content.
inline std::string annotation_doc(const std::string& id, bool highlight, bool note, bool tags,
                                  const std::string& uri = "http://example.org/page") {
  std::string selector = highlight ? R"({"type":"TextQuoteSelector","exact":"some quoted words"})"
                                   : R"({"type":"RangeSelector","startOffset":0,"endOffset":4})";
  return R"({"id":")" + id + R"(","updated":"2015-01-02T03:04:05.000000+00:00","target":[{"source":")" + uri +
         R"(","selector":[)" + selector + R"(]}],"text":")" + (note ? "a note" : "") + R"(","tags":[)" +
         (tags ? R"("t1")" : "") + "]}";
}

}  // namespace annoaudit::testing
