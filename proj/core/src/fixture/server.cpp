#include "annoaudit/fixture/server.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <httplib.h>

#include "annoaudit/memento.hpp"
#include "annoaudit/uri.hpp"

namespace annoaudit::fixture {

namespace {

std::string strip_port(const std::string& host) {
  if (!host.empty() && host.front() == '[') {
    auto close = host.find(']');
    return close == std::string::npos ? host : host.substr(0, close + 1);
  }
  auto colon = host.rfind(':');
  return colon == std::string::npos ? host : host.substr(0, colon);
}

std::string host_of(const std::string& uri) {
  auto parsed = parse_uri(uri);
  return parsed ? parsed->host : std::string();
}

}  // namespace

struct FixtureServer::Impl {
  FixtureManifest manifest;
  ServerOptions options;
  httplib::Server server;
  std::thread thread;
  int bound_port = 0;
  std::atomic<std::size_t> served{0};
  std::mutex mu;
  std::condition_variable cv;
  bool stopping = false;
  bool running = false;

  std::set<std::string> soft_hosts;
  std::set<std::string> archive_hosts;

  void handle(const httplib::Request& req, httplib::Response& res);
  void aggregator(const httplib::Request& req, httplib::Response& res);
  void archive(const std::string& host, const httplib::Request& req, httplib::Response& res);
  void live(const std::string& uri, const std::string& host, httplib::Response& res);
  std::vector<MementoRef> mementos_of(const std::string& uri) const;
};

std::vector<MementoRef> FixtureServer::Impl::mementos_of(const std::string& uri) const {
  std::vector<MementoRef> out;
  for (const auto& h : manifest.holdings) {
    if (h.uri != uri) continue;
    for (auto s : h.snapshots) {
      auto uri_m = memento_uri(h.archive_host, s, uri);
      out.push_back(MementoRef{uri_m, s, archive_host(uri_m)});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const MementoRef& a, const MementoRef& b) { return a.memento_datetime < b.memento_datetime; });
  return out;
}

void FixtureServer::Impl::aggregator(const httplib::Request& req, httplib::Response& res) {
  const std::string& target = req.target;
  auto starts = [&](std::string_view p) { return target.compare(0, p.size(), p) == 0; };
  if (starts(kTimeMapPrefix)) {
    auto uri = httplib::detail::decode_url(target.substr(kTimeMapPrefix.size()), false);
    if (manifest.timemap_errors.count(uri)) {
      res.status = 503;
      res.set_content("aggregator overloaded", "text/plain");
      return;
    }
    TimeMap tm;
    tm.uri_r = uri;
    tm.mementos = mementos_of(uri);
    if (tm.mementos.empty()) {
      res.status = 404;
      return;
    }
    res.status = 200;
    res.set_content(serialize_timemap(tm), "application/link-format");
    return;
  }
  if (starts(kTimeGatePrefix)) {
    auto uri = httplib::detail::decode_url(target.substr(kTimeGatePrefix.size()), false);
    auto all = mementos_of(uri);
    auto when = parse_rfc1123(req.get_header_value("Accept-Datetime"));
    if (all.empty()) {
      res.status = 404;
      return;
    }
    const MementoRef* best = &all.front();
    if (when) {
      for (const auto& m : all)
        if (m.memento_datetime <= *when) best = &m;
    }
    res.status = 302;
    res.set_header("Location", best->uri_m);
    res.set_header("Vary", "accept-datetime");
    return;
  }
  res.status = 404;
}

void FixtureServer::Impl::archive(const std::string& host, const httplib::Request& req, httplib::Response& res) {
  if (manifest.broken_archives.count(host)) {
    res.status = 503;
    res.set_content("archive unavailable", "text/plain");
    return;
  }
  // /web/<14 digits>/<uri>
  const std::string& target = req.target;
  const std::string prefix = "/web/";
  if (target.compare(0, prefix.size(), prefix) != 0 || target.size() < prefix.size() + 15 ||
      target[prefix.size() + 14] != '/') {
    res.status = 404;
    return;
  }
  auto when = parse_compact(std::string_view(target).substr(prefix.size(), 14));
  auto uri = target.substr(prefix.size() + 15);
  const Page* page = manifest.find_page(uri);
  bool held = false;
  for (const auto& h : manifest.holdings)
    if (h.archive_host == host && h.uri == uri && when &&
        std::find(h.snapshots.begin(), h.snapshots.end(), *when) != h.snapshots.end())
      held = true;
  const PageVersion* version = held && page ? version_at(*page, *when) : nullptr;
  if (!version) {
    res.status = 404;
    res.set_content("not in archive", "text/plain");
    return;
  }
  res.status = 200;
  res.set_header("Memento-Datetime", format_rfc1123(*when));
  res.set_header("Link", "<" + uri + ">; rel=\"original\"");
  res.set_content(version->body, version->media_type);
}

void FixtureServer::Impl::live(const std::string& uri, const std::string& host, httplib::Response& res) {
  if (soft_hosts.count(host)) {
    res.status = 200;
    res.set_content(std::string(kSoft404Body), "text/html; charset=utf-8");
    return;
  }
  if (auto it = manifest.behaviors.find(uri); it != manifest.behaviors.end()) {
    const Behavior& b = it->second;
    switch (b.kind) {
      case BehaviorKind::Timeout: {
        std::unique_lock lock(mu);
        cv.wait_for(lock, options.hang, [&] { return stopping; });
        res.status = 504;
        return;
      }
      case BehaviorKind::Real404:
        res.status = 404;
        res.set_content("<html><body><h1>Not Found</h1></body></html>", "text/html");
        return;
      case BehaviorKind::Status:
        res.status = b.status;
        if (b.status == 429) res.set_header("Retry-After", "0");
        res.set_content("<html><body><h1>Error</h1></body></html>", "text/html");
        return;
      case BehaviorKind::Redirect:
        res.status = 301;
        res.set_header("Location", b.location);
        return;
      case BehaviorKind::Soft404:
        break;
    }
  }
  const Page* page = manifest.find_page(uri);
  if (!page || !page->live_version) {
    res.status = 404;
    res.set_content("<html><body><h1>Not Found</h1></body></html>", "text/html");
    return;
  }
  const PageVersion& v = page->versions[*page->live_version];
  res.status = 200;
  res.set_content(v.body, v.media_type == "text/html" ? "text/html; charset=utf-8" : v.media_type);
}

void FixtureServer::Impl::handle(const httplib::Request& req, httplib::Response& res) {
  ++served;
  std::string host = strip_port(req.get_header_value("Host"));
  if (host == kAggregatorHost) return aggregator(req, res);
  if (archive_hosts.count(host)) return archive(host, req, res);
  live("http://" + req.get_header_value("Host") + req.target, host, res);
}

FixtureServer::FixtureServer(FixtureManifest manifest, ServerOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->manifest = std::move(manifest);
  impl_->options = std::move(options);
  for (const auto& [uri, b] : impl_->manifest.behaviors)
    if (b.kind == BehaviorKind::Soft404) impl_->soft_hosts.insert(host_of(uri));
  for (const auto& h : impl_->manifest.holdings) impl_->archive_hosts.insert(h.archive_host);
  for (const auto& a : impl_->manifest.broken_archives) impl_->archive_hosts.insert(a);
}

FixtureServer::~FixtureServer() { stop(); }

void FixtureServer::start() {
  auto& s = impl_->server;
  auto handler = [this](const httplib::Request& req, httplib::Response& res) { impl_->handle(req, res); };
  s.Get(".*", handler);
  s.Post(".*", handler);
  s.Options(".*", handler);
  s.set_keep_alive_max_count(1);
  s.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  if (impl_->options.port == 0)
    impl_->bound_port = s.bind_to_any_port(impl_->options.bind_host);
  else
    impl_->bound_port = s.bind_to_port(impl_->options.bind_host, impl_->options.port) ? impl_->options.port : -1;
  if (impl_->bound_port <= 0) throw std::runtime_error("fixture server: cannot bind " + impl_->options.bind_host);
  impl_->running = true;
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void FixtureServer::stop() {
  if (!impl_ || !impl_->running) return;
  {
    std::lock_guard lock(impl_->mu);
    impl_->stopping = true;
  }
  impl_->cv.notify_all();
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
  impl_->running = false;
}

int FixtureServer::port() const { return impl_->bound_port; }
const std::string& FixtureServer::host() const { return impl_->options.bind_host; }
std::size_t FixtureServer::requests() const { return impl_->served; }

std::string FixtureServer::aggregator_base() {
  return "http://" + std::string(kAggregatorHost) + std::string(kTimeMapPrefix);
}

}  // namespace annoaudit::fixture
