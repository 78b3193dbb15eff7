#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "annoaudit/fixture/manifest.hpp"

namespace annoaudit::fixture {

struct ServerOptions {
  std::string bind_host = "127.0.0.1";
  /// 0 picks a free port.
  int port = 0;
  /// How long a "timeout" URI keeps the connection open without answering.
  std::chrono::milliseconds hang{5000};
};

/// Local HTTP server playing the live web, the archives and the memento
/// aggregator of a manifest. Requests are told apart by their Host header, so
/// clients must connect here while naming the original authority.
class FixtureServer {
 public:
  explicit FixtureServer(FixtureManifest manifest, ServerOptions options = {});
  ~FixtureServer();
  FixtureServer(const FixtureServer&) = delete;
  FixtureServer& operator=(const FixtureServer&) = delete;

  /// Binds and starts serving on a background thread. Throws
  /// std::runtime_error when the port cannot be bound.
  void start();
  /// Wakes any hanging handlers and stops. Idempotent.
  void stop();

  int port() const;
  const std::string& host() const;
  /// Number of requests answered so far.
  std::size_t requests() const;

  /// Base URL of the aggregator TimeMap endpoint.
  static std::string aggregator_base();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace annoaudit::fixture
