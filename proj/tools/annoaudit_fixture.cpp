// annoaudit-fixture: generate fixture manifests and serve them over HTTP.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "annoaudit/fixture/generator.hpp"
#include "annoaudit/fixture/oracle.hpp"
#include "annoaudit/fixture/server.hpp"

namespace {

volatile std::sig_atomic_t g_stop = 0;

void on_signal(int) { g_stop = 1; }

}  // namespace

int main(int argc, char** argv) {
  using namespace annoaudit::fixture;
  CLI::App app{"Deterministic local web, archives and memento aggregator for testing annoaudit"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::string manifest_path, annotations_path, host = "127.0.0.1";
  int port = 0;

  auto* gen = app.add_subcommand("generate", "Write a random manifest and its annotations");
  gen->add_option("--seed", seed, "Generator seed");
  gen->add_option("--manifest", manifest_path, "Manifest output path")->required();
  gen->add_option("--annotations", annotations_path, "Annotation JSONL output path");

  auto* serve = app.add_subcommand("serve", "Serve a manifest until interrupted");
  serve->add_option("--manifest", manifest_path, "Manifest to serve")->required();
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port (0 picks one)");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    auto m = generate_manifest(seed);
    std::ofstream(manifest_path) << to_json(m);
    if (!annotations_path.empty()) std::ofstream(annotations_path) << annotations_jsonl(m);
    std::cout << m.annotations.size() << " annotations, " << m.pages.size() << " pages\n";
    return 0;
  }

  std::ifstream in(manifest_path);
  if (!in) {
    std::cerr << "error: cannot read " << manifest_path << "\n";
    return 2;
  }
  std::stringstream text;
  text << in.rdbuf();
  FixtureManifest m;
  try {
    m = manifest_from_json(text.str());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  for (const auto& problem : validate(m)) std::cerr << "warning: " << problem << "\n";

  FixtureServer server(std::move(m), ServerOptions{host, port});
  server.start();
  std::cout << "serving on " << server.host() << ":" << server.port() << "\n"
            << "aggregator: " << FixtureServer::aggregator_base() << "\n"
            << "run annoaudit audit with --connect-to " << server.host() << ":" << server.port() << std::endl;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(200));
  server.stop();
  return 0;
}
