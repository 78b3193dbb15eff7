// annoaudit: census, audit and report over a file of web annotations.

#include <iostream>

#include <CLI11.hpp>

#include "annoaudit/pipeline.hpp"

namespace {

std::optional<std::pair<std::string, int>> parse_host_port(const std::string& s) {
  auto colon = s.rfind(':');
  if (colon == std::string::npos || colon == 0) return std::nullopt;
  try {
    return std::make_pair(s.substr(0, colon), std::stoi(s.substr(colon + 1)));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace annoaudit;
  CLI::App app{"Audit highlighted-text web annotations against the live web and web archives"};
  app.require_subcommand(1);

  std::string input, out_dir = ".", cache_dir, aggregator = kDefaultAggregator, connect_to, user_agent;
  bool offline = false;
  double timeout = 30.0, threshold = 0.93;
  std::uint64_t seed = 0;
  std::size_t concurrency = 4;
  int max_redirects = 10;
  std::vector<std::string> extractors;

  auto* census = app.add_subcommand("census", "Count annotations by type combination");
  census->add_option("--input,-i", input, "Annotation file, one JSON document per line")->required();
  census->add_option("--out-dir,-o", out_dir, "Where census.json and census.txt go")->envname("ANNOAUDIT_OUT_DIR");

  auto* audit = app.add_subcommand("audit", "Probe, check and categorize every highlight");
  audit->add_option("--input,-i", input, "Annotation file, one JSON document per line")->required();
  audit->add_option("--out-dir,-o", out_dir, "Where verdicts.jsonl and the summary go")->envname("ANNOAUDIT_OUT_DIR");
  audit->add_option("--cache-dir", cache_dir, "HTTP cache (default <out-dir>/cache)")->envname("ANNOAUDIT_CACHE_DIR");
  audit->add_flag("--offline", offline, "Answer only from the cache")->envname("ANNOAUDIT_OFFLINE");
  audit->add_option("--aggregator", aggregator, "TimeMap endpoint base URL")->envname("ANNOAUDIT_AGGREGATOR");
  audit->add_option("--timeout", timeout, "Per-request timeout in seconds")->envname("ANNOAUDIT_TIMEOUT");
  audit->add_option("--soft404-threshold", threshold, "Similarity at or above which a page is a soft 404")
      ->envname("ANNOAUDIT_SOFT404_THRESHOLD");
  audit->add_option("--seed", seed, "Seed for soft-404 probe tokens")->envname("ANNOAUDIT_SEED");
  audit->add_option("--concurrency", concurrency, "Annotations audited in parallel")->envname("ANNOAUDIT_CONCURRENCY");
  audit->add_option("--user-agent", user_agent, "User-Agent header")->envname("ANNOAUDIT_USER_AGENT");
  audit->add_option("--max-redirects", max_redirects, "Redirect hops followed")->envname("ANNOAUDIT_MAX_REDIRECTS");
  audit->add_option("--connect-to", connect_to, "Send every request to HOST:PORT")->envname("ANNOAUDIT_CONNECT_TO");
  audit->add_option("--extractor", extractors, "MEDIA/TYPE=command turning a body on stdin into text");

  auto* report = app.add_subcommand("report", "Re-render the summary tables from a verdicts file");
  report->add_option("--input,-i", input, "verdicts.jsonl")->required();
  report->add_option("--out-dir,-o", out_dir, "Where report.json and report.txt go")->envname("ANNOAUDIT_OUT_DIR");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  if (census->parsed()) return run_census(input, out_dir, std::cout, std::cerr);
  if (report->parsed()) return run_report(input, out_dir, std::cout, std::cerr);

  RunConfig config;
  config.input = input;
  config.out_dir = out_dir;
  config.cache_dir = cache_dir;
  config.offline = offline;
  config.aggregator_base = aggregator;
  config.probe.timeout_s = timeout;
  config.probe.soft404_threshold = threshold;
  config.probe.rng_seed = seed;
  config.probe.max_redirects = max_redirects;
  if (!user_agent.empty()) config.probe.user_agent = user_agent;
  config.concurrency = concurrency;
  if (!connect_to.empty()) {
    config.connect_to = parse_host_port(connect_to);
    if (!config.connect_to) {
      std::cerr << "error: --connect-to wants HOST:PORT\n";
      return kExitInputError;
    }
  }
  for (const auto& e : extractors) {
    auto eq = e.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "error: --extractor wants MEDIA/TYPE=command\n";
      return kExitInputError;
    }
    config.extractor_commands[e.substr(0, eq)] = e.substr(eq + 1);
  }

  auto run = run_audit(config, std::cerr);
  if (run.exit_code != kExitOk) return run.exit_code;
  std::cout << render_summary_tables(run.summary);
  std::cerr << run.verdicts.size() << " verdicts, " << run.warnings << " warnings, " << run.network_requests
            << " network requests\n";
  return kExitOk;
}
