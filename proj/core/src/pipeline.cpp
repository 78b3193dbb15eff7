#include "annoaudit/pipeline.hpp"

#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "annoaudit/cache.hpp"

namespace annoaudit {

namespace fs = std::filesystem;

namespace {

bool write_file(const fs::path& path, const std::string& content, std::ostream& err) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.flush();
  if (!out) {
    err << "error: cannot write " << path.string() << "\n";
    return false;
  }
  return true;
}

bool ensure_dir(const fs::path& dir, std::ostream& err) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    err << "error: cannot create " << dir.string() << ": " << ec.message() << "\n";
    return false;
  }
  return true;
}

}  // namespace

std::string validate(const RunConfig& config) {
  if (!(config.probe.soft404_threshold > 0.0 && config.probe.soft404_threshold <= 1.0))
    return "soft-404 threshold must be in (0, 1]";
  if (config.probe.timeout_s <= 0.0) return "timeout must be positive";
  if (config.probe.max_redirects < 0) return "max redirects must not be negative";
  if (config.probe.soft404_token_len <= 0) return "soft-404 token length must be positive";
  if (config.concurrency == 0) return "concurrency must be at least 1";
  if (config.aggregator_base.empty()) return "aggregator base URL is empty";
  return {};
}

int run_census(const fs::path& input, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  std::ifstream in(input);
  if (!in) {
    err << "error: cannot read " << input.string() << "\n";
    return kExitInputError;
  }
  auto corpus = read_corpus(in);
  for (const auto& e : corpus.errors)
    err << "warning: line " << e.line << ": byte " << e.byte_offset << ": " << e.message << "\n";
  auto c = census(corpus.documents);
  auto table = render_census_table(c, corpus.errors.size());
  out << table;
  if (!ensure_dir(out_dir, err)) return kExitIoError;
  if (!write_file(out_dir / "census.json", census_to_json(c, corpus.errors.size()), err) ||
      !write_file(out_dir / "census.txt", table, err))
    return kExitIoError;
  return kExitOk;
}

AuditRun run_audit(const RunConfig& config, std::ostream& err) {
  AuditRun run;
  if (auto problem = validate(config); !problem.empty()) {
    err << "error: " << problem << "\n";
    run.exit_code = kExitInputError;
    return run;
  }
  std::ifstream in(config.input);
  if (!in) {
    err << "error: cannot read " << config.input.string() << "\n";
    run.exit_code = kExitInputError;
    return run;
  }
  auto corpus = read_corpus(in);
  for (const auto& e : corpus.errors) {
    err << "warning: line " << e.line << ": byte " << e.byte_offset << ": " << e.message << "\n";
    ++run.warnings;
  }
  for (const auto& d : corpus.documents) {
    if (const auto* s = std::get_if<Skipped>(&d); s && s->reason == SkipReason::BadTimestamp) {
      err << "warning: annotation " << s->id << " skipped: bad timestamp\n";
      ++run.warnings;
    }
  }
  auto records = filter_highlighted(corpus.documents);

  if (!ensure_dir(config.out_dir, err)) {
    run.exit_code = kExitIoError;
    return run;
  }

  HttpFetcherOptions http_options;
  http_options.timeout = std::chrono::milliseconds(static_cast<long>(config.probe.timeout_s * 1000.0));
  http_options.user_agent = config.probe.user_agent;
  http_options.connect_to = config.connect_to;
  HttpFetcher http(http_options);
  PoliteFetcher polite(http, config.probe.max_inflight);

  std::unique_ptr<CachingFetcher> cache;
  try {
    cache = std::make_unique<CachingFetcher>(config.offline ? nullptr : &polite,
                                             config.cache_dir.empty() ? config.out_dir / "cache" : config.cache_dir,
                                             config.offline);
  } catch (const CacheError& e) {
    err << "error: " << e.what() << "\n";
    run.exit_code = kExitIoError;
    return run;
  }

  ExtractorRegistry extractors;
  for (const auto& [type, command] : config.extractor_commands) extractors.add_command(type, command);
  auto services = make_http_services(*cache, config.probe, config.aggregator_base, extractors);
  services.renderer = config.renderer;

  run.verdicts.resize(records.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex err_mu;
  auto worker = [&] {
    for (;;) {
      if (failed) return;
      auto i = next++;
      if (i >= records.size()) return;
      try {
        run.verdicts[i] = audit_annotation(records[i], services);
      } catch (const std::exception& e) {
        std::lock_guard lock(err_mu);
        err << "error: annotation " << records[i].id << ": " << e.what() << "\n";
        failed = true;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  auto threads = std::min(config.concurrency, std::max<std::size_t>(1, records.size()));
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failed) {
    run.exit_code = kExitIoError;
    return run;
  }

  for (const auto& v : run.verdicts) {
    if (v.timemap_unavailable) {
      ++run.warnings;
      err << "warning: annotation " << v.annotation_id << ": memento status unknown (TimeMap unavailable)\n";
    }
  }
  if (config.offline && cache->misses() > 0) {
    err << "warning: " << cache->misses() << " requests were not in the offline cache\n";
    ++run.warnings;
  }
  run.network_requests = cache->network_requests();
  run.summary = aggregate(run.verdicts);

  std::string lines;
  for (const auto& v : run.verdicts) lines += verdict_to_json(v) + "\n";
  if (!write_file(config.out_dir / "verdicts.jsonl", lines, err) ||
      !write_file(config.out_dir / "summary.json", summary_to_json(run.summary), err) ||
      !write_file(config.out_dir / "summary.txt", render_summary_tables(run.summary), err)) {
    run.exit_code = kExitIoError;
    return run;
  }
  return run;
}

std::vector<AuditVerdict> read_verdicts(std::istream& in) {
  std::vector<AuditVerdict> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(verdict_from_json(line));
    } catch (const SchemaError& e) {
      throw SchemaError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

int run_report(const fs::path& verdicts_path, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  std::ifstream in(verdicts_path);
  if (!in) {
    err << "error: cannot read " << verdicts_path.string() << "\n";
    return kExitInputError;
  }
  std::vector<AuditVerdict> verdicts;
  try {
    verdicts = read_verdicts(in);
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSchemaError;
  }
  auto summary = aggregate(verdicts);
  auto tables = render_summary_tables(summary);
  out << tables;
  if (!ensure_dir(out_dir, err)) return kExitIoError;
  if (!write_file(out_dir / "report.json", summary_to_json(summary), err) ||
      !write_file(out_dir / "report.txt", tables, err))
    return kExitIoError;
  return kExitOk;
}

}  // namespace annoaudit
