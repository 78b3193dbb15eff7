#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "annoaudit/audit.hpp"
#include "annoaudit/probe.hpp"

namespace annoaudit {

enum ExitCode : int { kExitOk = 0, kExitInputError = 2, kExitIoError = 3, kExitSchemaError = 4 };

inline constexpr const char* kDefaultAggregator = "http://timetravel.mementoweb.org/timemap/link/";

struct RunConfig {
  std::filesystem::path input;
  std::filesystem::path out_dir = ".";
  /// Defaults to <out_dir>/cache when empty.
  std::filesystem::path cache_dir;
  bool offline = false;
  std::string aggregator_base = kDefaultAggregator;
  ProbeConfig probe;
  std::size_t concurrency = 4;
  /// Route every connection to this host:port (local fixtures, proxies).
  std::optional<std::pair<std::string, int>> connect_to;
  /// media type -> shell command (body on stdin, UTF-8 text on stdout)
  std::map<std::string, std::string> extractor_commands;
  /// Optional scripted-renderer second pass, see AuditServices::renderer.
  std::function<std::optional<FetchedBody>(std::string_view uri)> renderer;
};

struct AuditRun {
  int exit_code = kExitOk;
  std::size_t warnings = 0;
  std::size_t network_requests = 0;
  std::vector<AuditVerdict> verdicts;
  AuditSummary summary;
};

/// Checks the invariants on a RunConfig; returns an error message or empty.
std::string validate(const RunConfig& config);

/// Census of an annotation file: writes census.json and census.txt into
/// `out_dir` and the table to `out`.
int run_census(const std::filesystem::path& input, const std::filesystem::path& out_dir, std::ostream& out,
               std::ostream& err);

/// Full audit: writes verdicts.jsonl, summary.json and summary.txt into
/// config.out_dir. Verdicts are in input order.
AuditRun run_audit(const RunConfig& config, std::ostream& err);

/// Renders report.json and report.txt from a verdicts file.
int run_report(const std::filesystem::path& verdicts, const std::filesystem::path& out_dir, std::ostream& out,
               std::ostream& err);

/// Reads a verdicts file. Throws SchemaError on any bad line.
std::vector<AuditVerdict> read_verdicts(std::istream& in);

}  // namespace annoaudit
