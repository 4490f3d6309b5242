#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "enuminst/inst_engine.hpp"

namespace enuminst {

/// A named solver configuration. Labels are strategy wire names, optionally
/// suffixed with `-no-failmask`.
struct RunConfig {
  std::string label;
  Strategy strategy;
  bool failmask = true;
};

/// Throws std::invalid_argument on an unknown label.
RunConfig parse_run_config(std::string_view label);

struct RunRecord {
  std::string problem;
  std::string config;
  std::string strategy;
  bool failmask = true;
  std::string verdict;  // unsat, unknown or timeout
  EngineStats stats;
};

inline constexpr const char* kCsvHeader =
    "problem,strategy,failmask,verdict,rounds,instances,tuples,redundant_dup,"
    "redundant_ent,redundant_rw,patterns,masked_skips,time_ms";

/// Parses and solves one problem text. Parse errors propagate.
RunRecord run_one(const std::string& problem_name, const std::string& text,
                  const RunConfig& config, double timeout_seconds);

/// `*.smt2` files directly inside `dir`, sorted by name. Throws
/// std::filesystem::filesystem_error if the directory is unreadable.
std::vector<std::filesystem::path> list_problems(const std::filesystem::path& dir);

/// Every (problem, config) pair on `jobs` worker threads. The result is
/// ordered by problem, then by config, whatever the thread count.
std::vector<RunRecord> run_corpus(const std::vector<std::filesystem::path>& problems,
                                  const std::vector<RunConfig>& configs,
                                  double timeout_seconds, unsigned jobs);

void write_csv(std::ostream& os, const std::vector<RunRecord>& records);

/// `problem,<a>,<b>` rows with run time in seconds; runs that did not end in
/// unsat are charged the timeout.
void write_scatter(std::ostream& os, const std::vector<RunRecord>& records,
                   const std::string& config_a, const std::string& config_b,
                   double timeout_seconds);

}  // namespace enuminst
