#include "enuminst/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "enuminst/parser.hpp"

namespace enuminst {

namespace {

constexpr std::string_view kNoFailmask = "-no-failmask";

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_ms(double ms) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", ms);
  return buf;
}

}  // namespace

RunConfig parse_run_config(std::string_view label) {
  RunConfig cfg;
  cfg.label = std::string(label);
  std::string_view name = label;
  if (name.ends_with(kNoFailmask)) {
    cfg.failmask = false;
    name.remove_suffix(kNoFailmask.size());
  }
  cfg.strategy = parse_strategy(name);
  return cfg;
}

RunRecord run_one(const std::string& problem_name, const std::string& text,
                  const RunConfig& config, double timeout_seconds) {
  EngineConfig ec;
  ec.strategy = config.strategy;
  ec.failmask = config.failmask;
  if (timeout_seconds > 0) {
    ec.deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(timeout_seconds));
  }
  Engine engine(parse_problem(text), ec);
  SolveResult result = engine.solve();

  RunRecord rec;
  rec.problem = problem_name;
  rec.config = config.label;
  rec.strategy = strategy_name(config.strategy);
  rec.failmask = config.failmask;
  rec.stats = result.stats;
  if (result.reason == UnknownReason::Timeout) {
    rec.verdict = "timeout";
  } else {
    rec.verdict = std::string(result.verdict());
  }
  return rec;
}

std::vector<std::filesystem::path> list_problems(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".smt2") {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<RunRecord> run_corpus(const std::vector<std::filesystem::path>& problems,
                                  const std::vector<RunConfig>& configs,
                                  double timeout_seconds, unsigned jobs) {
  std::vector<std::string> texts;
  for (const auto& p : problems) texts.push_back(read_file(p));

  const std::size_t total = problems.size() * configs.size();
  std::vector<RunRecord> records(total);
  std::vector<std::string> errors(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      std::size_t p = i / configs.size();
      std::size_t c = i % configs.size();
      try {
        records[i] = run_one(problems[p].filename().string(), texts[p],
                             configs[c], timeout_seconds);
      } catch (const std::exception& e) {
        errors[i] = problems[p].string() + ": " + e.what();
      }
    }
  };
  unsigned n = std::max(1u, jobs);
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < n; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const std::string& e : errors) {
    if (!e.empty()) throw std::runtime_error(e);
  }
  return records;
}

void write_csv(std::ostream& os, const std::vector<RunRecord>& records) {
  os << kCsvHeader << '\n';
  for (const RunRecord& r : records) {
    const EngineStats& s = r.stats;
    os << r.problem << ',' << r.strategy << ',' << (r.failmask ? 1 : 0) << ','
       << r.verdict << ',' << s.rounds << ',' << s.instances << ',' << s.tuples
       << ',' << s.redundant_dup << ',' << s.redundant_ent << ','
       << s.redundant_rw << ',' << s.patterns << ',' << s.masked_skips << ','
       << format_ms(s.wall_ms) << '\n';
  }
}

void write_scatter(std::ostream& os, const std::vector<RunRecord>& records,
                   const std::string& config_a, const std::string& config_b,
                   double timeout_seconds) {
  std::map<std::string, std::pair<std::optional<double>, std::optional<double>>>
      times;
  auto seconds = [&](const RunRecord& r) {
    return r.verdict == "unsat" ? r.stats.wall_ms / 1000.0 : timeout_seconds;
  };
  for (const RunRecord& r : records) {
    if (r.config == config_a) times[r.problem].first = seconds(r);
    if (r.config == config_b) times[r.problem].second = seconds(r);
  }
  os << "problem," << config_a << ',' << config_b << '\n';
  char buf[64];
  for (const auto& [problem, ab] : times) {
    if (!ab.first || !ab.second) continue;
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f", *ab.first, *ab.second);
    os << problem << ',' << buf << '\n';
  }
}

}  // namespace enuminst
