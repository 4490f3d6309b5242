#include "enuminst/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

#include "enuminst/bench.hpp"
#include "enuminst/errors.hpp"
#include "enuminst/parser.hpp"

namespace enuminst {
namespace {

struct SolveArgs {
  std::string path;
  std::string strategy = "u";
  bool no_failmask = false;
  std::uint64_t max_rounds = 0;
  bool stats = false;
};

struct EnumerateArgs {
  std::size_t vars = 0;
  std::optional<Index> max;
  std::string bounds;
  std::string strategy = "u";
  std::uint64_t limit = 0;
};

struct BenchArgs {
  std::string dir;
  std::string strategies;
  double timeout = 10.0;
  unsigned jobs = 1;
  std::string csv;
  std::vector<std::string> scatter;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  std::ifstream in(a.path, std::ios::binary);
  if (!in) {
    err << "error: cannot read " << a.path << '\n';
    return kExitInputError;
  }
  std::stringstream text;
  text << in.rdbuf();
  EngineConfig cfg;
  try {
    cfg.strategy = parse_strategy(a.strategy);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  cfg.failmask = !a.no_failmask;
  if (a.max_rounds > 0) cfg.max_rounds = a.max_rounds;
  try {
    Engine engine(parse_problem(text.str()), cfg);
    SolveResult result = engine.solve();
    out << result.verdict() << '\n';
    if (a.stats) write_stats(err, result);
  } catch (const ParseError& e) {
    err << a.path << ":" << e.what() << '\n';
    return kExitInputError;
  }
  return kExitOk;
}

int cmd_enumerate(const EnumerateArgs& a, std::ostream& out, std::ostream& err) {
  if (a.vars == 0) {
    err << "error: --vars must be >= 1\n";
    return kExitInputError;
  }
  std::vector<Index> max;
  if (a.max && !a.bounds.empty()) {
    err << "error: give either --max or --bounds\n";
    return kExitInputError;
  }
  if (a.max) {
    max.assign(a.vars, *a.max);
  } else if (!a.bounds.empty()) {
    for (const std::string& cell : split(a.bounds, ',')) {
      Index v{};
      auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || p != cell.data() + cell.size() || cell.empty()) {
        err << "error: malformed bounds '" << a.bounds << "'\n";
        return kExitInputError;
      }
      max.push_back(v);
    }
    if (max.size() != a.vars) {
      err << "error: --bounds needs " << a.vars << " entries\n";
      return kExitInputError;
    }
  } else {
    err << "error: one of --max or --bounds is required\n";
    return kExitInputError;
  }
  Strategy strategy;
  try {
    strategy = parse_strategy(a.strategy);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  Enumerator e(strategy, Bounds(std::move(max)));
  for (std::uint64_t i = 0; i < a.limit; ++i) {
    auto t = e.next();
    if (!t) break;
    out << to_string(*t) << '\n';
  }
  return kExitOk;
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<RunConfig> configs;
  try {
    for (const std::string& label : split(a.strategies, ',')) {
      configs.push_back(parse_run_config(label));
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  if (configs.empty()) {
    err << "error: --strategies is empty\n";
    return kExitInputError;
  }
  std::vector<std::filesystem::path> problems;
  try {
    problems = list_problems(a.dir);
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  std::vector<RunRecord> records;
  try {
    records = run_corpus(problems, configs, a.timeout, a.jobs);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  std::ofstream csv(a.csv, std::ios::binary);
  if (!csv) {
    err << "error: cannot write " << a.csv << '\n';
    return kExitInputError;
  }
  write_csv(csv, records);
  if (!a.scatter.empty()) {
    auto pair = split(a.scatter[0], ',');
    if (pair.size() != 2) {
      err << "error: --scatter expects A,B PATH\n";
      return kExitInputError;
    }
    std::ofstream sc(a.scatter[1], std::ios::binary);
    if (!sc) {
      err << "error: cannot write " << a.scatter[1] << '\n';
      return kExitInputError;
    }
    write_scatter(sc, records, pair[0], pair[1], a.timeout);
  }
  std::size_t solved = 0;
  for (const RunRecord& r : records) solved += r.verdict == "unsat";
  out << records.size() << " runs, " << solved << " unsat\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Enumerative quantifier instantiation for EUF"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Refute a problem by instantiation");
  s->add_option("file", solve.path, "Input problem")->required();
  s->add_option("--strategy", solve.strategy, "u, sum, lmax, id:<k> or rwlk:<seed>");
  s->add_flag("--no-failmask", solve.no_failmask, "Disable fail-mask blocking");
  s->add_option("--max-rounds", solve.max_rounds, "Round budget (0 = unbounded)");
  s->add_flag("--stats", solve.stats, "Print statistics to stderr");

  EnumerateArgs en;
  auto* e = app.add_subcommand("enumerate", "Print tuples in strategy order");
  e->add_option("--vars", en.vars, "Tuple arity")->required();
  e->add_option("--max", en.max, "Uniform inclusive maximum index");
  e->add_option("--bounds", en.bounds, "Per-position maxima M1,M2,...");
  e->add_option("--strategy", en.strategy, "u, sum, lmax, id:<k> or rwlk:<seed>")
      ->required();
  e->add_option("--limit", en.limit, "Maximum number of tuples")->required();

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Run a corpus across configurations");
  b->add_option("dir", bench.dir, "Directory of .smt2 problems")->required();
  b->add_option("--strategies", bench.strategies,
                "Comma-separated configurations, e.g. u,u-no-failmask,sum")
      ->required();
  b->add_option("--timeout", bench.timeout, "Per-run wall timeout in seconds");
  b->add_option("--jobs", bench.jobs, "Worker threads");
  b->add_option("--csv", bench.csv, "Output CSV path")->required();
  b->add_option("--scatter", bench.scatter, "A,B PATH")->expected(2);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& pe) {
    err << "error: " << pe.what() << '\n';
    return kExitInputError;
  }
  if (*s) return cmd_solve(solve, out, err);
  if (*e) return cmd_enumerate(en, out, err);
  return cmd_bench(bench, out, err);
}

}  // namespace enuminst
