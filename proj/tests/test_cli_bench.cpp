#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "enuminst/bench.hpp"
#include "enuminst/cli.hpp"

using namespace enuminst;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string corpus(const std::string& name) {
  return (fs::path(ENUMINST_CORPUS_DIR) / name).string();
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "enuminst_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> rows(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    out.push_back(cells);
  }
  return out;
}

// CSV content with the trailing time column blanked.
std::string without_time(const std::string& csv) {
  std::string out;
  for (auto r : rows(csv)) {
    r.pop_back();
    for (const auto& c : r) out += c + ",";
    out += "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("enumerate prints golden prefixes") {
  Run r = cli({"enumerate", "--vars", "2", "--max", "2", "--strategy", "lmax", "--limit", "6"});
  CHECK(r.code == 0);
  CHECK(r.out == "0,0\n0,1\n1,0\n1,1\n0,2\n2,0\n");
  r = cli({"enumerate", "--vars", "2", "--max", "2", "--strategy", "id:2", "--limit", "6"});
  CHECK(r.out == "0,0\n0,1\n0,2\n1,1\n1,0\n2,0\n");
  r = cli({"enumerate", "--vars", "2", "--max", "2", "--strategy", "u", "--limit", "5"});
  CHECK(r.out == "0,0\n1,0\n0,1\n1,1\n2,0\n");
  r = cli({"enumerate", "--vars", "2", "--bounds", "0,2", "--strategy", "sum", "--limit", "9"});
  CHECK(r.out == "0,0\n0,1\n0,2\n");
}

TEST_CASE("enumerate edge cases") {
  Run r = cli({"enumerate", "--vars", "3", "--max", "2", "--strategy", "u", "--limit", "0"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(cli({"enumerate", "--vars", "2", "--bounds", "1,x", "--strategy", "u", "--limit", "3"})
            .code == 2);
  CHECK(cli({"enumerate", "--vars", "2", "--bounds", "1", "--strategy", "u", "--limit", "3"})
            .code == 2);
  CHECK(cli({"enumerate", "--vars", "2", "--strategy", "u", "--limit", "3"}).code == 2);
  CHECK(cli({"enumerate", "--vars", "2", "--max", "1", "--strategy", "zz", "--limit", "3"})
            .code == 2);
  CHECK(cli({"enumerate", "--vars", "0", "--max", "1", "--strategy", "u", "--limit", "3"})
            .code == 2);
  CHECK(cli({}).code == 2);
}

TEST_CASE("solve") {
  Run r = cli({"solve", corpus("toy.smt2"), "--strategy", "u"});
  CHECK(r.code == 0);
  CHECK(r.out == "unsat\n");
  CHECK(r.err.empty());
  r = cli({"solve", corpus("toy.smt2"), "--strategy", "rwlk:7", "--stats"});
  CHECK(r.out == "unsat\n");
  CHECK(r.err.find("instances=1\n") != std::string::npos);
  r = cli({"solve", corpus("saturating_01.smt2"), "--strategy", "sum", "--no-failmask"});
  CHECK(r.code == 0);
  CHECK(r.out == "unknown\n");
  r = cli({"solve", corpus("saturating_02.smt2"), "--strategy", "u", "--max-rounds", "1",
           "--stats"});
  CHECK(r.out == "unknown\n");
  CHECK(r.err.find("reason=round-limit") != std::string::npos);
  CHECK(cli({"solve", "/nonexistent/problem.smt2", "--strategy", "u"}).code == 2);

  fs::path bad = scratch("bad.smt2");
  std::ofstream(bad) << "(declare-sort U 0)\n(assert (P x))\n";
  r = cli({"solve", bad.string(), "--strategy", "u"});
  CHECK(r.code == 2);
  CHECK(r.err.find("2:") != std::string::npos);
}

TEST_CASE("bench writes one row per problem and configuration") {
  fs::path csv = scratch("bench.csv");
  fs::path scatter = scratch("scatter.csv");
  Run r = cli({"bench", ENUMINST_CORPUS_DIR, "--strategies", "u,sum,lmax,u-no-failmask",
               "--timeout", "60", "--jobs", "1", "--csv", csv.string(), "--scatter",
               "u,u-no-failmask", scatter.string()});
  REQUIRE(r.code == 0);
  std::string text = slurp(csv);
  auto table = rows(text);
  std::size_t problems = list_problems(ENUMINST_CORPUS_DIR).size();
  REQUIRE(table.size() == 1 + 4 * problems);
  CHECK(text.substr(0, text.find('\n')) == kCsvHeader);
  for (std::size_t i = 1; i < table.size(); ++i) {
    REQUIRE(table[i].size() == 13);
    const std::string& v = table[i][3];
    CHECK((v == "unsat" || v == "unknown" || v == "timeout"));
    CHECK(std::stod(table[i][12]) >= 0);
  }
  auto sc = rows(slurp(scatter));
  REQUIRE(sc.size() == 1 + problems);
  CHECK(sc[0] == std::vector<std::string>{"problem", "u", "u-no-failmask"});

  fs::path csv4 = scratch("bench4.csv");
  r = cli({"bench", ENUMINST_CORPUS_DIR, "--strategies", "u,sum,lmax,u-no-failmask",
           "--timeout", "60", "--jobs", "4", "--csv", csv4.string()});
  REQUIRE(r.code == 0);
  CHECK(without_time(slurp(csv4)) == without_time(text));
}

TEST_CASE("bench input errors") {
  fs::path csv = scratch("err.csv");
  CHECK(cli({"bench", "/nonexistent/dir", "--strategies", "u", "--csv", csv.string()}).code ==
        2);
  CHECK(cli({"bench", ENUMINST_CORPUS_DIR, "--strategies", "u,bogus", "--csv", csv.string()})
            .code == 2);
  CHECK(cli({"bench", ENUMINST_CORPUS_DIR, "--strategies", "u"}).code == 2);
}

TEST_CASE("run configuration labels") {
  RunConfig c = parse_run_config("id:3-no-failmask");
  CHECK_FALSE(c.failmask);
  CHECK(strategy_name(c.strategy) == "id:3");
  CHECK(parse_run_config("rwlk:9").failmask);
}
