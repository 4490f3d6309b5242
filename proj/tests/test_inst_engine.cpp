#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "enuminst/errors.hpp"
#include "enuminst/inst_engine.hpp"
#include "enuminst/parser.hpp"
#include "oracles.hpp"

using namespace enuminst;

namespace {

constexpr const char* kToy = R"(
(declare-sort U 0) (declare-const a U) (declare-const b U)
(declare-fun R (U) Bool) (declare-fun S (U) Bool)
(assert (R a)) (assert (not (S b))) (assert (= a b))
(assert (forall ((x U)) (=> (R x) (S x))))
)";

constexpr const char* kWorked = R"(
(declare-sort U 0) (declare-const a U) (declare-const b U) (declare-const c U)
(declare-fun P (U U) Bool) (declare-fun Q (U U) Bool)
(assert (P a b)) (assert (not (Q b c)))
(assert (forall ((x1 U) (x2 U) (x3 U)) (or (P x1 x2) (Q x2 x3))))
)";

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::filesystem::path> corpus() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(ENUMINST_CORPUS_DIR)) {
    if (e.path().extension() == ".smt2") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

EngineConfig config(const std::string& strategy, bool failmask = true,
                    std::optional<std::uint64_t> rounds = 200) {
  EngineConfig c;
  c.strategy = parse_strategy(strategy);
  c.failmask = failmask;
  c.max_rounds = rounds;
  return c;
}

TermId constant(Engine& e, const char* name) {
  return e.terms().app(*e.terms().find_symbol(name));
}

// Instances per round, as (formula, printed bound terms); term ids are not
// comparable across engines.
using RoundLog = std::vector<std::set<std::pair<std::size_t, std::vector<std::string>>>>;

RoundLog per_round(const Engine& e) {
  RoundLog out(e.round() + 1);
  for (const auto& r : e.instance_log()) {
    std::vector<std::string> terms;
    for (TermId t : r.terms) terms.push_back(e.problem().terms.to_string(t));
    out[r.round].insert({r.formula, terms});
  }
  return out;
}

}  // namespace

TEST_CASE("worked example: entailed, then fail mask 110") {
  Engine e(parse_problem(kWorked), config("u"));
  REQUIRE(e.check_ground() == GroundVerdict::Sat);
  IndexTuple t{0, 1, 2};
  Substitution sigma = e.substitution_for(0, t);
  CHECK(*sigma[0] == constant(e, "a"));
  CHECK(*sigma[1] == constant(e, "b"));
  CHECK(*sigma[2] == constant(e, "c"));
  CHECK(e.is_redundant(0, t) == Redundancy::Entailed);
  FailMask m = e.compute_fail_mask(0, t);
  CHECK(m.bits() == "110");
  CHECK_FALSE(m.history_based);
  e.block_pattern(0, t, m);
  auto ps = e.round_patterns(0);
  REQUIRE(ps.size() == 1);
  std::ostringstream os;
  os << ps[0];
  CHECK(os.str() == "0 1 ?");
  for (Index k = 0; k < 3; ++k) CHECK(e.is_blocked(0, {0, 1, k}));
  CHECK_FALSE(e.is_blocked(0, {1, 1, 2}));
}

TEST_CASE("a committed tuple is a duplicate vector afterwards") {
  Engine e(parse_problem(kWorked), config("u"));
  REQUIRE(e.check_ground() == GroundVerdict::Sat);
  IndexTuple t{2, 2, 2};
  CHECK(e.is_redundant(0, t) == Redundancy::NotRedundant);
  e.commit_instance(0, t);
  CHECK(e.is_redundant(0, t) == Redundancy::DuplicateVector);
}

TEST_CASE("the toy instance is not redundant") {
  Engine e(parse_problem(kToy), config("u"));
  REQUIRE(e.check_ground() == GroundVerdict::Sat);
  CHECK(e.is_redundant(0, {0}) == Redundancy::NotRedundant);
  CHECK_THROWS_AS(e.compute_fail_mask(0, {0}), ContractViolation);
}

TEST_CASE("an unused variable is dropped from the mask") {
  Engine e(parse_problem(R"(
(declare-sort U 0) (declare-const a U) (declare-const b U) (declare-const c U)
(declare-fun P (U U) Bool)
(assert (P a b))
(assert (forall ((x1 U) (x2 U) (x3 U)) (P x1 x2)))
)"),
           config("u"));
  REQUIRE(e.check_ground() == GroundVerdict::Sat);
  CHECK(e.is_redundant(0, {0, 1, 2}) == Redundancy::Entailed);
  CHECK(e.compute_fail_mask(0, {0, 1, 2}).bits() == "110");
}

TEST_CASE("a duplicate formula yields a persistent pattern") {
  Engine e(parse_problem(R"(
(declare-sort U 0) (declare-const a U) (declare-const b U)
(declare-fun P (U) Bool)
(assert (forall ((x U) (y U)) (P x)))
)"),
           config("u"));
  REQUIRE(e.check_ground() == GroundVerdict::Sat);
  e.commit_instance(0, {0, 0});
  REQUIRE(e.check_ground() == GroundVerdict::Sat);
  // P(a) is now true in the model, so entailment fires before rewriting
  CHECK(e.is_redundant(0, {0, 1}) == Redundancy::Entailed);
  FailMask m = e.compute_fail_mask(0, {0, 1});
  CHECK(m.bits() == "10");
  CHECK(m.history_based);
  e.block_pattern(0, {0, 1}, m);
  CHECK(e.history_patterns(0).size() == 1);
  CHECK(e.round_patterns(0).empty());
}

TEST_CASE("an all-ones mask stores a concrete pattern") {
  Engine e(parse_problem(R"(
(declare-sort U 0) (declare-const a U) (declare-const b U)
(declare-fun P (U U) Bool)
(assert (P a a))
(assert (forall ((x U) (y U)) (or (P x y) (= x y))))
)"),
           config("u"));
  REQUIRE(e.check_ground() == GroundVerdict::Sat);
  CHECK(e.is_redundant(0, {0, 0}) != Redundancy::NotRedundant);
  FailMask m = e.compute_fail_mask(0, {0, 0});
  CHECK(m.bits() == "11");
  e.block_pattern(0, {0, 0}, m);
  CHECK(e.is_blocked(0, {0, 0}));
  CHECK_FALSE(e.is_blocked(0, {0, 1}));
}

TEST_CASE("candidate sequences") {
  Engine toy(parse_problem(kToy), config("u"));
  SortId u = *toy.terms().find_sort("U");
  CHECK(toy.candidate_terms(u) ==
        std::vector<TermId>{constant(toy, "a"), constant(toy, "b")});

  Engine grow(parse_problem(R"(
(declare-sort U 0) (declare-const a U) (declare-const b U)
(declare-fun f (U) U) (declare-fun P (U) Bool)
(assert (not (P b)))
(assert (forall ((x U)) (P (f x))))
)"),
              config("u"));
  REQUIRE(grow.check_ground() == GroundVerdict::Sat);
  grow.commit_instance(0, {0});
  grow.refresh_candidates();
  TermId a = constant(grow, "a");
  TermId fa = grow.terms().app(*grow.terms().find_symbol("f"), std::span(&a, 1));
  CHECK(grow.candidate_terms(u) == std::vector<TermId>{a, constant(grow, "b"), fa});
  CHECK(grow.bounds_for(0) == Bounds({2}));

  Engine single(parse_problem(R"(
(declare-sort V 0) (declare-const c V) (declare-fun P (V) Bool)
(assert (forall ((x V)) (P x)))
)"),
                config("u"));
  CHECK(single.candidate_terms(*single.terms().find_sort("V")).size() == 1);
}

TEST_CASE("toy round asserts the single instance") {
  Engine e(parse_problem(kToy), config("u"));
  REQUIRE(e.check_ground() == GroundVerdict::Sat);
  auto round = e.instantiation_round();
  REQUIRE(round.size() == 1);
  CHECK(round[0].tuple == IndexTuple{0});
  REQUIRE(round[0].clauses.size() == 1);
  CHECK(round[0].clauses[0].literals.size() == 2);
  CHECK(e.check_ground() == GroundVerdict::Unsat);
}

TEST_CASE("toy refutation under every strategy") {
  for (const std::string& s : {"u", "sum", "lmax", "id:1", "id:2", "rwlk:7", "rwlk:0"}) {
    CAPTURE(s);
    Engine e(parse_problem(kToy), config(s));
    SolveResult r = e.solve();
    CHECK(r.outcome == Outcome::Unsat);
    CHECK(r.stats.rounds <= 2);
    CHECK(r.stats.instances == 1);
  }
}

TEST_CASE("solve end states") {
  SUBCASE("ground-only unsat needs no instance") {
    Engine e(parse_problem(R"(
(declare-sort U 0) (declare-const a U) (declare-fun P (U) Bool)
(assert (P a)) (assert (not (P a)))
)"),
             config("u"));
    SolveResult r = e.solve();
    CHECK(r.outcome == Outcome::Unsat);
    CHECK(r.stats.rounds == 0);
    CHECK(r.stats.instances == 0);
  }
  SUBCASE("no quantified formulas saturates at once") {
    Engine e(parse_problem("(declare-sort U 0) (declare-const a U)"), config("u"));
    REQUIRE(e.check_ground() == GroundVerdict::Sat);
    CHECK(e.instantiation_round().empty());
  }
  SUBCASE("an entailed only tuple saturates") {
    Engine e(parse_problem(R"(
(declare-sort U 0) (declare-const a U) (declare-fun P (U) Bool)
(assert (P a)) (assert (forall ((x U)) (P x)))
)"),
             config("u"));
    SolveResult r = e.solve();
    CHECK(r.outcome == Outcome::Unknown);
    CHECK(r.reason == UnknownReason::Saturated);
    CHECK(r.stats.redundant_ent == 1);
    CHECK(r.stats.instances == 0);
  }
  SUBCASE("round limit") {
    Engine e(parse_problem(R"(
(declare-sort U 0) (declare-const a U) (declare-fun f (U) U) (declare-fun P (U) Bool)
(assert (P a)) (assert (forall ((x U)) (P (f x))))
)"),
             config("u", true, 3));
    SolveResult r = e.solve();
    CHECK(r.outcome == Outcome::Unknown);
    CHECK(r.reason == UnknownReason::RoundLimit);
    CHECK(r.stats.rounds == 3);
  }
  SUBCASE("instantiation before a Sat check is rejected") {
    Engine e(parse_problem(kToy), config("u"));
    CHECK_THROWS_AS(e.instantiation_round(), ContractViolation);
  }
}

TEST_CASE("corpus: derivation replay, progress and determinism") {
  for (const auto& path : corpus()) {
    for (const std::string& s : {"u", "sum", "lmax", "id:2", "rwlk:7"}) {
      CAPTURE(path.filename().string());
      CAPTURE(s);
      Engine e(parse_problem(read(path)), config(s));
      SolveResult r = e.solve();

      std::set<std::pair<std::size_t, IndexTuple>> tuples;
      for (const InstanceRecord& rec : e.instance_log()) {
        const QuantifiedFormula& f = e.problem().quantified.at(rec.formula);
        Substitution sigma(f.arity());
        for (std::size_t i = 0; i < rec.terms.size(); ++i) sigma.bind(i, rec.terms[i]);
        CHECK(apply_substitution(e.terms(), f, sigma) == rec.clauses);
        CHECK(tuples.insert({rec.formula, rec.tuple}).second);
      }
      std::set<std::uint64_t> rounds_with_instances;
      for (const InstanceRecord& rec : e.instance_log()) {
        rounds_with_instances.insert(rec.round);
      }
      // every round but a final saturated one asserts something
      std::uint64_t productive = r.reason == UnknownReason::Saturated ? r.stats.rounds - 1
                                                                       : r.stats.rounds;
      CHECK(rounds_with_instances.size() == productive);

      Engine again(parse_problem(read(path)), config(s));
      SolveResult r2 = again.solve();
      CHECK(r2.outcome == r.outcome);
      CHECK(r2.stats.rounds == r.stats.rounds);
      CHECK(r2.stats.instances == r.stats.instances);
      CHECK(r2.stats.tuples == r.stats.tuples);
      CHECK(r2.stats.patterns == r.stats.patterns);
      CHECK(r2.stats.masked_skips == r.stats.masked_skips);
      CHECK(per_round(again) == per_round(e));
    }
  }
}

TEST_CASE("corpus: masking never changes the instances asserted") {
  for (const auto& path : corpus()) {
    for (const std::string& s : {"u", "sum", "lmax", "id:2", "rwlk:7"}) {
      CAPTURE(path.filename().string());
      CAPTURE(s);
      Engine on(parse_problem(read(path)), config(s, true));
      Engine off(parse_problem(read(path)), config(s, false));
      SolveResult a = on.solve();
      SolveResult b = off.solve();
      CHECK(a.outcome == b.outcome);
      CHECK(per_round(on) == per_round(off));
      CHECK(a.stats.tuples_checked <= b.stats.tuples_checked);
      CHECK(b.stats.masked_skips == 0);
    }
  }
}

TEST_CASE("corpus: stored patterns only cover redundant tuples") {
  std::mt19937 rng(1);
  for (const auto& path : corpus()) {
    CAPTURE(path.filename().string());
    Engine e(parse_problem(read(path)), config("u"));
    for (int round = 0; round < 40; ++round) {
      if (e.check_ground() == GroundVerdict::Unsat) break;
      if (e.instantiation_round().empty()) break;
      for (std::size_t f = 0; f < e.problem().quantified.size(); ++f) {
        auto patterns = e.round_patterns(f);
        auto history = e.history_patterns(f);
        patterns.insert(patterns.end(), history.begin(), history.end());
        Bounds b = e.bounds_for(f);
        for (const WildcardPattern& p : patterns) {
          for (int k = 0; k < 100; ++k) {
            std::vector<Index> d(p.size());
            for (std::size_t i = 0; i < p.size(); ++i) {
              d[i] = p[i] ? *p[i] : static_cast<Index>(rng() % (b.max(i) + 1));
            }
            CHECK(e.generalized_redundancy(f, e.substitution_for(f, IndexTuple(d))) !=
                  Redundancy::NotRedundant);
          }
        }
      }
    }
  }
}

TEST_CASE("corpus: entailed instances do not change the ground verdict") {
  for (const auto& path : corpus()) {
    CAPTURE(path.filename().string());
    Engine e(parse_problem(read(path)), config("sum"));
    for (int round = 0; round < 10; ++round) {
      if (e.check_ground() == GroundVerdict::Unsat) break;
      for (std::size_t f = 0; f < e.problem().quantified.size(); ++f) {
        e.refresh_candidates();
        Bounds b = e.bounds_for(f);
        if (b.volume() > 400) continue;
        for (const IndexTuple& t : oracle::all_tuples(b)) {
          if (e.is_redundant(f, t) != Redundancy::Entailed) continue;
          GroundSolver copy = e.ground();
          copy.assert_clauses(apply_substitution(e.terms(), e.problem().quantified[f],
                                                 e.substitution_for(f, t)));
          CHECK(copy.check() == GroundVerdict::Sat);
        }
      }
      if (e.instantiation_round().empty()) break;
    }
  }
}

TEST_CASE("stats block") {
  Engine e(parse_problem(kToy), config("u"));
  std::ostringstream os;
  write_stats(os, e.solve());
  CHECK(os.str().rfind("verdict=unsat\nrounds=1\ninstances=1\n", 0) == 0);
}
