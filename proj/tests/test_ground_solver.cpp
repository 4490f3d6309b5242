#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "enuminst/errors.hpp"
#include "enuminst/ground_solver.hpp"
#include "enuminst/parser.hpp"
#include "oracles.hpp"

using namespace enuminst;

namespace {

struct Fixture {
  TermStore ts;
  SortId u = ts.declare_sort("U");
  SymbolId f = ts.declare_symbol("f", {u}, u);
  SymbolId R = ts.declare_symbol("R", {u}, TermStore::bool_sort());
  SymbolId S = ts.declare_symbol("S", {u}, TermStore::bool_sort());
  TermId a = ts.app(ts.declare_symbol("a", {}, u));
  TermId b = ts.app(ts.declare_symbol("b", {}, u));
  TermId c = ts.app(ts.declare_symbol("c", {}, u));

  TermId ap(SymbolId s, TermId x) { return ts.app(s, std::span(&x, 1)); }
  static Clause unit(TermId atom, bool pos = true) { return Clause{{{atom, pos}}}; }
};

bool satisfied(GroundSolver& s, const Clause& c) {
  for (const Literal& l : c.literals) {
    auto v = s.value_of(l);
    if (v && *v) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("toy ground set is satisfiable until the instance arrives") {
  Fixture x;
  GroundSolver s(x.ts);
  s.assert_clause(Fixture::unit(x.ap(x.R, x.a)));
  s.assert_clause(Fixture::unit(x.ap(x.S, x.b), false));
  s.assert_clause(Fixture::unit(x.ts.eq(x.a, x.b)));
  REQUIRE(s.check() == GroundVerdict::Sat);
  CHECK(s.value_of({x.ap(x.R, x.a), true}) == true);
  CHECK(s.value_of({x.ts.eq(x.a, x.a), true}) == true);
  CHECK(s.value_of({x.ts.eq(x.b, x.a), true}) == true);
  // S(a) is decided through a = b and the asserted S(b)
  CHECK(s.value_of({x.ap(x.S, x.a), true}) == false);
  CHECK_FALSE(s.value_of({x.ap(x.R, x.c), true}).has_value());
  CHECK_FALSE(s.value_of({x.ap(x.R, x.ap(x.f, x.c)), true}).has_value());

  s.assert_clause(Clause{{{x.ap(x.R, x.a), false}, {x.ap(x.S, x.a), true}}});
  CHECK(s.check() == GroundVerdict::Unsat);
  CHECK_THROWS_AS(s.value_of({x.ap(x.R, x.a), true}), ContractViolation);
}

TEST_CASE("empty clause") {
  Fixture x;
  GroundSolver s(x.ts);
  s.assert_clause(Clause{});
  CHECK(s.check() == GroundVerdict::Unsat);
}

TEST_CASE("true clauses are dropped") {
  Fixture x;
  GroundSolver s(x.ts);
  s.assert_clause(Fixture::unit(x.ts.eq(x.a, x.a)));
  CHECK(s.clauses().empty());
  CHECK(s.check() == GroundVerdict::Sat);
}

TEST_CASE("function congruence") {
  Fixture x;
  GroundSolver s(x.ts);
  s.assert_clause(Fixture::unit(x.ts.eq(x.a, x.b)));
  s.assert_clause(Fixture::unit(x.ts.eq(x.ap(x.f, x.a), x.ap(x.f, x.b)), false));
  CHECK(s.check() == GroundVerdict::Unsat);
}

TEST_CASE("predicate congruence") {
  Fixture x;
  GroundSolver s(x.ts);
  s.assert_clause(Fixture::unit(x.ap(x.R, x.a)));
  s.assert_clause(Fixture::unit(x.ap(x.R, x.b), false));
  s.assert_clause(Fixture::unit(x.ts.eq(x.a, x.b)));
  CHECK(s.check() == GroundVerdict::Unsat);
}

TEST_CASE("non-ground clauses are rejected") {
  Fixture x;
  GroundSolver s(x.ts);
  CHECK_THROWS_AS(s.assert_clause(Fixture::unit(x.ap(x.R, x.ts.var(x.u, 0)))),
                  ContractViolation);
}

TEST_CASE("value_of before any check") {
  Fixture x;
  GroundSolver s(x.ts);
  CHECK_THROWS_AS(s.value_of({x.ap(x.R, x.a), true}), ContractViolation);
}

TEST_CASE("disjunctive reasoning needs theory lemmas") {
  Fixture x;
  GroundSolver s(x.ts);
  TermId fa = x.ap(x.f, x.a), fb = x.ap(x.f, x.b), fc = x.ap(x.f, x.c);
  s.assert_clause(Clause{{{x.ts.eq(x.a, x.b), true}, {x.ts.eq(x.a, x.c), true}}});
  s.assert_clause(Fixture::unit(x.ts.eq(fa, fb), false));
  REQUIRE(s.check() == GroundVerdict::Sat);
  CHECK(s.value_of({x.ts.eq(x.a, x.c), true}) == true);
  s.assert_clause(Fixture::unit(x.ts.eq(fa, fc), false));
  CHECK(s.check() == GroundVerdict::Unsat);
}

TEST_CASE("agrees with the brute-force oracle on random problems") {
  std::mt19937 rng(2024);
  int sat = 0, unsat = 0;
  for (int i = 0; i < 1000; ++i) {
    oracle::RandomEuf gen(rng);
    auto clauses = gen.clauses(rng);
    bool expected = oracle::brute_force_sat(gen.ts, clauses);
    GroundSolver s(gen.ts);
    s.assert_clauses(clauses);
    GroundVerdict v = s.check();
    CHECK((v == GroundVerdict::Sat) == expected);
    (expected ? sat : unsat)++;
    if (v == GroundVerdict::Sat) {
      for (const Clause& c : clauses) {
        CHECK((normalize(gen.ts, c).tautology || satisfied(s, c)));
      }
    }
  }
  CHECK(sat > 30);
  CHECK(unsat > 30);
}

TEST_CASE("unsat is monotone") {
  std::mt19937 rng(99);
  for (int i = 0; i < 100; ++i) {
    oracle::RandomEuf gen(rng);
    GroundSolver s(gen.ts);
    s.assert_clauses(gen.clauses(rng));
    if (s.check() != GroundVerdict::Unsat) continue;
    s.assert_clauses(gen.clauses(rng));
    CHECK(s.check() == GroundVerdict::Unsat);
  }
}

TEST_CASE("congruence closure matches the fixpoint oracle") {
  std::mt19937 rng(8);
  for (int i = 0; i < 200; ++i) {
    oracle::RandomEuf gen(rng);
    CongruenceClosure cc(gen.ts);
    oracle::FixpointClosure ref(gen.ts, gen.terms);
    for (TermId t : gen.terms) cc.add_term(t);
    std::size_t merges = rng() % 4;
    for (std::size_t k = 0; k < merges; ++k) {
      TermId l = gen.terms[rng() % gen.terms.size()];
      TermId r = gen.terms[rng() % gen.terms.size()];
      cc.merge(l, r);
      ref.equate(l, r);
    }
    cc.close();
    const auto& ts = gen.terms;
    for (TermId p : ts) {
      CHECK(cc.equal(p, p));
      for (TermId q : ts) {
        CHECK(cc.equal(p, q) == ref.equal(p, q));
        CHECK(cc.equal(p, q) == cc.equal(q, p));
        for (TermId r : ts) {
          if (cc.equal(p, q) && cc.equal(q, r)) CHECK(cc.equal(p, r));
        }
        const auto& np = gen.ts.node(p);
        const auto& nq = gen.ts.node(q);
        if (np.symbol == nq.symbol && !np.args.empty()) {
          bool args_equal = true;
          for (std::size_t k = 0; k < np.args.size(); ++k) {
            args_equal = args_equal && cc.equal(np.args[k], nq.args[k]);
          }
          if (args_equal) CHECK(cc.equal(p, q));
        }
      }
    }
  }
}

TEST_CASE("models satisfy every clause of the corpus ground parts") {
  for (const auto& entry : std::filesystem::directory_iterator(ENUMINST_CORPUS_DIR)) {
    if (entry.path().extension() != ".smt2") continue;
    std::ifstream in(entry.path());
    std::stringstream text;
    text << in.rdbuf();
    Problem p = parse_problem(text.str());
    GroundSolver s(p.terms);
    s.assert_clauses(p.ground);
    if (s.check() != GroundVerdict::Sat) continue;
    for (const Clause& c : s.clauses()) CHECK(satisfied(s, c));
  }
}
