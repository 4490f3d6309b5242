#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "enuminst/terms.hpp"

namespace enuminst {

/// Union-find over ground terms closed under congruence: f(a1..an) and
/// f(b1..bn) share a class whenever every ai shares a class with bi.
class CongruenceClosure {
 public:
  explicit CongruenceClosure(const TermStore& store) : store_(&store) {}

  /// Adds `t` and its subterms. Atoms contribute their arguments only.
  void add_term(TermId t);
  void merge(TermId a, TermId b);
  /// Propagates congruences to a fixpoint.
  void close();

  bool contains(TermId t) const { return parent_.contains(t); }
  /// Representative of a registered term.
  TermId find(TermId t) const;
  bool equal(TermId a, TermId b) const { return find(a) == find(b); }

  /// Representative for any ground term whose class is determined by the
  /// registered terms via congruence; nullopt otherwise. Requires close().
  std::optional<TermId> class_of(TermId t) const;

  const std::vector<TermId>& terms() const { return terms_; }

 private:
  using Signature = std::pair<SymbolId, std::vector<TermId>>;

  const TermStore* store_;
  mutable std::unordered_map<TermId, TermId> parent_;
  std::vector<TermId> terms_;
  std::map<Signature, TermId> signatures_;
};

enum class GroundVerdict { Sat, Unsat };

struct GroundStats {
  std::uint64_t checks = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t theory_conflicts = 0;
};

/// Ground EUF solver: chronological DPLL with unit propagation; complete
/// assignments are validated by congruence closure and theory conflicts come
/// back as lemma clauses.
class GroundSolver {
 public:
  explicit GroundSolver(TermStore& store) : store_(&store) {}

  /// Clauses are normalized first; TRUE clauses are dropped. Throws
  /// ContractViolation for non-ground clauses.
  void assert_clause(const Clause& c);
  void assert_clauses(std::span<const Clause> cs);

  GroundVerdict check();

  /// Truth of `lit` in the model of the most recent check(), with equalities
  /// and predicate arguments evaluated through that model's congruence
  /// closure. nullopt when the model does not determine it. Throws
  /// ContractViolation unless the most recent check() returned Sat.
  std::optional<bool> value_of(Literal lit) const;

  /// Boolean assignment of the last Sat check, one entry per atom.
  std::vector<std::pair<TermId, bool>> model() const;

  /// Normalized, non-trivial clauses asserted so far (lemmas excluded).
  const std::vector<Clause>& clauses() const { return asserted_; }
  const GroundStats& stats() const { return stats_; }
  std::size_t num_atoms() const { return atoms_.size(); }
  bool known_term(TermId t) const { return known_terms_.contains(t); }

 private:
  using Lit = std::uint32_t;  // 2 * var + (negative ? 1 : 0)

  Lit encode(Literal lit);
  std::uint32_t atom_var(TermId atom);
  void register_terms(TermId t);

  bool propagate();
  bool backtrack();
  void assign(Lit l);
  std::optional<std::vector<Lit>> theory_conflict(CongruenceClosure& cc);
  CongruenceClosure build_closure(std::span<const Lit> positive_eqs) const;

  TermStore* store_;
  std::vector<Clause> asserted_;
  std::vector<std::vector<Lit>> db_;  // asserted clauses and lemmas
  std::vector<TermId> atoms_;
  std::unordered_map<TermId, std::uint32_t> atom_vars_;
  std::unordered_set<TermId> known_terms_;
  std::vector<TermId> term_order_;
  bool inconsistent_ = false;

  // search state
  struct Decision {
    std::size_t trail_size;
    Lit lit;
    bool flipped;
  };
  std::vector<std::int8_t> values_;  // -1 unassigned, 0 false, 1 true
  std::vector<Lit> trail_;
  std::vector<Decision> decisions_;

  // model of the last Sat check
  bool has_model_ = false;
  std::vector<bool> model_values_;
  std::optional<CongruenceClosure> model_cc_;
  std::map<std::pair<SymbolId, std::vector<TermId>>, bool> model_predicates_;

  GroundStats stats_;
};

}  // namespace enuminst
