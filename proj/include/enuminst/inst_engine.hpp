#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "enuminst/ground_solver.hpp"
#include "enuminst/pattern_trie.hpp"
#include "enuminst/terms.hpp"
#include "enuminst/tuple_enum.hpp"

namespace enuminst {

enum class Redundancy {
  NotRedundant,
  DuplicateVector,   // the index tuple was instantiated before
  Entailed,          // every instance clause is true in the ground model
  DuplicateFormula,  // every normalized instance clause was produced before
};

std::string_view to_string(Redundancy r);

/// keep[i] set means variable i's binding is part of the blocked class.
struct FailMask {
  std::vector<bool> keep;
  /// The generalization holds by the duplicate-formula criterion alone, so it
  /// stays valid in later rounds. Otherwise it relies on the current model.
  bool history_based = false;

  std::string bits() const;
};

struct EngineConfig {
  Strategy strategy = MaxDigit{};
  std::optional<std::uint64_t> max_rounds;
  std::uint32_t instances_per_round = 1;  // per formula
  bool failmask = true;
  /// Polled between rounds only.
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct EngineStats {
  std::uint64_t rounds = 0;
  std::uint64_t instances = 0;
  std::uint64_t tuples = 0;          // pulled from enumerators
  std::uint64_t tuples_checked = 0;  // submitted to redundancy checking
  std::uint64_t redundant_dup = 0;
  std::uint64_t redundant_ent = 0;
  std::uint64_t redundant_rw = 0;
  std::uint64_t patterns = 0;
  std::uint64_t masked_skips = 0;
  double wall_ms = 0;
  GroundStats ground;
};

enum class Outcome { Unsat, Unknown };
enum class UnknownReason { Saturated, RoundLimit, Timeout };

struct SolveResult {
  Outcome outcome = Outcome::Unknown;
  std::optional<UnknownReason> reason;
  EngineStats stats;

  std::string_view verdict() const;  // "unsat" or "unknown"
};

struct InstanceRecord {
  std::uint64_t round = 0;
  std::size_t formula = 0;
  IndexTuple tuple;
  std::vector<TermId> terms;
  std::vector<Clause> clauses;
};

/// The instantiation loop over one problem. Owns the problem, the ground
/// solver, and per-formula enumeration and redundancy state.
class Engine {
 public:
  Engine(Problem problem, EngineConfig config);
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  SolveResult solve();

  GroundVerdict check_ground();
  /// One pass over all quantified formulas in input order; returns the
  /// instances asserted. Requires the last ground check to be Sat.
  std::vector<InstanceRecord> instantiation_round();

  /// Appends newly discovered ground terms to the candidate sequences.
  void refresh_candidates();
  /// Ground terms of `sort` ordered by size, then first discovery, within
  /// each discovery batch; issued indices never move.
  const std::vector<TermId>& candidate_terms(SortId sort) const;
  Bounds bounds_for(std::size_t formula) const;

  Substitution substitution_for(std::size_t formula, const IndexTuple& t) const;
  std::optional<IndexTuple> tuple_for(std::size_t formula,
                                      const Substitution& sigma) const;

  /// Criteria in increasing cost: duplicate vector, entailed, duplicate
  /// formula modulo normalization. Reports the first that fires.
  Redundancy is_redundant(std::size_t formula, const IndexTuple& t);
  /// Entailment or duplicate-formula check on a possibly partial
  /// substitution; NotRedundant if neither holds for every extension.
  Redundancy generalized_redundancy(std::size_t formula,
                                    const Substitution& sigma);
  /// Greedy left-to-right generalization of a failed tuple. Throws
  /// ContractViolation unless the tuple is redundant by entailment or
  /// duplicate formula.
  FailMask compute_fail_mask(std::size_t formula, const IndexTuple& t);
  void block_pattern(std::size_t formula, const IndexTuple& t,
                     const FailMask& mask);
  bool is_blocked(std::size_t formula, const IndexTuple& t) const;
  /// Asserts the instance for `t` and records it for criteria 1 and 3.
  InstanceRecord commit_instance(std::size_t formula, const IndexTuple& t);

  const Problem& problem() const { return problem_; }
  TermStore& terms() { return problem_.terms; }
  const GroundSolver& ground() const { return ground_; }
  const EngineStats& stats() const { return stats_; }
  const EngineConfig& config() const { return config_; }
  const std::vector<InstanceRecord>& instance_log() const { return log_; }
  std::uint64_t round() const { return round_; }

  /// Patterns currently blocking `formula`: model-scoped ones first.
  std::vector<WildcardPattern> round_patterns(std::size_t formula) const;
  std::vector<WildcardPattern> history_patterns(std::size_t formula) const;

 private:
  struct FormulaState {
    std::unique_ptr<Enumerator> enumerator;
    VectorTrie vectors;
    PatternTrie round_patterns;    // cleared when a round starts
    PatternTrie history_patterns;  // permanent
    std::set<Clause> produced;     // normalized instance clauses
    bool blocked_this_round = false;
    bool blocked_forever = false;

    explicit FormulaState(std::size_t arity)
        : vectors(arity), round_patterns(arity), history_patterns(arity) {}
  };

  void discover(TermId t);
  bool entailed(const std::vector<Clause>& clauses) const;
  bool duplicate(std::size_t formula, const std::vector<Clause>& clauses);
  std::size_t process_formula(std::size_t formula,
                              std::vector<InstanceRecord>& out);

  Problem problem_;
  EngineConfig config_;
  GroundSolver ground_;
  std::vector<FormulaState> formulas_;

  std::vector<std::vector<TermId>> candidates_;  // by sort id
  std::set<TermId> discovered_;
  std::vector<TermId> pending_;

  std::vector<InstanceRecord> log_;
  EngineStats stats_;
  std::uint64_t round_ = 0;
  bool last_check_sat_ = false;
};

/// Flat key=value lines.
void write_stats(std::ostream& os, const SolveResult& result);

}  // namespace enuminst
