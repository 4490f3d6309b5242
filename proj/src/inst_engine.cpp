#include "enuminst/inst_engine.hpp"

#include <algorithm>

#include "enuminst/errors.hpp"

namespace enuminst {

std::string_view to_string(Redundancy r) {
  switch (r) {
    case Redundancy::NotRedundant:
      return "not-redundant";
    case Redundancy::DuplicateVector:
      return "duplicate-vector";
    case Redundancy::Entailed:
      return "entailed";
    case Redundancy::DuplicateFormula:
      return "duplicate-formula";
  }
  return "?";
}

std::string FailMask::bits() const {
  std::string out;
  for (bool b : keep) out += b ? '1' : '0';
  return out;
}

std::string_view SolveResult::verdict() const {
  return outcome == Outcome::Unsat ? "unsat" : "unknown";
}

Engine::Engine(Problem problem, EngineConfig config)
    : problem_(std::move(problem)),
      config_(std::move(config)),
      ground_(problem_.terms) {
  if (config_.instances_per_round == 0) {
    throw ContractViolation("instances_per_round must be >= 1");
  }
  candidates_.resize(problem_.terms.num_sorts());
  for (TermId c : problem_.constants) discover(c);
  for (const Clause& c : problem_.ground) {
    for (const Literal& lit : c.literals) discover(lit.atom);
  }
  for (const QuantifiedFormula& f : problem_.quantified) {
    for (const Clause& c : f.body) {
      for (const Literal& lit : c.literals) discover(lit.atom);
    }
    formulas_.emplace_back(f.arity());
  }
  refresh_candidates();
  ground_.assert_clauses(problem_.ground);
}

void Engine::discover(TermId t) {
  const TermNode& n = problem_.terms.node(t);
  if (n.kind != TermKind::Variable) {
    for (TermId a : std::vector<TermId>(n.args)) discover(a);
  }
  if (!problem_.terms.is_ground(t) || problem_.terms.is_atom(t)) return;
  if (discovered_.insert(t).second) pending_.push_back(t);
}

void Engine::refresh_candidates() {
  if (pending_.empty()) return;
  const TermStore& ts = problem_.terms;
  // Ties keep discovery order: interning ids also depend on the terms built
  // while computing fail masks, discovery order does not.
  std::stable_sort(pending_.begin(), pending_.end(), [&](TermId a, TermId b) {
    return ts.node(a).size < ts.node(b).size;
  });
  if (candidates_.size() < ts.num_sorts()) candidates_.resize(ts.num_sorts());
  for (TermId t : pending_) candidates_[ts.sort_of(t).value].push_back(t);
  pending_.clear();
}

const std::vector<TermId>& Engine::candidate_terms(SortId sort) const {
  return candidates_.at(sort.value);
}

Bounds Engine::bounds_for(std::size_t formula) const {
  const QuantifiedFormula& f = problem_.quantified.at(formula);
  std::vector<Index> max;
  for (const BoundVariable& v : f.vars) {
    const auto& seq = candidate_terms(v.sort);
    if (seq.empty()) throw ContractViolation("empty candidate sequence");
    max.push_back(static_cast<Index>(seq.size() - 1));
  }
  return Bounds(std::move(max));
}

Substitution Engine::substitution_for(std::size_t formula,
                                      const IndexTuple& t) const {
  const QuantifiedFormula& f = problem_.quantified.at(formula);
  if (t.size() != f.arity()) throw ContractViolation("tuple arity mismatch");
  Substitution sigma(f.arity());
  for (std::size_t i = 0; i < f.arity(); ++i) {
    sigma.bind(i, candidate_terms(f.vars[i].sort).at(t[i]));
  }
  return sigma;
}

std::optional<IndexTuple> Engine::tuple_for(std::size_t formula,
                                            const Substitution& sigma) const {
  const QuantifiedFormula& f = problem_.quantified.at(formula);
  if (sigma.arity() != f.arity() || !sigma.is_total()) return std::nullopt;
  std::vector<Index> digits;
  for (std::size_t i = 0; i < f.arity(); ++i) {
    const auto& seq = candidate_terms(f.vars[i].sort);
    auto it = std::find(seq.begin(), seq.end(), *sigma[i]);
    if (it == seq.end()) return std::nullopt;
    digits.push_back(static_cast<Index>(it - seq.begin()));
  }
  return IndexTuple(std::move(digits));
}

// Every clause has a ground literal that the current model makes true.
bool Engine::entailed(const std::vector<Clause>& clauses) const {
  return std::all_of(clauses.begin(), clauses.end(), [&](const Clause& c) {
    return std::any_of(c.literals.begin(), c.literals.end(),
                       [&](const Literal& lit) {
                         if (!problem_.terms.is_ground(lit.atom)) return false;
                         auto v = ground_.value_of(lit);
                         return v && *v;
                       });
  });
}

bool Engine::duplicate(std::size_t formula, const std::vector<Clause>& clauses) {
  const auto& produced = formulas_.at(formula).produced;
  for (const Clause& c : clauses) {
    Clause n = normalize_with_placeholders(problem_.terms, c);
    if (!n.tautology && !produced.contains(n)) return false;
  }
  return true;
}

Redundancy Engine::is_redundant(std::size_t formula, const IndexTuple& t) {
  if (formulas_.at(formula).vectors.contains(t)) return Redundancy::DuplicateVector;
  Substitution sigma = substitution_for(formula, t);
  auto clauses = apply_substitution(problem_.terms,
                                    problem_.quantified[formula], sigma);
  if (entailed(clauses)) return Redundancy::Entailed;
  if (duplicate(formula, clauses)) return Redundancy::DuplicateFormula;
  return Redundancy::NotRedundant;
}

Redundancy Engine::generalized_redundancy(std::size_t formula,
                                          const Substitution& sigma) {
  auto clauses = apply_partial_substitution(
      problem_.terms, problem_.quantified.at(formula), sigma);
  if (entailed(clauses)) return Redundancy::Entailed;
  if (duplicate(formula, clauses)) return Redundancy::DuplicateFormula;
  return Redundancy::NotRedundant;
}

FailMask Engine::compute_fail_mask(std::size_t formula, const IndexTuple& t) {
  Substitution sigma = substitution_for(formula, t);
  Redundancy why = generalized_redundancy(formula, sigma);
  if (why == Redundancy::NotRedundant) {
    throw ContractViolation(
        "compute_fail_mask: tuple is not redundant by entailment or rewriting");
  }
  FailMask mask{std::vector<bool>(t.size(), true), false};
  for (std::size_t i = 0; i < t.size(); ++i) {
    TermId bound = *sigma[i];
    sigma.unbind(i);
    Redundancy r = generalized_redundancy(formula, sigma);
    if (r != Redundancy::NotRedundant) {
      mask.keep[i] = false;
      why = r;
    } else {
      sigma.bind(i, bound);
    }
  }
  // An entailment verdict comes first, so re-check rewriting alone.
  mask.history_based =
      why == Redundancy::DuplicateFormula ||
      duplicate(formula, apply_partial_substitution(
                             problem_.terms, problem_.quantified[formula], sigma));
  return mask;
}

void Engine::block_pattern(std::size_t formula, const IndexTuple& t,
                           const FailMask& mask) {
  FormulaState& st = formulas_.at(formula);
  if (mask.keep.size() != t.size()) throw ContractViolation("mask arity mismatch");
  if (std::none_of(mask.keep.begin(), mask.keep.end(), [](bool b) { return b; })) {
    // every instance of the formula is redundant
    (mask.history_based ? st.blocked_forever : st.blocked_this_round) = true;
    return;
  }
  PatternTrie& trie = mask.history_based ? st.history_patterns : st.round_patterns;
  if (trie.insert(WildcardPattern::from_mask(t, mask.keep))) ++stats_.patterns;
}

bool Engine::is_blocked(std::size_t formula, const IndexTuple& t) const {
  const FormulaState& st = formulas_.at(formula);
  return st.blocked_forever || st.blocked_this_round ||
         st.round_patterns.matches(t) || st.history_patterns.matches(t);
}

InstanceRecord Engine::commit_instance(std::size_t formula, const IndexTuple& t) {
  FormulaState& st = formulas_.at(formula);
  Substitution sigma = substitution_for(formula, t);
  InstanceRecord rec;
  rec.round = round_;
  rec.formula = formula;
  rec.tuple = t;
  for (std::size_t i = 0; i < sigma.arity(); ++i) rec.terms.push_back(*sigma[i]);
  rec.clauses =
      apply_substitution(problem_.terms, problem_.quantified[formula], sigma);
  st.vectors.insert(t);
  for (const Clause& c : rec.clauses) {
    st.produced.insert(normalize_with_placeholders(problem_.terms, c));
    for (const Literal& lit : c.literals) discover(lit.atom);
  }
  ground_.assert_clauses(rec.clauses);
  ++stats_.instances;
  log_.push_back(rec);
  return rec;
}

GroundVerdict Engine::check_ground() {
  GroundVerdict v = ground_.check();
  last_check_sat_ = v == GroundVerdict::Sat;
  return v;
}

std::size_t Engine::process_formula(std::size_t formula,
                                    std::vector<InstanceRecord>& out) {
  FormulaState& st = formulas_[formula];
  refresh_candidates();
  Bounds bounds = bounds_for(formula);
  if (!st.enumerator) {
    st.enumerator = std::make_unique<Enumerator>(config_.strategy, bounds);
  } else {
    st.enumerator->reset(bounds);
  }
  std::size_t asserted = 0;
  while (asserted < config_.instances_per_round) {
    if (config_.failmask && (st.blocked_forever || st.blocked_this_round)) break;
    auto t = st.enumerator->next();
    if (!t) break;
    ++stats_.tuples;
    if (config_.failmask && is_blocked(formula, *t)) {
      ++stats_.masked_skips;
      continue;
    }
    ++stats_.tuples_checked;
    Redundancy r = is_redundant(formula, *t);
    switch (r) {
      case Redundancy::NotRedundant:
        out.push_back(commit_instance(formula, *t));
        ++asserted;
        continue;
      case Redundancy::DuplicateVector:
        ++stats_.redundant_dup;
        continue;
      case Redundancy::Entailed:
        ++stats_.redundant_ent;
        break;
      case Redundancy::DuplicateFormula:
        ++stats_.redundant_rw;
        break;
    }
    if (config_.failmask) block_pattern(formula, *t, compute_fail_mask(formula, *t));
  }
  return asserted;
}

std::vector<InstanceRecord> Engine::instantiation_round() {
  if (!last_check_sat_) {
    throw ContractViolation("instantiation_round requires a Sat ground check");
  }
  ++round_;
  ++stats_.rounds;
  for (FormulaState& st : formulas_) {
    st.round_patterns.clear();
    st.blocked_this_round = false;
  }
  std::vector<InstanceRecord> out;
  for (std::size_t f = 0; f < formulas_.size(); ++f) process_formula(f, out);
  return out;
}

std::vector<WildcardPattern> Engine::round_patterns(std::size_t formula) const {
  return formulas_.at(formula).round_patterns.patterns();
}

std::vector<WildcardPattern> Engine::history_patterns(std::size_t formula) const {
  return formulas_.at(formula).history_patterns.patterns();
}

SolveResult Engine::solve() {
  auto started = std::chrono::steady_clock::now();
  SolveResult result;
  for (;;) {
    if (check_ground() == GroundVerdict::Unsat) {
      result.outcome = Outcome::Unsat;
      break;
    }
    if (config_.max_rounds && stats_.rounds >= *config_.max_rounds) {
      result.reason = UnknownReason::RoundLimit;
      break;
    }
    if (config_.deadline && std::chrono::steady_clock::now() >= *config_.deadline) {
      result.reason = UnknownReason::Timeout;
      break;
    }
    if (instantiation_round().empty()) {
      result.reason = UnknownReason::Saturated;
      break;
    }
  }
  stats_.ground = ground_.stats();
  stats_.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - started)
                       .count();
  result.stats = stats_;
  return result;
}

void write_stats(std::ostream& os, const SolveResult& result) {
  const EngineStats& s = result.stats;
  os << "verdict=" << result.verdict() << '\n';
  if (result.reason) {
    static constexpr const char* kReasons[] = {"saturated", "round-limit", "timeout"};
    os << "reason=" << kReasons[static_cast<int>(*result.reason)] << '\n';
  }
  os << "rounds=" << s.rounds << '\n'
     << "instances=" << s.instances << '\n'
     << "tuples=" << s.tuples << '\n'
     << "tuples_checked=" << s.tuples_checked << '\n'
     << "redundant_dup=" << s.redundant_dup << '\n'
     << "redundant_ent=" << s.redundant_ent << '\n'
     << "redundant_rw=" << s.redundant_rw << '\n'
     << "patterns=" << s.patterns << '\n'
     << "masked_skips=" << s.masked_skips << '\n'
     << "ground_checks=" << s.ground.checks << '\n'
     << "ground_decisions=" << s.ground.decisions << '\n'
     << "ground_propagations=" << s.ground.propagations << '\n'
     << "theory_conflicts=" << s.ground.theory_conflicts << '\n'
     << "time_ms=" << s.wall_ms << '\n';
}

}  // namespace enuminst
