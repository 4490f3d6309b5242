#include "enuminst/ground_solver.hpp"

#include <algorithm>

#include "enuminst/errors.hpp"

namespace enuminst {

void CongruenceClosure::add_term(TermId t) {
  if (parent_.contains(t)) return;
  const TermNode& n = store_->node(t);
  if (!n.ground) throw ContractViolation("congruence closure over a non-ground term");
  for (TermId a : n.args) add_term(a);
  if (store_->is_atom(t)) return;
  parent_.emplace(t, t);
  terms_.push_back(t);
}

TermId CongruenceClosure::find(TermId t) const {
  auto it = parent_.find(t);
  if (it == parent_.end()) throw ContractViolation("term not in congruence closure");
  TermId root = t;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[t] != root) {
    TermId next = parent_[t];
    parent_[t] = root;
    t = next;
  }
  return root;
}

void CongruenceClosure::merge(TermId a, TermId b) {
  add_term(a);
  add_term(b);
  TermId ra = find(a);
  TermId rb = find(b);
  if (ra == rb) return;
  // smaller id becomes the representative, keeping results order-independent
  if (rb < ra) std::swap(ra, rb);
  parent_[rb] = ra;
}

void CongruenceClosure::close() {
  bool changed = true;
  while (changed) {
    changed = false;
    signatures_.clear();
    for (TermId t : terms_) {
      const TermNode& n = store_->node(t);
      if (n.args.empty()) continue;
      Signature sig{n.symbol, {}};
      sig.second.reserve(n.args.size());
      for (TermId a : n.args) sig.second.push_back(find(a));
      auto [it, fresh] = signatures_.emplace(std::move(sig), t);
      if (!fresh && find(it->second) != find(t)) {
        merge(it->second, t);
        changed = true;
      }
    }
  }
  for (auto& [sig, t] : signatures_) t = find(t);
}

std::optional<TermId> CongruenceClosure::class_of(TermId t) const {
  if (parent_.contains(t)) return find(t);
  const TermNode& n = store_->node(t);
  if (!n.ground || n.kind != TermKind::App || n.args.empty() ||
      store_->is_atom(t)) {
    return std::nullopt;
  }
  Signature sig{n.symbol, {}};
  for (TermId a : n.args) {
    auto r = class_of(a);
    if (!r) return std::nullopt;
    sig.second.push_back(*r);
  }
  auto it = signatures_.find(sig);
  if (it == signatures_.end()) return std::nullopt;
  return find(it->second);
}

void GroundSolver::register_terms(TermId t) {
  if (known_terms_.contains(t)) return;
  for (TermId a : store_->node(t).args) register_terms(a);
  known_terms_.insert(t);
  if (!store_->is_atom(t)) term_order_.push_back(t);
}

std::uint32_t GroundSolver::atom_var(TermId atom) {
  auto [it, fresh] =
      atom_vars_.try_emplace(atom, static_cast<std::uint32_t>(atoms_.size()));
  if (fresh) {
    atoms_.push_back(atom);
    register_terms(atom);
  }
  return it->second;
}

GroundSolver::Lit GroundSolver::encode(Literal lit) {
  return 2 * atom_var(lit.atom) + (lit.positive ? 0 : 1);
}

void GroundSolver::assert_clause(const Clause& c) {
  for (const Literal& lit : c.literals) {
    if (!store_->is_ground(lit.atom)) {
      throw ContractViolation("assert_clause: clause is not ground");
    }
  }
  Clause norm = normalize(*store_, c);
  if (norm.tautology) return;
  if (norm.literals.empty()) inconsistent_ = true;
  std::vector<Lit> encoded;
  for (const Literal& lit : norm.literals) encoded.push_back(encode(lit));
  db_.push_back(std::move(encoded));
  asserted_.push_back(std::move(norm));
}

void GroundSolver::assert_clauses(std::span<const Clause> cs) {
  for (const Clause& c : cs) assert_clause(c);
}

void GroundSolver::assign(Lit l) {
  values_[l / 2] = (l & 1) ? 0 : 1;
  trail_.push_back(l);
}

bool GroundSolver::propagate() {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& clause : db_) {
      std::optional<Lit> unit;
      std::size_t open = 0;
      bool satisfied = false;
      for (Lit l : clause) {
        std::int8_t v = values_[l / 2];
        if (v < 0) {
          ++open;
          unit = l;
        } else if ((v == 1) == ((l & 1) == 0)) {
          satisfied = true;
          break;
        }
      }
      if (satisfied) continue;
      if (open == 0) return false;
      if (open == 1) {
        assign(*unit);
        ++stats_.propagations;
        changed = true;
      }
    }
  }
  return true;
}

bool GroundSolver::backtrack() {
  while (!decisions_.empty() && decisions_.back().flipped) decisions_.pop_back();
  if (decisions_.empty()) return false;
  Decision& d = decisions_.back();
  while (trail_.size() > d.trail_size) {
    values_[trail_.back() / 2] = -1;
    trail_.pop_back();
  }
  d.flipped = true;
  d.lit ^= 1;
  assign(d.lit);
  return true;
}

CongruenceClosure GroundSolver::build_closure(
    std::span<const Lit> positive_eqs) const {
  CongruenceClosure cc(*store_);
  for (TermId t : term_order_) cc.add_term(t);
  for (Lit l : positive_eqs) {
    const TermNode& n = store_->node(atoms_[l / 2]);
    cc.merge(n.args[0], n.args[1]);
  }
  cc.close();
  return cc;
}

// Returns a theory-inconsistent subset of the current assignment, or nullopt
// when the assignment is EUF-consistent (leaving the closure in `cc`).
std::optional<std::vector<GroundSolver::Lit>> GroundSolver::theory_conflict(
    CongruenceClosure& cc) {
  std::vector<Lit> positive_eqs;
  for (std::uint32_t v = 0; v < atoms_.size(); ++v) {
    if (values_[v] == 1 && store_->node(atoms_[v]).kind == TermKind::Equality) {
      positive_eqs.push_back(2 * v);
    }
  }
  cc = build_closure(positive_eqs);

  // witness: a disequality (one literal) or two clashing predicate literals
  std::vector<Lit> witness;
  std::map<std::pair<SymbolId, std::vector<TermId>>, Lit> predicates;
  for (std::uint32_t v = 0; v < atoms_.size() && witness.empty(); ++v) {
    const TermNode& n = store_->node(atoms_[v]);
    Lit lit = 2 * v + (values_[v] == 1 ? 0 : 1);
    if (n.kind == TermKind::Equality) {
      if (values_[v] == 0 && cc.equal(n.args[0], n.args[1])) witness = {lit};
      continue;
    }
    std::pair<SymbolId, std::vector<TermId>> sig{n.symbol, {}};
    for (TermId a : n.args) sig.second.push_back(cc.find(a));
    auto [it, fresh] = predicates.emplace(std::move(sig), lit);
    if (!fresh && (it->second & 1) != (lit & 1)) witness = {it->second, lit};
  }
  if (witness.empty()) return std::nullopt;

  auto conflicting = [&](std::span<const Lit> eqs) {
    CongruenceClosure probe = build_closure(eqs);
    if (witness.size() == 1) {
      const TermNode& n = store_->node(atoms_[witness[0] / 2]);
      return probe.equal(n.args[0], n.args[1]);
    }
    const TermNode& p = store_->node(atoms_[witness[0] / 2]);
    const TermNode& q = store_->node(atoms_[witness[1] / 2]);
    for (std::size_t i = 0; i < p.args.size(); ++i) {
      if (!probe.equal(p.args[i], q.args[i])) return false;
    }
    return true;
  };
  // deletion-based minimization of the equalities involved
  std::vector<Lit> core = positive_eqs;
  for (std::size_t i = 0; i < core.size();) {
    std::vector<Lit> without = core;
    without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
    if (conflicting(without)) {
      core = std::move(without);
    } else {
      ++i;
    }
  }
  core.insert(core.end(), witness.begin(), witness.end());
  return core;
}

GroundVerdict GroundSolver::check() {
  ++stats_.checks;
  has_model_ = false;
  model_cc_.reset();
  model_predicates_.clear();
  if (inconsistent_) return GroundVerdict::Unsat;

  values_.assign(atoms_.size(), -1);
  trail_.clear();
  decisions_.clear();
  for (;;) {
    if (!propagate()) {
      if (!backtrack()) {
        inconsistent_ = true;
        return GroundVerdict::Unsat;
      }
      continue;
    }
    auto open = std::find(values_.begin(), values_.end(), std::int8_t{-1});
    if (open != values_.end()) {
      ++stats_.decisions;
      auto v = static_cast<std::uint32_t>(open - values_.begin());
      decisions_.push_back({trail_.size(), 2 * v + 1, false});
      assign(2 * v + 1);
      continue;
    }
    CongruenceClosure cc(*store_);
    auto conflict = theory_conflict(cc);
    if (!conflict) {
      has_model_ = true;
      model_values_.assign(atoms_.size(), false);
      for (std::uint32_t v = 0; v < atoms_.size(); ++v) {
        model_values_[v] = values_[v] == 1;
        const TermNode& n = store_->node(atoms_[v]);
        if (n.kind != TermKind::App) continue;
        std::pair<SymbolId, std::vector<TermId>> sig{n.symbol, {}};
        for (TermId a : n.args) sig.second.push_back(cc.find(a));
        model_predicates_.emplace(std::move(sig), model_values_[v]);
      }
      model_cc_ = std::move(cc);
      return GroundVerdict::Sat;
    }
    ++stats_.theory_conflicts;
    std::vector<Lit> lemma;
    for (Lit l : *conflict) lemma.push_back(l ^ 1);
    db_.push_back(std::move(lemma));
  }
}

std::optional<bool> GroundSolver::value_of(Literal lit) const {
  if (!has_model_) {
    throw ContractViolation("value_of requires a preceding Sat check");
  }
  const TermNode& n = store_->node(lit.atom);
  if (!n.ground) return std::nullopt;
  std::optional<bool> value;
  if (n.kind == TermKind::Equality) {
    if (n.args[0] == n.args[1]) {
      value = true;
    } else {
      auto l = model_cc_->class_of(n.args[0]);
      auto r = model_cc_->class_of(n.args[1]);
      if (l && r) value = *l == *r;
    }
  } else if (auto it = atom_vars_.find(lit.atom);
             it != atom_vars_.end() && it->second < model_values_.size()) {
    value = model_values_[it->second];
  } else {
    std::pair<SymbolId, std::vector<TermId>> sig{n.symbol, {}};
    for (TermId a : n.args) {
      auto r = model_cc_->class_of(a);
      if (!r) return std::nullopt;
      sig.second.push_back(*r);
    }
    if (auto it = model_predicates_.find(sig); it != model_predicates_.end()) {
      value = it->second;
    }
  }
  if (!value) return std::nullopt;
  return lit.positive ? *value : !*value;
}

std::vector<std::pair<TermId, bool>> GroundSolver::model() const {
  if (!has_model_) throw ContractViolation("model requires a preceding Sat check");
  std::vector<std::pair<TermId, bool>> out;
  for (std::uint32_t v = 0; v < model_values_.size(); ++v) {
    out.emplace_back(atoms_[v], model_values_[v]);
  }
  return out;
}

}  // namespace enuminst
