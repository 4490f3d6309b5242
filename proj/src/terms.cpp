#include "enuminst/terms.hpp"

#include <algorithm>
#include <sstream>

#include "enuminst/errors.hpp"

namespace enuminst {

ParseError::ParseError(ParseErrorKind kind, std::size_t line,
                       std::size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                         ": " + message),
      kind_(kind),
      line_(line),
      column_(column) {}

TermStore::TermStore() {
  sorts_.push_back("Bool");
  sort_index_.emplace("Bool", bool_sort());
}

SortId TermStore::declare_sort(std::string name) {
  if (sort_index_.contains(name)) {
    throw ContractViolation("sort already declared: " + name);
  }
  SortId id{static_cast<std::uint32_t>(sorts_.size())};
  sort_index_.emplace(name, id);
  sorts_.push_back(std::move(name));
  return id;
}

std::optional<SortId> TermStore::find_sort(std::string_view name) const {
  auto it = sort_index_.find(std::string(name));
  if (it == sort_index_.end()) return std::nullopt;
  return it->second;
}

SymbolId TermStore::declare_symbol(std::string name,
                                   std::vector<SortId> arg_sorts,
                                   SortId result) {
  if (symbol_index_.contains(name)) {
    throw ContractViolation("symbol already declared: " + name);
  }
  SymbolId id{static_cast<std::uint32_t>(symbols_.size())};
  symbol_index_.emplace(name, id);
  symbols_.push_back({std::move(name), std::move(arg_sorts), result});
  return id;
}

std::optional<SymbolId> TermStore::find_symbol(std::string_view name) const {
  auto it = symbol_index_.find(std::string(name));
  if (it == symbol_index_.end()) return std::nullopt;
  return it->second;
}

TermId TermStore::intern(TermNode n) {
  Key key{n.kind,
          n.kind == TermKind::App ? n.symbol.value : n.sort.value,
          n.var_index, n.args};
  auto it = interned_.find(key);
  if (it != interned_.end()) return it->second;
  TermId id{static_cast<std::uint32_t>(nodes_.size())};
  interned_.emplace(std::move(key), id);
  nodes_.push_back(std::move(n));
  return id;
}

TermId TermStore::app(SymbolId f, std::span<const TermId> args) {
  const Symbol& sym = symbol(f);
  if (sym.arg_sorts.size() != args.size()) {
    throw ContractViolation("arity mismatch applying " + sym.name);
  }
  TermNode n;
  n.kind = TermKind::App;
  n.symbol = f;
  n.sort = sym.result;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const TermNode& a = node(args[i]);
    if (a.sort != sym.arg_sorts[i]) {
      throw ContractViolation("sort mismatch in argument " +
                              std::to_string(i + 1) + " of " + sym.name);
    }
    n.ground = n.ground && a.ground;
    n.size += a.size;
  }
  n.args.assign(args.begin(), args.end());
  return intern(std::move(n));
}

TermId TermStore::eq(TermId lhs, TermId rhs) {
  const TermNode& l = node(lhs);
  const TermNode& r = node(rhs);
  if (l.sort != r.sort) throw ContractViolation("equality between sorts");
  if (l.sort == bool_sort()) {
    throw ContractViolation("equality over Bool is not supported");
  }
  TermNode n;
  n.kind = TermKind::Equality;
  n.sort = bool_sort();
  n.args = {lhs, rhs};
  n.ground = l.ground && r.ground;
  n.size = 1 + l.size + r.size;
  return intern(std::move(n));
}

TermId TermStore::var(SortId sort, std::uint32_t index) {
  TermNode n;
  n.kind = TermKind::Variable;
  n.sort = sort;
  n.var_index = index;
  n.ground = false;
  return intern(std::move(n));
}

bool TermStore::is_atom(TermId t) const {
  const TermNode& n = node(t);
  return n.sort == bool_sort() && n.kind != TermKind::Variable;
}

std::string TermStore::to_string(TermId t) const {
  const TermNode& n = node(t);
  switch (n.kind) {
    case TermKind::Variable:
      return "?" + sort_name(n.sort) + std::to_string(n.var_index);
    case TermKind::Equality:
      return "(= " + to_string(n.args[0]) + " " + to_string(n.args[1]) + ")";
    case TermKind::App:
      break;
  }
  if (n.args.empty()) return symbol(n.symbol).name;
  std::string out = "(" + symbol(n.symbol).name;
  for (TermId a : n.args) out += " " + to_string(a);
  return out + ")";
}

Substitution::Substitution(std::initializer_list<TermId> terms)
    : bindings_(terms.begin(), terms.end()) {}

bool Substitution::is_total() const {
  return std::all_of(bindings_.begin(), bindings_.end(),
                     [](const auto& b) { return b.has_value(); });
}

namespace {

TermId substitute_memo(TermStore& store, TermId t,
                       const std::unordered_map<TermId, TermId>& image,
                       std::unordered_map<TermId, TermId>& memo) {
  if (store.is_ground(t)) return t;
  if (auto it = memo.find(t); it != memo.end()) return it->second;
  // Copy: interning below may reallocate the node table.
  TermNode n = store.node(t);
  TermId out = t;
  switch (n.kind) {
    case TermKind::Variable:
      if (auto it = image.find(t); it != image.end()) out = it->second;
      break;
    case TermKind::Equality:
      out = store.eq(substitute_memo(store, n.args[0], image, memo),
                     substitute_memo(store, n.args[1], image, memo));
      break;
    case TermKind::App: {
      std::vector<TermId> args;
      args.reserve(n.args.size());
      for (TermId a : n.args) {
        args.push_back(substitute_memo(store, a, image, memo));
      }
      out = store.app(n.symbol, args);
      break;
    }
  }
  memo.emplace(t, out);
  return out;
}

std::unordered_map<TermId, TermId> variable_image(TermStore& store,
                                                  const QuantifiedFormula& f,
                                                  const Substitution& sigma) {
  if (sigma.arity() != f.arity()) {
    throw ContractViolation("substitution arity does not match formula");
  }
  std::unordered_map<TermId, TermId> image;
  for (std::size_t i = 0; i < f.arity(); ++i) {
    if (!sigma[i]) continue;
    TermId t = *sigma[i];
    if (store.sort_of(t) != f.vars[i].sort) {
      throw ContractViolation("substitution maps " + f.vars[i].name +
                              " to a term of the wrong sort");
    }
    if (!store.is_ground(t)) {
      throw ContractViolation("substitution image is not ground");
    }
    image.emplace(store.var(f.vars[i].sort, static_cast<std::uint32_t>(i)), t);
  }
  return image;
}

std::vector<Clause> apply_image(TermStore& store, const QuantifiedFormula& f,
                                const std::unordered_map<TermId, TermId>& image) {
  std::unordered_map<TermId, TermId> memo;
  std::vector<Clause> out;
  out.reserve(f.body.size());
  for (const Clause& c : f.body) {
    Clause inst;
    inst.literals.reserve(c.literals.size());
    for (const Literal& lit : c.literals) {
      inst.literals.push_back(
          {substitute_memo(store, lit.atom, image, memo), lit.positive});
    }
    out.push_back(std::move(inst));
  }
  return out;
}

void collect_variables(const TermStore& store, TermId t,
                       std::vector<TermId>& seen) {
  const TermNode& n = store.node(t);
  if (n.ground) return;
  if (n.kind == TermKind::Variable) {
    if (std::find(seen.begin(), seen.end(), t) == seen.end()) seen.push_back(t);
    return;
  }
  for (TermId a : n.args) collect_variables(store, a, seen);
}

}  // namespace

TermId substitute(TermStore& store, TermId t,
                  const std::unordered_map<TermId, TermId>& image) {
  std::unordered_map<TermId, TermId> memo;
  return substitute_memo(store, t, image, memo);
}

std::vector<Clause> apply_substitution(TermStore& store,
                                       const QuantifiedFormula& f,
                                       const Substitution& sigma) {
  if (!sigma.is_total()) {
    throw ContractViolation("apply_substitution requires a total substitution");
  }
  return apply_image(store, f, variable_image(store, f, sigma));
}

std::vector<Clause> apply_partial_substitution(TermStore& store,
                                               const QuantifiedFormula& f,
                                               const Substitution& sigma) {
  return apply_image(store, f, variable_image(store, f, sigma));
}

Clause normalize(TermStore& store, const Clause& c) {
  if (c.tautology) return Clause::top();
  std::vector<Literal> lits;
  lits.reserve(c.literals.size());
  for (Literal lit : c.literals) {
    const TermNode& n = store.node(lit.atom);
    if (n.kind == TermKind::Equality) {
      TermId lhs = n.args[0];
      TermId rhs = n.args[1];
      if (lhs == rhs) {
        if (lit.positive) return Clause::top();
        continue;  // t != t is false
      }
      if (rhs < lhs) lit.atom = store.eq(rhs, lhs);
    }
    lits.push_back(lit);
  }
  std::sort(lits.begin(), lits.end(), [](const Literal& a, const Literal& b) {
    if (a.positive != b.positive) return !a.positive;
    return a.atom < b.atom;
  });
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (std::size_t i = 0; i < lits.size(); ++i) {
    for (std::size_t j = i + 1; j < lits.size(); ++j) {
      if (lits[i].atom == lits[j].atom) return Clause::top();
    }
  }
  return {std::move(lits), false};
}

Clause normalize_with_placeholders(TermStore& store, const Clause& c) {
  Clause first = normalize(store, c);
  if (first.tautology) return first;
  std::vector<TermId> order;
  for (const Literal& lit : first.literals) {
    collect_variables(store, lit.atom, order);
  }
  if (order.empty()) return first;
  std::unordered_map<TermId, TermId> image;
  for (std::size_t k = 0; k < order.size(); ++k) {
    image.emplace(order[k], store.var(store.sort_of(order[k]),
                                      static_cast<std::uint32_t>(k)));
  }
  Clause renamed;
  for (const Literal& lit : first.literals) {
    renamed.literals.push_back({substitute(store, lit.atom, image), lit.positive});
  }
  return normalize(store, renamed);
}

std::string to_string(const TermStore& store, const Literal& lit) {
  std::string atom = store.to_string(lit.atom);
  return lit.positive ? atom : "(not " + atom + ")";
}

std::string to_string(const TermStore& store, const Clause& c) {
  if (c.tautology) return "true";
  if (c.literals.empty()) return "false";
  if (c.literals.size() == 1) return to_string(store, c.literals[0]);
  std::ostringstream os;
  os << "(or";
  for (const Literal& lit : c.literals) os << " " << to_string(store, lit);
  os << ")";
  return os.str();
}

}  // namespace enuminst
