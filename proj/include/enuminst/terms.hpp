#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "enuminst/ids.hpp"

namespace enuminst {

enum class TermKind : std::uint8_t {
  App,       // function or predicate application; constants have no args
  Equality,  // args[0] = args[1]
  Variable,  // bound variable, identified by (sort, index)
};

struct TermNode {
  TermKind kind = TermKind::App;
  SymbolId symbol{};  // App only
  std::vector<TermId> args;
  SortId sort{};
  std::uint32_t var_index = 0;  // Variable only
  bool ground = true;
  std::uint32_t size = 1;  // number of nodes in the term tree
};

struct Symbol {
  std::string name;
  std::vector<SortId> arg_sorts;
  SortId result{};
};

/// Hash-consing store for sorts, symbols and terms. Structurally equal terms
/// share one id; ids are handed out in creation order so they double as a
/// stable total order on terms within a run.
class TermStore {
 public:
  TermStore();

  static constexpr SortId bool_sort() { return SortId{0}; }

  SortId declare_sort(std::string name);
  std::optional<SortId> find_sort(std::string_view name) const;
  const std::string& sort_name(SortId s) const { return sorts_.at(s.value); }
  std::size_t num_sorts() const { return sorts_.size(); }

  SymbolId declare_symbol(std::string name, std::vector<SortId> arg_sorts,
                          SortId result);
  std::optional<SymbolId> find_symbol(std::string_view name) const;
  const Symbol& symbol(SymbolId f) const { return symbols_.at(f.value); }
  std::size_t num_symbols() const { return symbols_.size(); }

  /// Throws ContractViolation on arity or sort mismatch.
  TermId app(SymbolId f, std::span<const TermId> args = {});
  TermId eq(TermId lhs, TermId rhs);
  TermId var(SortId sort, std::uint32_t index);

  const TermNode& node(TermId t) const { return nodes_.at(t.value); }
  SortId sort_of(TermId t) const { return node(t).sort; }
  bool is_ground(TermId t) const { return node(t).ground; }
  bool is_atom(TermId t) const;
  std::size_t num_terms() const { return nodes_.size(); }

  std::string to_string(TermId t) const;

 private:
  TermId intern(TermNode n);

  struct Key {
    TermKind kind;
    std::uint32_t head;  // symbol or sort
    std::uint32_t var_index;
    std::vector<TermId> args;
    friend auto operator<=>(const Key&, const Key&) = default;
  };

  std::vector<std::string> sorts_;
  std::unordered_map<std::string, SortId> sort_index_;
  std::vector<Symbol> symbols_;
  std::unordered_map<std::string, SymbolId> symbol_index_;
  std::vector<TermNode> nodes_;
  std::map<Key, TermId> interned_;
};

struct Literal {
  TermId atom{};
  bool positive = true;

  Literal negated() const { return {atom, !positive}; }
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// A disjunction of literals. `tautology` marks the canonical TRUE clause
/// produced by normalization; its literal list is empty.
struct Clause {
  std::vector<Literal> literals;
  bool tautology = false;

  static Clause top() { return {{}, true}; }
  bool empty() const { return !tautology && literals.empty(); }
  friend auto operator<=>(const Clause&, const Clause&) = default;
};

struct BoundVariable {
  std::string name;
  SortId sort{};
};

/// `forall vars. body` with the body in clause form. Variable i of the body is
/// the term `var(vars[i].sort, i)`.
struct QuantifiedFormula {
  std::uint32_t id = 0;
  std::vector<BoundVariable> vars;
  std::vector<Clause> body;

  std::size_t arity() const { return vars.size(); }
};

/// Positional variable-to-term map; unset positions are unbound.
class Substitution {
 public:
  explicit Substitution(std::size_t arity) : bindings_(arity) {}
  Substitution(std::initializer_list<TermId> terms);

  std::size_t arity() const { return bindings_.size(); }
  void bind(std::size_t i, TermId t) { bindings_.at(i) = t; }
  void unbind(std::size_t i) { bindings_.at(i).reset(); }
  const std::optional<TermId>& operator[](std::size_t i) const {
    return bindings_.at(i);
  }
  bool is_total() const;

 private:
  std::vector<std::optional<TermId>> bindings_;
};

/// Output of the front-end.
struct Problem {
  TermStore terms;
  std::vector<Clause> ground;
  std::vector<QuantifiedFormula> quantified;
  /// Declared constants plus fresh constants added for otherwise empty sorts.
  std::vector<TermId> constants;
  bool check_sat_seen = false;
};

/// Instance clauses of `f` under a total substitution; throws
/// ContractViolation if `sigma` is partial or ill-sorted.
std::vector<Clause> apply_substitution(TermStore& store,
                                       const QuantifiedFormula& f,
                                       const Substitution& sigma);

/// As apply_substitution, but unbound variables stay in place.
std::vector<Clause> apply_partial_substitution(TermStore& store,
                                               const QuantifiedFormula& f,
                                               const Substitution& sigma);

/// Replaces every variable occurrence in `t` according to `image`; entries
/// missing from `image` are left alone.
TermId substitute(TermStore& store, TermId t,
                  const std::unordered_map<TermId, TermId>& image);

/// Canonical form of a clause: reflexive equalities rewritten, equalities
/// oriented by term id, literals sorted and deduplicated, complementary
/// pairs collapsed to TRUE.
Clause normalize(TermStore& store, const Clause& c);

/// normalize, then rename remaining variables by first occurrence so that
/// clauses equal up to variable naming get the same form.
Clause normalize_with_placeholders(TermStore& store, const Clause& c);

std::string to_string(const TermStore& store, const Literal& lit);
std::string to_string(const TermStore& store, const Clause& c);

}  // namespace enuminst
