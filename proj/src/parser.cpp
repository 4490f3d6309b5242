#include "enuminst/parser.hpp"

#include <cctype>
#include <unordered_map>

#include "enuminst/errors.hpp"

namespace enuminst {
namespace {

constexpr std::size_t kMaxClausesPerAssertion = 200000;

struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  std::size_t line = 1;
  std::size_t column = 1;

  bool is_atom(std::string_view s) const { return !is_list && atom == s; }
};

[[noreturn]] void fail(ParseErrorKind kind, const SExpr& at,
                       const std::string& msg) {
  throw ParseError(kind, at.line, at.column, msg);
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  /// Next top-level expression, or false at end of input.
  bool next(SExpr& out) {
    skip_space();
    if (pos_ >= text_.size()) return false;
    out = read();
    return true;
  }

 private:
  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = peek();
      if (c == ';') {
        while (pos_ < text_.size() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    SExpr e;
    e.line = line_;
    e.column = column_;
    char c = peek();
    if (c == ')') {
      throw ParseError(ParseErrorKind::Syntax, line_, column_,
                       "unexpected ')'");
    }
    if (c == '(') {
      advance();
      e.is_list = true;
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) {
          throw ParseError(ParseErrorKind::Syntax, e.line, e.column,
                           "unterminated list");
        }
        if (peek() == ')') {
          advance();
          return e;
        }
        e.items.push_back(read());
      }
    }
    if (c == '|' || c == '"') {
      char close = c;
      advance();
      while (pos_ < text_.size() && peek() != close) {
        e.atom.push_back(peek());
        advance();
      }
      if (pos_ >= text_.size()) {
        throw ParseError(ParseErrorKind::Syntax, e.line, e.column,
                         "unterminated quoted token");
      }
      advance();
      if (close == '"') e.atom = "\"" + e.atom + "\"";
      return e;
    }
    while (pos_ < text_.size()) {
      c = peek();
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' ||
          c == ')' || c == ';') {
        break;
      }
      e.atom.push_back(c);
      advance();
    }
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

// Quantifier-free formula tree before clause conversion.
struct Formula {
  enum class Op { Lit, And, Or, Not, True, False };
  Op op = Op::True;
  Literal lit;
  std::vector<Formula> kids;
};

Formula negate(Formula f) {
  using Op = Formula::Op;
  switch (f.op) {
    case Op::Lit:
      f.lit = f.lit.negated();
      return f;
    case Op::True:
      return {Op::False, {}, {}};
    case Op::False:
      return {Op::True, {}, {}};
    case Op::Not:
      return std::move(f.kids[0]);
    case Op::And:
    case Op::Or:
      f.op = f.op == Op::And ? Op::Or : Op::And;
      for (Formula& k : f.kids) k = negate(std::move(k));
      return f;
  }
  return f;
}

using ClauseSet = std::vector<std::vector<Literal>>;

ClauseSet to_cnf(const Formula& f, const SExpr& at) {
  using Op = Formula::Op;
  switch (f.op) {
    case Op::Lit:
      return {{f.lit}};
    case Op::True:
      return {};
    case Op::False:
      return {{}};
    case Op::Not:
      return to_cnf(negate(f.kids[0]), at);
    case Op::And: {
      ClauseSet out;
      for (const Formula& k : f.kids) {
        ClauseSet part = to_cnf(k, at);
        out.insert(out.end(), part.begin(), part.end());
      }
      return out;
    }
    case Op::Or: {
      ClauseSet acc{{}};
      for (const Formula& k : f.kids) {
        ClauseSet part = to_cnf(k, at);
        ClauseSet next;
        if (acc.size() * part.size() > kMaxClausesPerAssertion) {
          fail(ParseErrorKind::Unsupported, at,
               "assertion too large for clause conversion");
        }
        for (const auto& a : acc) {
          for (const auto& b : part) {
            auto merged = a;
            merged.insert(merged.end(), b.begin(), b.end());
            next.push_back(std::move(merged));
          }
        }
        acc = std::move(next);
      }
      return acc;
    }
  }
  return {};
}

class ProblemBuilder {
 public:
  Problem finish() {
    add_fresh_constants();
    return std::move(problem_);
  }

  void command(const SExpr& e) {
    if (!e.is_list || e.items.empty() || e.items[0].is_list) {
      fail(ParseErrorKind::Syntax, e, "expected a command");
    }
    const std::string& head = e.items[0].atom;
    if (head == "declare-sort") {
      declare_sort(e);
    } else if (head == "declare-fun") {
      declare_fun(e);
    } else if (head == "declare-const") {
      declare_const(e);
    } else if (head == "assert") {
      assertion(e);
    } else if (head == "check-sat") {
      problem_.check_sat_seen = true;
    } else if (head == "set-logic" || head == "set-info" ||
               head == "set-option" || head == "exit") {
      // accepted and ignored
    } else {
      fail(ParseErrorKind::Unsupported, e, "unsupported command '" + head + "'");
    }
  }

 private:
  TermStore& store() { return problem_.terms; }

  const std::string& symbol_name(const SExpr& e) {
    if (e.is_list || e.atom.empty()) fail(ParseErrorKind::Syntax, e, "expected a symbol");
    return e.atom;
  }

  SortId sort_ref(const SExpr& e) {
    const std::string& name = symbol_name(e);
    auto s = store().find_sort(name);
    if (!s) fail(ParseErrorKind::Undeclared, e, "undeclared sort '" + name + "'");
    return *s;
  }

  void require_fresh_name(const SExpr& e) {
    const std::string& name = symbol_name(e);
    if (store().find_symbol(name) || store().find_sort(name)) {
      fail(ParseErrorKind::Syntax, e, "'" + name + "' is already declared");
    }
  }

  void declare_sort(const SExpr& e) {
    if (e.items.size() != 3) fail(ParseErrorKind::Syntax, e, "malformed declare-sort");
    require_fresh_name(e.items[1]);
    if (e.items[2].is_list || e.items[2].atom != "0") {
      fail(ParseErrorKind::Unsupported, e.items[2], "only arity-0 sorts are supported");
    }
    store().declare_sort(e.items[1].atom);
  }

  void declare_symbol(const SExpr& name, std::vector<SortId> args,
                      SortId result) {
    require_fresh_name(name);
    for (SortId a : args) {
      if (a == TermStore::bool_sort()) {
        fail(ParseErrorKind::Unsupported, name, "Bool-sorted arguments are not supported");
      }
    }
    bool constant = args.empty() && result != TermStore::bool_sort();
    SymbolId f = store().declare_symbol(name.atom, std::move(args), result);
    if (constant) problem_.constants.push_back(store().app(f));
  }

  void declare_fun(const SExpr& e) {
    if (e.items.size() != 4 || !e.items[2].is_list) {
      fail(ParseErrorKind::Syntax, e, "malformed declare-fun");
    }
    std::vector<SortId> args;
    for (const SExpr& a : e.items[2].items) args.push_back(sort_ref(a));
    declare_symbol(e.items[1], std::move(args), sort_ref(e.items[3]));
  }

  void declare_const(const SExpr& e) {
    if (e.items.size() != 3) fail(ParseErrorKind::Syntax, e, "malformed declare-const");
    declare_symbol(e.items[1], {}, sort_ref(e.items[2]));
  }

  void assertion(const SExpr& e) {
    if (e.items.size() != 2) fail(ParseErrorKind::Syntax, e, "malformed assert");
    const SExpr& body = e.items[1];
    if (body.is_list && !body.items.empty() && body.items[0].is_atom("forall")) {
      quantified(body);
      return;
    }
    for (auto& lits : to_cnf(formula(body), body)) {
      problem_.ground.push_back({std::move(lits), false});
    }
  }

  void quantified(const SExpr& e) {
    if (e.items.size() != 3 || !e.items[1].is_list || e.items[1].items.empty()) {
      fail(ParseErrorKind::Syntax, e, "malformed forall");
    }
    QuantifiedFormula q;
    q.id = static_cast<std::uint32_t>(problem_.quantified.size());
    scope_.clear();
    for (const SExpr& binding : e.items[1].items) {
      if (!binding.is_list || binding.items.size() != 2) {
        fail(ParseErrorKind::Syntax, binding, "malformed variable binding");
      }
      const std::string& name = symbol_name(binding.items[0]);
      SortId sort = sort_ref(binding.items[1]);
      if (sort == TermStore::bool_sort()) {
        fail(ParseErrorKind::Unsupported, binding, "Bool-sorted variables are not supported");
      }
      if (scope_.contains(name)) {
        fail(ParseErrorKind::Syntax, binding, "duplicate variable '" + name + "'");
      }
      scope_.emplace(name, store().var(sort, static_cast<std::uint32_t>(q.vars.size())));
      q.vars.push_back({name, sort});
    }
    in_quantifier_ = true;
    Formula body = formula(e.items[2]);
    in_quantifier_ = false;
    scope_.clear();
    for (auto& lits : to_cnf(body, e)) q.body.push_back({std::move(lits), false});
    problem_.quantified.push_back(std::move(q));
  }

  Formula formula(const SExpr& e) {
    using Op = Formula::Op;
    if (!e.is_list) {
      if (e.atom == "true") return {Op::True, {}, {}};
      if (e.atom == "false") return {Op::False, {}, {}};
      return atom(e);
    }
    if (e.items.empty()) fail(ParseErrorKind::Syntax, e, "empty formula");
    const SExpr& head = e.items[0];
    if (head.is_list) fail(ParseErrorKind::Syntax, head, "expected an operator");
    const std::string& op = head.atom;
    if (op == "forall" || op == "exists") {
      fail(ParseErrorKind::Unsupported, e,
           in_quantifier_ || op == "exists"
               ? "nested or existential quantifiers are not supported"
               : "quantifiers are only supported at the top of an assertion");
    }
    if (op == "let" || op == "!" || op == "ite" || op == "xor" || op == "distinct") {
      fail(ParseErrorKind::Unsupported, e, "unsupported construct '" + op + "'");
    }
    if (op == "and" || op == "or") {
      Formula f{op == "and" ? Op::And : Op::Or, {}, {}};
      for (std::size_t i = 1; i < e.items.size(); ++i) {
        f.kids.push_back(formula(e.items[i]));
      }
      return f;
    }
    if (op == "not") {
      if (e.items.size() != 2) fail(ParseErrorKind::Syntax, e, "not takes one argument");
      return {Op::Not, {}, {formula(e.items[1])}};
    }
    if (op == "=>") {
      if (e.items.size() < 3) fail(ParseErrorKind::Syntax, e, "=> takes at least two arguments");
      // right associative
      Formula acc = formula(e.items.back());
      for (std::size_t i = e.items.size() - 2; i >= 1; --i) {
        acc = {Op::Or, {}, {negate(formula(e.items[i])), std::move(acc)}};
      }
      return acc;
    }
    if (op == "=") {
      if (e.items.size() != 3) fail(ParseErrorKind::Syntax, e, "= takes two arguments");
      TermId lhs = term(e.items[1]);
      TermId rhs = term(e.items[2]);
      if (store().sort_of(lhs) != store().sort_of(rhs)) {
        fail(ParseErrorKind::SortMismatch, e, "equality between different sorts");
      }
      return {Op::Lit, {store().eq(lhs, rhs), true}, {}};
    }
    return atom(e);
  }

  Formula atom(const SExpr& e) {
    TermId t = application(e);
    if (store().sort_of(t) != TermStore::bool_sort()) {
      fail(ParseErrorKind::SortMismatch, e, "expected a Bool-sorted formula");
    }
    return {Formula::Op::Lit, {t, true}, {}};
  }

  TermId term(const SExpr& e) {
    if (!e.is_list) {
      if (auto it = scope_.find(e.atom); it != scope_.end()) return it->second;
    }
    TermId t = application(e);
    if (store().sort_of(t) == TermStore::bool_sort()) {
      fail(ParseErrorKind::Unsupported, e, "Bool-sorted terms are not supported here");
    }
    return t;
  }

  TermId application(const SExpr& e) {
    const SExpr& head = e.is_list ? (e.items.empty() ? e : e.items[0]) : e;
    if (e.is_list && e.items.empty()) fail(ParseErrorKind::Syntax, e, "empty application");
    const std::string& name = symbol_name(head);
    if (!e.is_list && scope_.contains(name)) {
      fail(ParseErrorKind::SortMismatch, e, "variable used as a formula");
    }
    auto f = store().find_symbol(name);
    if (!f) fail(ParseErrorKind::Undeclared, head, "undeclared symbol '" + name + "'");
    const Symbol& sym = store().symbol(*f);
    std::size_t given = e.is_list ? e.items.size() - 1 : 0;
    if (given != sym.arg_sorts.size()) {
      fail(ParseErrorKind::SortMismatch, e,
           "'" + name + "' expects " + std::to_string(sym.arg_sorts.size()) +
               " arguments, got " + std::to_string(given));
    }
    std::vector<TermId> args;
    for (std::size_t i = 0; i < given; ++i) {
      TermId a = term(e.items[i + 1]);
      if (store().sort_of(a) != store().symbol(*f).arg_sorts[i]) {
        fail(ParseErrorKind::SortMismatch, e.items[i + 1],
             "argument " + std::to_string(i + 1) + " of '" + name + "' has the wrong sort");
      }
      args.push_back(a);
    }
    return store().app(*f, args);
  }

  void add_fresh_constants() {
    TermStore& ts = store();
    std::vector<bool> inhabited(ts.num_sorts(), false);
    for (std::uint32_t i = 0; i < ts.num_terms(); ++i) {
      const TermNode& n = ts.node(TermId{i});
      if (n.ground && n.kind == TermKind::App) inhabited[n.sort.value] = true;
    }
    for (std::uint32_t s = 1; s < ts.num_sorts(); ++s) {
      if (inhabited[s]) continue;
      std::string name = "@fresh_" + ts.sort_name(SortId{s});
      while (ts.find_symbol(name)) name += "'";
      SymbolId c = ts.declare_symbol(name, {}, SortId{s});
      problem_.constants.push_back(ts.app(c));
    }
  }

  Problem problem_;
  std::unordered_map<std::string, TermId> scope_;
  bool in_quantifier_ = false;
};

}  // namespace

Problem parse_problem(std::string_view text) {
  Reader reader(text);
  ProblemBuilder builder;
  SExpr e;
  while (reader.next(e)) builder.command(e);
  return builder.finish();
}

}  // namespace enuminst
