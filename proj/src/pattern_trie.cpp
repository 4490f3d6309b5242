#include "enuminst/pattern_trie.hpp"

#include <algorithm>

#include "enuminst/errors.hpp"

namespace enuminst {

WildcardPattern::WildcardPattern(std::vector<Cell> cells)
    : cells_(std::move(cells)) {
  if (std::none_of(cells_.begin(), cells_.end(),
                   [](const Cell& c) { return c.has_value(); })) {
    throw ContractViolation("a pattern needs at least one concrete cell");
  }
}

WildcardPattern WildcardPattern::from_mask(const IndexTuple& t,
                                           const std::vector<bool>& keep) {
  if (keep.size() != t.size()) throw ContractViolation("mask arity mismatch");
  std::vector<Cell> cells(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (keep[i]) cells[i] = t[i];
  }
  return WildcardPattern(std::move(cells));
}

bool WildcardPattern::matches(const IndexTuple& t) const {
  if (t.size() != cells_.size()) throw ContractViolation("pattern arity mismatch");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (cells_[i] && *cells_[i] != t[i]) return false;
  }
  return true;
}

std::ostream& operator<<(std::ostream& os, const WildcardPattern& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) os << ' ';
    if (p[i]) {
      os << *p[i];
    } else {
      os << '?';
    }
  }
  return os;
}

PatternTrie::PatternTrie(std::size_t arity) : arity_(arity), nodes_(1) {
  if (arity == 0) throw ContractViolation("trie arity must be >= 1");
}

bool PatternTrie::insert(const WildcardPattern& p) {
  if (p.size() != arity_) throw ContractViolation("pattern arity mismatch");
  std::uint32_t at = 0;
  bool created = false;
  for (std::size_t i = 0; i < arity_; ++i) {
    auto next = static_cast<std::uint32_t>(nodes_.size());
    if (p[i]) {
      auto [it, fresh] = nodes_[at].children.try_emplace(*p[i], next);
      std::uint32_t child = it->second;
      if (fresh) nodes_.emplace_back();
      created = created || fresh;
      at = child;
    } else {
      if (!nodes_[at].wildcard) {
        nodes_[at].wildcard = next;
        nodes_.emplace_back();
        created = true;
      }
      at = *nodes_[at].wildcard;
    }
  }
  if (created) ++patterns_;
  return created;
}

bool PatternTrie::match_from(std::uint32_t node, std::size_t depth,
                             const IndexTuple& t) const {
  ++last_visits_;
  if (depth == arity_) return true;
  const Node& n = nodes_[node];
  if (n.wildcard && match_from(*n.wildcard, depth + 1, t)) return true;
  auto it = n.children.find(t[depth]);
  return it != n.children.end() && match_from(it->second, depth + 1, t);
}

bool PatternTrie::matches(const IndexTuple& t) const {
  if (t.size() != arity_) throw ContractViolation("tuple arity mismatch");
  last_visits_ = 0;
  if (patterns_ == 0) return false;
  return match_from(0, 0, t);
}

void PatternTrie::clear() {
  nodes_.assign(1, Node{});
  patterns_ = 0;
}

void PatternTrie::collect(std::uint32_t node,
                          std::vector<WildcardPattern::Cell>& prefix,
                          std::vector<WildcardPattern>& out) const {
  if (prefix.size() == arity_) {
    out.emplace_back(prefix);
    return;
  }
  const Node& n = nodes_[node];
  for (const auto& [index, child] : n.children) {
    prefix.push_back(index);
    collect(child, prefix, out);
    prefix.pop_back();
  }
  if (n.wildcard) {
    prefix.push_back(std::nullopt);
    collect(*n.wildcard, prefix, out);
    prefix.pop_back();
  }
}

std::vector<WildcardPattern> PatternTrie::patterns() const {
  std::vector<WildcardPattern> out;
  if (patterns_ == 0) return out;
  std::vector<WildcardPattern::Cell> prefix;
  collect(0, prefix, out);
  return out;
}

void PatternTrie::dump(std::ostream& os) const {
  for (const WildcardPattern& p : patterns()) os << p << '\n';
}

VectorTrie::VectorTrie(std::size_t arity) : arity_(arity), nodes_(1) {
  if (arity == 0) throw ContractViolation("trie arity must be >= 1");
}

bool VectorTrie::insert(const IndexTuple& t) {
  if (t.size() != arity_) throw ContractViolation("tuple arity mismatch");
  std::uint32_t at = 0;
  bool created = false;
  for (Index d : t) {
    auto next = static_cast<std::uint32_t>(nodes_.size());
    auto [it, fresh] = nodes_[at].try_emplace(d, next);
    std::uint32_t child = it->second;
    if (fresh) nodes_.emplace_back();
    created = created || fresh;
    at = child;
  }
  if (created) ++size_;
  return created;
}

bool VectorTrie::contains(const IndexTuple& t) const {
  if (t.size() != arity_) throw ContractViolation("tuple arity mismatch");
  std::uint32_t at = 0;
  for (Index d : t) {
    auto it = nodes_[at].find(d);
    if (it == nodes_[at].end()) return false;
    at = it->second;
  }
  return true;
}

}  // namespace enuminst
