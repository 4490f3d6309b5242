#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <vector>

#include "enuminst/tuple_enum.hpp"

namespace enuminst {

/// An index tuple in which some cells are the wildcard `?`.
class WildcardPattern {
 public:
  using Cell = std::optional<Index>;  // nullopt is the wildcard

  /// Throws ContractViolation if every cell is a wildcard.
  explicit WildcardPattern(std::vector<Cell> cells);
  /// Keeps t[i] where keep[i] is set, wildcard elsewhere.
  static WildcardPattern from_mask(const IndexTuple& t,
                                   const std::vector<bool>& keep);

  std::size_t size() const { return cells_.size(); }
  const Cell& operator[](std::size_t i) const { return cells_[i]; }
  bool matches(const IndexTuple& t) const;

  friend bool operator==(const WildcardPattern&, const WildcardPattern&) = default;

 private:
  std::vector<Cell> cells_;
};

std::ostream& operator<<(std::ostream& os, const WildcardPattern& p);

/// Set of wildcard patterns over n-tuples. Every node has concrete children
/// keyed by index plus one wildcard child; matching descends into both, so a
/// query touches at most 2^n paths.
class PatternTrie {
 public:
  explicit PatternTrie(std::size_t arity);

  std::size_t arity() const { return arity_; }
  /// Returns false if the pattern was already stored.
  bool insert(const WildcardPattern& p);
  bool matches(const IndexTuple& t) const;
  std::size_t size() const { return patterns_; }
  std::size_t node_count() const { return nodes_.size(); }
  void clear();

  /// Nodes visited by the most recent matches() call.
  std::size_t last_visit_count() const { return last_visits_; }

  std::vector<WildcardPattern> patterns() const;
  /// One pattern per line, cells separated by spaces, `?` for wildcards.
  void dump(std::ostream& os) const;

 private:
  struct Node {
    std::map<Index, std::uint32_t> children;
    std::optional<std::uint32_t> wildcard;
  };

  bool match_from(std::uint32_t node, std::size_t depth,
                  const IndexTuple& t) const;
  void collect(std::uint32_t node, std::vector<WildcardPattern::Cell>& prefix,
               std::vector<WildcardPattern>& out) const;

  std::size_t arity_;
  std::vector<Node> nodes_;
  std::size_t patterns_ = 0;
  mutable std::size_t last_visits_ = 0;
};

/// Set of concrete index tuples.
class VectorTrie {
 public:
  explicit VectorTrie(std::size_t arity);

  std::size_t arity() const { return arity_; }
  /// True if `t` was not present before.
  bool insert(const IndexTuple& t);
  bool contains(const IndexTuple& t) const;
  std::size_t size() const { return size_; }

 private:
  std::size_t arity_;
  std::vector<std::map<Index, std::uint32_t>> nodes_;
  std::size_t size_ = 0;
};

}  // namespace enuminst
