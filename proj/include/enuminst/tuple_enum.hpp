#pragma once

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

namespace enuminst {

using Index = std::uint32_t;

/// An n-tuple of candidate indices; position i indexes the candidate list of
/// variable i, and smaller indices are preferred.
class IndexTuple {
 public:
  IndexTuple() = default;
  explicit IndexTuple(std::vector<Index> digits) : digits_(std::move(digits)) {}
  IndexTuple(std::initializer_list<Index> digits) : digits_(digits) {}

  static IndexTuple origin(std::size_t n) {
    return IndexTuple(std::vector<Index>(n, 0));
  }

  std::size_t size() const { return digits_.size(); }
  Index operator[](std::size_t i) const { return digits_[i]; }
  Index& operator[](std::size_t i) { return digits_[i]; }
  auto begin() const { return digits_.begin(); }
  auto end() const { return digits_.end(); }
  const std::vector<Index>& digits() const { return digits_; }

  std::uint64_t digit_sum() const;

  friend auto operator<=>(const IndexTuple&, const IndexTuple&) = default;

 private:
  std::vector<Index> digits_;
};

std::string to_string(const IndexTuple& t);

struct IndexTupleHash {
  std::size_t operator()(const IndexTuple& t) const noexcept;
};

/// Inclusive per-position maxima of an index space.
class Bounds {
 public:
  /// Throws ContractViolation if `max` is empty.
  explicit Bounds(std::vector<Index> max);
  static Bounds uniform(std::size_t n, Index m);

  std::size_t arity() const { return max_.size(); }
  Index max(std::size_t i) const { return max_[i]; }
  const std::vector<Index>& maxima() const { return max_; }
  Index largest() const;
  std::uint64_t total_depth() const;  // sum of maxima
  /// Number of tuples in the space, saturating at UINT64_MAX.
  std::uint64_t volume() const;
  bool contains(const IndexTuple& t) const;

  friend bool operator==(const Bounds&, const Bounds&) = default;

 private:
  std::vector<Index> max_;
};

/// True iff a != b and a[i] <= b[i] everywhere. Arity mismatch throws.
bool pareto_dominates(const IndexTuple& a, const IndexTuple& b);

/// Pareto-graph successors of `t` (one digit incremented), listed from the
/// last position to the first.
std::vector<IndexTuple> successors(const IndexTuple& t, const Bounds& b);

struct MaxDigit {};
struct SumDigits {};
struct Leximax {};
struct IterativeDeepening {
  Index increment = 1;
};
struct RandomWalk {
  std::uint64_t seed = 0;
};

using Strategy =
    std::variant<MaxDigit, SumDigits, Leximax, IterativeDeepening, RandomWalk>;

/// Wire names: u, sum, lmax, id:<k>, rwlk:<seed>. Throws std::invalid_argument.
Strategy parse_strategy(std::string_view name);
std::string strategy_name(const Strategy& s);
bool is_fair(const Strategy& s);

/// SplitMix64; reference outputs for seed 1234567 are
/// 6457827717110365317, 3203168211198807973, 9817491932198370423.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform value in [0, bound) by multiply-shift; bound > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

/// Generates every tuple of a Bounds space exactly once in the order of its
/// strategy. next() returns nullopt once exhausted and keeps doing so.
class Enumerator {
 public:
  Enumerator(Strategy strategy, Bounds bounds);

  std::optional<IndexTuple> next();

  /// Restarts from the origin over `bounds`, which must have the same arity
  /// and no smaller maxima. A random walk advances its round counter and
  /// reseeds from (seed, round).
  void reset(Bounds bounds);

  const Strategy& strategy() const { return strategy_; }
  const Bounds& bounds() const { return bounds_; }
  std::uint64_t round() const { return round_; }

  /// Bytes held by the cursor, including heap storage.
  std::size_t state_footprint() const;

 private:
  // Stage by largest digit; colex order inside a stage.
  struct MaxDigitCursor {
    std::vector<Index> digits;
    Index stage = 0;
    bool started = false;
    bool done = false;
  };
  // Stage by digit sum; colex order inside a stage.
  struct SumCursor {
    std::vector<Index> digits;
    std::uint64_t stage = 0;
    bool started = false;
    bool done = false;
  };
  // Descending representative, then its permutations in lex order.
  struct LeximaxCursor {
    std::vector<Index> representative;
    std::vector<Index> permutation;
    bool started = false;
    bool done = false;
  };
  // Depth-bounded DFS over the Pareto graph, restarted with a deeper limit.
  struct DeepeningCursor {
    struct Frame {
      IndexTuple tuple;
      std::uint64_t depth;
      std::size_t next_position;  // positions still to try, counted down
    };
    std::vector<Frame> stack;
    std::unordered_set<IndexTuple, IndexTupleHash> round_visited;
    std::uint64_t depth_limit = 0;
    // Every tuple at depth <= completed_limit has already been yielded.
    std::optional<std::uint64_t> completed_limit;
    bool round_active = false;
    bool done = false;
  };
  struct RandomWalkCursor {
    SplitMix64 rng{0};
    std::vector<IndexTuple> frontier;
    std::unordered_set<IndexTuple, IndexTupleHash> seen;
    bool done = false;
  };

  using Cursor = std::variant<std::monostate, MaxDigitCursor, SumCursor, LeximaxCursor,
                              DeepeningCursor, RandomWalkCursor>;

  void start();
  std::optional<IndexTuple> next_max_digit(MaxDigitCursor& c);
  std::optional<IndexTuple> next_sum(SumCursor& c);
  std::optional<IndexTuple> next_leximax(LeximaxCursor& c);
  std::optional<IndexTuple> next_deepening(DeepeningCursor& c);
  std::optional<IndexTuple> next_random(RandomWalkCursor& c);

  Strategy strategy_;
  Bounds bounds_;
  std::uint64_t round_ = 0;
  Cursor cursor_;
};

}  // namespace enuminst
