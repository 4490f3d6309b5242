#include "enuminst/tuple_enum.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "enuminst/errors.hpp"

namespace enuminst {

std::uint64_t IndexTuple::digit_sum() const {
  return std::accumulate(digits_.begin(), digits_.end(), std::uint64_t{0});
}

std::string to_string(const IndexTuple& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(t[i]);
  }
  return out;
}

std::size_t IndexTupleHash::operator()(const IndexTuple& t) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Index d : t) {
    h ^= d;
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}

Bounds::Bounds(std::vector<Index> max) : max_(std::move(max)) {
  if (max_.empty()) throw ContractViolation("bounds need arity >= 1");
}

Bounds Bounds::uniform(std::size_t n, Index m) {
  return Bounds(std::vector<Index>(n, m));
}

Index Bounds::largest() const {
  return *std::max_element(max_.begin(), max_.end());
}

std::uint64_t Bounds::total_depth() const {
  return std::accumulate(max_.begin(), max_.end(), std::uint64_t{0});
}

std::uint64_t Bounds::volume() const {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t v = 1;
  for (Index m : max_) {
    std::uint64_t f = std::uint64_t{m} + 1;
    if (v > kMax / f) return kMax;
    v *= f;
  }
  return v;
}

bool Bounds::contains(const IndexTuple& t) const {
  if (t.size() != max_.size()) return false;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] > max_[i]) return false;
  }
  return true;
}

bool pareto_dominates(const IndexTuple& a, const IndexTuple& b) {
  if (a.size() != b.size()) {
    throw ContractViolation("pareto_dominates: arity mismatch");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return a != b;
}

std::vector<IndexTuple> successors(const IndexTuple& t, const Bounds& b) {
  std::vector<IndexTuple> out;
  for (std::size_t p = t.size(); p-- > 0;) {
    if (t[p] < b.max(p)) {
      IndexTuple s = t;
      ++s[p];
      out.push_back(std::move(s));
    }
  }
  return out;
}

namespace {

template <class T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("malformed " + std::string(what) + " '" +
                                std::string(text) + "'");
  }
  return value;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::uint64_t round_seed(std::uint64_t seed, std::uint64_t round) {
  if (round == 0) return seed;
  SplitMix64 mix(seed ^ (0xd1b54a32d192ed03ULL * round));
  return mix.next();
}

bool fits(const std::vector<Index>& digits, const Bounds& b) {
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] > b.max(i)) return false;
  }
  return true;
}

template <class T>
std::size_t vector_bytes(const std::vector<T>& v) {
  return v.capacity() * sizeof(T);
}

template <class Set>
std::size_t set_bytes(const Set& s, std::size_t arity) {
  return s.bucket_count() * sizeof(void*) +
         s.size() * (sizeof(typename Set::value_type) + arity * sizeof(Index));
}

}  // namespace

Strategy parse_strategy(std::string_view name) {
  if (name == "u") return MaxDigit{};
  if (name == "sum") return SumDigits{};
  if (name == "lmax") return Leximax{};
  if (name.starts_with("id:")) {
    auto k = parse_number<Index>(name.substr(3), "deepening increment");
    if (k == 0) throw std::invalid_argument("deepening increment must be >= 1");
    return IterativeDeepening{k};
  }
  if (name.starts_with("rwlk:")) {
    return RandomWalk{parse_number<std::uint64_t>(name.substr(5), "seed")};
  }
  throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

std::string strategy_name(const Strategy& s) {
  return std::visit(
      Overloaded{
          [](const MaxDigit&) -> std::string { return "u"; },
          [](const SumDigits&) -> std::string { return "sum"; },
          [](const Leximax&) -> std::string { return "lmax"; },
          [](const IterativeDeepening& d) -> std::string {
            return "id:" + std::to_string(d.increment);
          },
          [](const RandomWalk& r) -> std::string {
            return "rwlk:" + std::to_string(r.seed);
          },
      },
      s);
}

bool is_fair(const Strategy& s) {
  return std::holds_alternative<MaxDigit>(s) ||
         std::holds_alternative<SumDigits>(s) ||
         std::holds_alternative<Leximax>(s);
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(next()) * bound) >> 64);
}

Enumerator::Enumerator(Strategy strategy, Bounds bounds)
    : strategy_(std::move(strategy)), bounds_(std::move(bounds)) {
  if (auto* d = std::get_if<IterativeDeepening>(&strategy_);
      d && d->increment == 0) {
    throw ContractViolation("deepening increment must be >= 1");
  }
  start();
}

void Enumerator::reset(Bounds bounds) {
  if (bounds.arity() != bounds_.arity()) {
    throw ContractViolation("reset: arity changed");
  }
  for (std::size_t i = 0; i < bounds.arity(); ++i) {
    if (bounds.max(i) < bounds_.max(i)) {
      throw ContractViolation("reset: bounds may not shrink");
    }
  }
  bounds_ = std::move(bounds);
  ++round_;
  start();
}

void Enumerator::start() {
  const std::size_t n = bounds_.arity();
  std::visit(
      Overloaded{
          [&](const MaxDigit&) {
            cursor_ = MaxDigitCursor{std::vector<Index>(n, 0), 0, false, false};
          },
          [&](const SumDigits&) {
            cursor_ = SumCursor{std::vector<Index>(n, 0), 0, false, false};
          },
          [&](const Leximax&) {
            cursor_ = LeximaxCursor{std::vector<Index>(n, 0),
                                    std::vector<Index>(n, 0), false, false};
          },
          [&](const IterativeDeepening&) { cursor_ = DeepeningCursor{}; },
          [&](const RandomWalk& r) {
            RandomWalkCursor c;
            c.rng = SplitMix64(round_seed(r.seed, round_));
            c.frontier.push_back(IndexTuple::origin(n));
            c.seen.insert(IndexTuple::origin(n));
            cursor_ = std::move(c);
          },
      },
      strategy_);
}

std::optional<IndexTuple> Enumerator::next() {
  return std::visit(
      Overloaded{
          [&](MaxDigitCursor& c) { return next_max_digit(c); },
          [&](SumCursor& c) { return next_sum(c); },
          [&](LeximaxCursor& c) { return next_leximax(c); },
          [&](DeepeningCursor& c) { return next_deepening(c); },
          [&](RandomWalkCursor& c) { return next_random(c); },
          [](std::monostate) -> std::optional<IndexTuple> { return std::nullopt; },
      },
      cursor_);
}

std::optional<IndexTuple> Enumerator::next_max_digit(MaxDigitCursor& c) {
  if (c.done) return std::nullopt;
  if (!c.started) {
    c.started = true;
    return IndexTuple(c.digits);
  }
  const std::size_t n = c.digits.size();
  for (;;) {
    // Colex increment with every digit capped at min(stage, bound).
    bool advanced = false;
    for (std::size_t i = 0; i < n; ++i) {
      Index cap = std::min(c.stage, bounds_.max(i));
      if (c.digits[i] < cap) {
        ++c.digits[i];
        std::fill(c.digits.begin(), c.digits.begin() + i, 0);
        advanced = true;
        break;
      }
    }
    if (!advanced) {
      if (c.stage >= bounds_.largest()) {
        c.done = true;
        return std::nullopt;
      }
      ++c.stage;
      std::fill(c.digits.begin(), c.digits.end(), 0);
      continue;
    }
    if (*std::max_element(c.digits.begin(), c.digits.end()) == c.stage) {
      return IndexTuple(c.digits);
    }
  }
}

std::optional<IndexTuple> Enumerator::next_sum(SumCursor& c) {
  if (c.done) return std::nullopt;
  if (!c.started) {
    c.started = true;
    return IndexTuple(c.digits);
  }
  const std::size_t n = c.digits.size();
  // Smallest position k >= 1 that can take one unit from the positions below.
  std::uint64_t low = c.digits[0];
  for (std::size_t k = 1; k < n; ++k) {
    if (c.digits[k] < bounds_.max(k) && low >= 1) {
      ++c.digits[k];
      std::uint64_t rest = low - 1;
      for (std::size_t i = 0; i < k; ++i) {
        Index d = static_cast<Index>(std::min<std::uint64_t>(rest, bounds_.max(i)));
        c.digits[i] = d;
        rest -= d;
      }
      return IndexTuple(c.digits);
    }
    low += c.digits[k];
  }
  if (c.stage >= bounds_.total_depth()) {
    c.done = true;
    return std::nullopt;
  }
  ++c.stage;
  std::uint64_t rest = c.stage;
  for (std::size_t i = 0; i < n; ++i) {
    Index d = static_cast<Index>(std::min<std::uint64_t>(rest, bounds_.max(i)));
    c.digits[i] = d;
    rest -= d;
  }
  return IndexTuple(c.digits);
}

std::optional<IndexTuple> Enumerator::next_leximax(LeximaxCursor& c) {
  if (c.done) return std::nullopt;
  if (!c.started) {
    c.started = true;
    return IndexTuple(c.permutation);
  }
  const std::size_t n = c.representative.size();
  const Index top = bounds_.largest();
  for (;;) {
    if (std::next_permutation(c.permutation.begin(), c.permutation.end())) {
      if (fits(c.permutation, bounds_)) return IndexTuple(c.permutation);
      continue;
    }
    // Next non-increasing vector in lexicographic order.
    std::size_t i = n;
    while (i-- > 0) {
      Index ceiling = i == 0 ? top : c.representative[i - 1];
      if (c.representative[i] < ceiling) break;
    }
    if (i == static_cast<std::size_t>(-1)) {
      c.done = true;
      return std::nullopt;
    }
    ++c.representative[i];
    std::fill(c.representative.begin() + i + 1, c.representative.end(), 0);
    std::reverse_copy(c.representative.begin(), c.representative.end(),
                      c.permutation.begin());
    if (fits(c.permutation, bounds_)) return IndexTuple(c.permutation);
  }
}

std::optional<IndexTuple> Enumerator::next_deepening(DeepeningCursor& c) {
  const Index step = std::get<IterativeDeepening>(strategy_).increment;
  const std::size_t n = bounds_.arity();
  for (;;) {
    if (c.done) return std::nullopt;
    if (c.stack.empty()) {
      if (c.round_active) {
        c.completed_limit = c.depth_limit;
        c.round_active = false;
      }
      if (c.completed_limit && *c.completed_limit >= bounds_.total_depth()) {
        c.done = true;
        c.round_visited.clear();
        return std::nullopt;
      }
      c.depth_limit = c.completed_limit ? *c.completed_limit + step : step;
      c.round_visited.clear();
      IndexTuple origin = IndexTuple::origin(n);
      c.round_visited.insert(origin);
      c.stack.push_back({origin, 0, n});
      c.round_active = true;
      if (!c.completed_limit) return origin;
      continue;
    }
    auto& top = c.stack.back();
    if (top.next_position == 0 || top.depth >= c.depth_limit) {
      c.stack.pop_back();
      continue;
    }
    std::size_t p = --top.next_position;
    if (top.tuple[p] >= bounds_.max(p)) continue;
    IndexTuple succ = top.tuple;
    ++succ[p];
    if (!c.round_visited.insert(succ).second) continue;
    std::uint64_t depth = top.depth + 1;
    c.stack.push_back({succ, depth, n});
    if (!c.completed_limit || depth > *c.completed_limit) return succ;
  }
}

std::optional<IndexTuple> Enumerator::next_random(RandomWalkCursor& c) {
  if (c.done || c.frontier.empty()) {
    c.done = true;
    return std::nullopt;
  }
  std::size_t i = static_cast<std::size_t>(c.rng.below(c.frontier.size()));
  IndexTuple picked = std::move(c.frontier[i]);
  c.frontier[i] = std::move(c.frontier.back());
  c.frontier.pop_back();
  for (IndexTuple& s : successors(picked, bounds_)) {
    if (c.seen.insert(s).second) c.frontier.push_back(std::move(s));
  }
  return picked;
}

std::size_t Enumerator::state_footprint() const {
  const std::size_t n = bounds_.arity();
  return std::visit(
      Overloaded{
          [&](const MaxDigitCursor& c) {
            return sizeof(c) + vector_bytes(c.digits);
          },
          [&](const SumCursor& c) { return sizeof(c) + vector_bytes(c.digits); },
          [&](const LeximaxCursor& c) {
            return sizeof(c) + vector_bytes(c.representative) +
                   vector_bytes(c.permutation);
          },
          [&](const DeepeningCursor& c) {
            return sizeof(c) + vector_bytes(c.stack) * (1 + n) +
                   set_bytes(c.round_visited, n);
          },
          [&](const RandomWalkCursor& c) {
            return sizeof(c) + vector_bytes(c.frontier) * (1 + n) +
                   set_bytes(c.seen, n);
          },
          [](std::monostate) -> std::size_t { return 0; },
      },
      cursor_);
}

}  // namespace enuminst
