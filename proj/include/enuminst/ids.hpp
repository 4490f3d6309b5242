#pragma once

#include <compare>
#include <cstdint>
#include <functional>

namespace enuminst {

/// Typed 32-bit handle. Tags keep term, sort and symbol ids from mixing.
template <class Tag>
struct Id {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(Id, Id) = default;
};

using SortId = Id<struct SortTag>;
using SymbolId = Id<struct SymbolTag>;
using TermId = Id<struct TermTag>;

}  // namespace enuminst

template <class Tag>
struct std::hash<enuminst::Id<Tag>> {
  std::size_t operator()(enuminst::Id<Tag> id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
