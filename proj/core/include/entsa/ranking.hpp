#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace entsa {

inline constexpr double kRankTieTolerance = 1e-12;

/// Descending ordinal ranks, 1 = most influential. Values within the tie
/// tolerance of each other keep ascending variable order and are flagged.
/// NaN entries are unranked (rank 0).
struct Ranking {
  std::vector<std::size_t> rank;
  std::vector<bool> tied;

  /// Variable indices from most to least influential, unranked ones omitted.
  [[nodiscard]] std::vector<std::size_t> order() const;
};

Ranking rank_descending(std::span<const double> values, double tie_tolerance = kRankTieTolerance);

}  // namespace entsa
