#include "entsa/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace entsa {

std::vector<std::size_t> Ranking::order() const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < rank.size(); ++i)
    if (rank[i] > 0) idx.push_back(i);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return rank[a] < rank[b]; });
  return idx;
}

Ranking rank_descending(std::span<const double> values, double tie_tolerance) {
  const std::size_t d = values.size();
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < d; ++i)
    if (!std::isnan(values[i])) idx.push_back(i);
  auto tie = [&](double a, double b) {
    return a == b || std::abs(a - b) <= tie_tolerance;
  };
  // Stable sort keeps ascending index order among ties.
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return !tie(values[a], values[b]) && values[a] > values[b];
  });
  Ranking r{std::vector<std::size_t>(d, 0), std::vector<bool>(d, false)};
  for (std::size_t pos = 0; pos < idx.size(); ++pos) {
    r.rank[idx[pos]] = pos + 1;
    if (pos > 0 && tie(values[idx[pos]], values[idx[pos - 1]])) {
      r.tied[idx[pos]] = true;
      r.tied[idx[pos - 1]] = true;
    }
  }
  return r;
}

}  // namespace entsa
