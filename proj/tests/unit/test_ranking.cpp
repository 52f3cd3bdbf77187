#include <doctest.h>

#include <cmath>

#include <entsa/ranking.hpp>
#include <entsa/rng.hpp>

using namespace entsa;

TEST_CASE("descending ranks") {
  const std::vector<double> v{0.2, 0.9, 0.5};
  const auto r = rank_descending(v);
  CHECK(r.rank == std::vector<std::size_t>{3, 1, 2});
  CHECK(r.order() == std::vector<std::size_t>{1, 2, 0});
  CHECK(r.tied == std::vector<bool>{false, false, false});
}

TEST_CASE("ties keep variable order and are flagged") {
  const std::vector<double> v{0.5, 0.7, 0.5 + 1e-14};
  const auto r = rank_descending(v);
  CHECK(r.rank == std::vector<std::size_t>{2, 1, 3});
  CHECK(r.tied == std::vector<bool>{true, false, true});
}

TEST_CASE("NaN is unranked; infinities rank at the ends") {
  const std::vector<double> v{NAN, -INFINITY, 1.0, INFINITY};
  const auto r = rank_descending(v);
  CHECK(r.rank == std::vector<std::size_t>{0, 3, 2, 1});
  CHECK(r.order() == std::vector<std::size_t>{3, 2, 1});
}

TEST_CASE("ranks form a permutation") {
  RngStream rng(1);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> v(7);
    for (auto& x : v) x = std::floor(rng.uniform() * 4);  // many ties
    auto rk = rank_descending(v).rank;
    std::sort(rk.begin(), rk.end());
    for (std::size_t i = 0; i < rk.size(); ++i) REQUIRE(rk[i] == i + 1);
  }
}
