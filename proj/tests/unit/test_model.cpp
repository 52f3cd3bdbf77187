#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <entsa/error.hpp>
#include <entsa/model.hpp>
#include <entsa/testsuite.hpp>

using namespace entsa;

namespace {

std::vector<double> ishigami_gradient(std::span<const double> x) {
  return {std::cos(x[0]) * (1 + 0.1 * std::pow(x[2], 4)), 14 * std::sin(x[1]) * std::cos(x[1]),
          0.4 * std::pow(x[2], 3) * std::sin(x[0])};
}

}  // namespace

TEST_CASE("pointwise benchmark values") {
  const auto ish = builtin("ishigami").model;
  const std::vector<double> zero{0, 0, 0};
  CHECK(ish(zero) == 0.0);

  // the a = 0 factor vanishes at the centre
  const auto g = make_gfunction("g", {-0.5, 0.0, 0.5});
  const std::vector<double> half{0.5, 0.5, 0.5};
  CHECK(g(half) == 0.0);
  const std::vector<double> quarter{0.25, 0.25, 0.25};
  CHECK(builtin("gfunction3").model(quarter) == doctest::Approx(1.0));
}

TEST_CASE("flood model at the input means") {
  const auto& m = builtin("flood").model;
  std::vector<double> x;
  for (const auto& d : m.inputs()) x.push_back(d.mean());
  // Hand substitution into the overflow formula.
  const double q = x[0], ks = x[1], zv = x[2], zm = x[3], dd = x[4], cb = x[5], len = x[6], b = x[7];
  const double expected = zv + std::pow(q / (b * ks * std::sqrt((zm - zv) / len)), 0.6) - dd - cb;
  CHECK(std::isfinite(m(x)));
  CHECK(m(x) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("finite-difference gradients") {
  const auto mono3 = builtin("mono3").model;
  const std::vector<double> p{0.2, 0.9};
  const auto g3 = fd_gradient(mono3, p, 1e-5);
  CHECK(std::abs(g3[0] - 1) < 1e-6);
  CHECK(std::abs(g3[1] - 3) < 1e-6);

  const auto mono2 = builtin("mono2").model;
  const std::vector<double> q{0.3, 0.7};
  const auto g2 = fd_gradient(mono2, q, 1e-5);
  CHECK(std::abs(g2[0] - 0.7) < 1e-5);
  CHECK(std::abs(g2[1] - 0.3) < 1e-5);

  const auto ish = builtin("ishigami").model;
  RngStream rng(3);
  const auto pts = sample_inputs(ish, 200, rng);
  for (std::size_t r = 0; r < pts.rows(); ++r) {
    const auto fd = fd_gradient(ish, pts.row(r), 1e-5);
    const auto an = ishigami_gradient(pts.row(r));
    for (std::size_t i = 0; i < 3; ++i) REQUIRE(std::abs(fd[i] - an[i]) < 1e-3);
  }
}

TEST_CASE("monotonic gradients match closed forms within 10h relative") {
  const double h = 1e-5;
  RngStream rng(8);
  for (const char* name : {"mono1", "mono2", "mono3", "mono4"}) {
    const auto m = builtin(name).model;
    const auto pts = sample_inputs(m, 100, rng);
    for (std::size_t r = 0; r < pts.rows(); ++r) {
      const double a = pts(r, 0), b = pts(r, 1);
      std::vector<double> exact;
      if (std::string(name) == "mono1") exact = {1.0, std::exp(b)};
      if (std::string(name) == "mono2") exact = {b, a};
      if (std::string(name) == "mono3") exact = {1.0, 3.0};
      if (std::string(name) == "mono4") exact = {b * b, 2 * a * b};
      const auto fd = fd_gradient(m, pts.row(r), h);
      for (std::size_t i = 0; i < 2; ++i) {
        CAPTURE(name);
        // absolute slack covers exact zeros of the derivative; h^2 terms are far below it
        REQUIRE(std::abs(fd[i] - exact[i]) <= 10 * h * std::max(std::abs(exact[i]), 1.0));
      }
    }
  }
}

TEST_CASE("backward difference at the upper support edge") {
  Model m("sq", {Distribution::uniform(0, 1)}, [](std::span<const double> x) {
    if (x[0] > 1.0) return std::numeric_limits<double>::quiet_NaN();
    return x[0] * x[0];
  });
  const std::vector<double> edge{1.0};
  const auto g = fd_gradient(m, edge, 1e-5);
  CHECK(std::isfinite(g[0]));
  CHECK(std::abs(g[0] - 2.0) < 1e-4);
}

TEST_CASE("fix_variables") {
  const auto& flood = builtin("flood");
  const auto reduced = flood.model.fix_variables(flood.entropy_reduction);
  CHECK(reduced.dimension() == 4);
  CHECK(reduced.input_names() == std::vector<std::string>{"Q", "K_s", "Z_v", "D_d"});
  CHECK(reduced.original_indices() == std::vector<std::size_t>{0, 1, 2, 4});

  const auto ish = builtin("ishigami").model;
  const auto same = ish.fix_variables({});
  CHECK(same.dimension() == 3);
  RngStream rng(4);
  const auto pts = sample_inputs(ish, 100, rng);
  for (std::size_t r = 0; r < pts.rows(); ++r) CHECK(same(pts.row(r)) == ish(pts.row(r)));

  const auto two = ish.fix_variables({{2, 0.0}});
  const auto p2 = sample_inputs(two, 100, rng);
  for (std::size_t r = 0; r < p2.rows(); ++r) {
    const double x1 = p2(r, 0), x2 = p2(r, 1);
    CHECK(two(p2.row(r)) == doctest::Approx(std::sin(x1) + 7 * std::sin(x2) * std::sin(x2)));
  }

  CHECK_THROWS_AS((void)ish.fix_variables({{3, 0.0}}), ConfigError);
  CHECK_THROWS_AS((void)ish.fix_variables({{0, 10.0}}), ConfigError);
  CHECK_THROWS_AS((void)ish.fix_variables({{0, 0.0}, {1, 0.0}, {2, 0.0}}), ConfigError);
}

TEST_CASE("batch evaluation is row-order equivariant and reproducible") {
  const auto ish = builtin("ishigami").model;
  const auto pts = sample_inputs(ish, 5000, RngStream(21));
  const auto y = evaluate_batch(ish, pts).outputs;
  std::vector<std::size_t> perm(pts.rows());
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  const auto yp = evaluate_batch(ish, pts.select_rows(perm)).outputs;
  for (std::size_t r = 0; r < perm.size(); ++r) REQUIRE(yp[r] == y[perm[r]]);

  CHECK(sample_inputs(ish, 5000, RngStream(21)) == pts);
  const auto batch = draw_batch(ish, 5000, RngStream(21));
  CHECK(batch.outputs == y);
}

TEST_CASE("non-finite rows are flagged, not fatal") {
  Model m("spiky", {Distribution::uniform(0, 1)}, [](std::span<const double> x) {
    return x[0] < 0.01 ? NAN : x[0];
  });
  const auto pts = sample_inputs(m, 10000, RngStream(2));
  const auto res = evaluate_batch(m, pts);
  CHECK(res.non_finite > 0);
  CHECK(res.non_finite_rate() < 0.02);
  CHECK_THROWS_AS(draw_batch(m, 10000, RngStream(2)), NumericalError);
  CHECK_NOTHROW(draw_batch(m, 10000, RngStream(2), 0.05));

  Model dead("dead", {Distribution::uniform(0, 1)}, [](std::span<const double>) { return NAN; });
  CHECK_THROWS_AS(evaluate_batch(dead, pts), NumericalError);
}
