#include <doctest.h>

#include <cmath>
#include <numbers>

#include <entsa/deriv.hpp>
#include <entsa/error.hpp>
#include <entsa/testsuite.hpp>
#include <entsa/variance_sa.hpp>

using namespace entsa;

TEST_CASE("linear gaussian total indices") {
  BuiltinOptions o;
  o.a = {1, 2};
  const auto r = estimate_total_effect_variance(builtin("mono5", o).model, 100'000, RngStream(1));
  CHECK(std::abs(r.total_index[0] - 0.2) < 0.01);
  CHECK(std::abs(r.total_index[1] - 0.8) < 0.01);
  CHECK(r.output_variance == doctest::Approx(5.0).epsilon(0.02));
  CHECK(r.evaluations == 100'000 * 4);
  CHECK(r.estimator == "jansen");
}

TEST_CASE("ishigami and gfunction against closed forms") {
  for (const char* name : {"ishigami", "gfunction3"}) {
    CAPTURE(name);
    const auto b = builtin(name);
    const auto* st = b.find("S_T", Provenance::closed_form);
    REQUIRE(st);
    const auto r = estimate_total_effect_variance(b.model, 50'000, RngStream(2));
    for (std::size_t i = 0; i < b.model.dimension(); ++i) {
      CAPTURE(i);
      CHECK(std::abs(r.total_index[i] - st->values[i]) < 4 * r.total_index_stderr[i] + 0.005);
      CHECK(r.total_variance[i] >= 0.0);
      CHECK(r.total_variance[i] <= r.output_variance * 1.05);
    }
  }
}

TEST_CASE("ratio benchmark is a near tie") {
  const auto b = builtin("ratio_chi2");
  const auto r = estimate_total_effect_variance(b.model, 100'000, RngStream(3));
  CHECK(std::abs(r.total_index[0] - 0.546) < 0.02);
  CHECK(std::abs(r.total_index[1] - 0.547) < 0.02);
  CHECK(std::abs(r.total_index[0] - r.total_index[1]) <= 3 * r.index_difference_stderr(0, 1));
}

TEST_CASE("constant model leaves S_T undefined") {
  Model m("flat", {Distribution::uniform(0, 1), Distribution::uniform(0, 1)},
          [](std::span<const double>) { return 2.0; });
  const auto r = estimate_total_effect_variance(m, 1000, RngStream(4));
  CHECK_FALSE(r.defined);
  CHECK(r.output_variance == 0.0);
  CHECK(std::isnan(r.total_index[0]));
}

TEST_CASE("n_base below 100 is rejected") {
  CHECK_THROWS_AS(estimate_total_effect_variance(builtin("mono3").model, 50, RngStream(1)), ConfigError);
}

TEST_CASE("deterministic for a fixed seed") {
  const auto& m = builtin("ishigami").model;
  const auto a = estimate_total_effect_variance(m, 2000, RngStream(5));
  const auto b = estimate_total_effect_variance(m, 2000, RngStream(5));
  CHECK(a.total_variance == b.total_variance);
  CHECK(a.output_variance == b.output_variance);
}

TEST_CASE("Poincare constants") {
  Model lin("lin", {Distribution::uniform(0, 1), Distribution::gaussian(0, 4)},
            [](std::span<const double> x) { return 2 * x[0] + 3 * x[1]; });
  const auto dm = estimate_deriv_measures(lin, 100, 1e-5, RngStream(6));
  const auto pb = variance_upper_bound(dm, lin.inputs());
  CHECK(pb.constant[0] == doctest::Approx(1 / (std::numbers::pi * std::numbers::pi)));
  CHECK(pb.bound[0] == doctest::Approx(dm.nu[0] / (std::numbers::pi * std::numbers::pi)));
  CHECK(pb.constant[1] == 4.0);
  CHECK(pb.bound[1] == doctest::Approx(36.0).epsilon(1e-6));
  CHECK(pb.source[0] == ConstantSource::closed_form);

  const std::vector<Distribution> tri{Distribution::triangular(0, 1, 2)};
  const DerivMeasures one{{1.0}, {1.0}, {0.0}, {0.0}, 10, 0, 1e-5};
  const std::vector<std::string> names{"K"};
  try {
    (void)variance_upper_bound(one, tri, {}, names);
    FAIL("expected a configuration error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("K") != std::string::npos);
  }
  const std::vector<double> table{0.5};
  CHECK(variance_upper_bound(one, tri, table).bound[0] == 0.5);
}

TEST_CASE("linear gaussian bound equals V_T") {
  const auto b = builtin("mono5");
  const auto dm = estimate_deriv_measures(b.model, 100, 1e-5, RngStream(7));
  const auto pb = variance_upper_bound(dm, b.model.inputs());
  const auto* vt = b.find("V_T", Provenance::closed_form);
  for (std::size_t i = 0; i < 5; ++i) CHECK(pb.bound[i] == doctest::Approx(vt->values[i]).epsilon(1e-6));
}

TEST_CASE("V_T never exceeds its Poincare bound") {
  for (const char* name : {"ishigami", "gfunction3", "mono1", "mono2", "mono3", "mono4", "mono5", "flood"}) {
    CAPTURE(name);
    const auto b = builtin(name);
    const auto dm = estimate_deriv_measures(b.model, 20'000, 1e-5, RngStream(8));
    const auto pb = variance_upper_bound(dm, b.model.inputs(), b.poincare_constants);
    const auto r = estimate_total_effect_variance(b.model, 20'000, RngStream(9));
    for (std::size_t i = 0; i < b.model.dimension(); ++i) {
      CAPTURE(i);
      const double se = r.total_index_stderr[i] * r.output_variance;
      CHECK(r.total_variance[i] <= pb.bound[i] * 1.03 + 3 * se);
    }
  }
}

TEST_CASE("flood Poincare bounds against the published table") {
  const auto b = builtin("flood");
  const auto dm = estimate_deriv_measures(b.model, 100'000, 1e-5, RngStream(10));
  const auto pb = variance_upper_bound(dm, b.model.inputs(), b.poincare_constants);
  const auto* pub = b.find("nu_variance_bound", Provenance::published);
  for (std::size_t i = 0; i < 8; ++i) {
    CAPTURE(i);
    CHECK(std::abs(pb.bound[i] - pub->values[i]) < 0.03);
  }
}
