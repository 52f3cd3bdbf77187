#include <doctest.h>

#include <cmath>
#include <numbers>

#include <entsa/deriv.hpp>
#include <entsa/entropy_sa.hpp>
#include <entsa/error.hpp>
#include <entsa/testsuite.hpp>
#include <entsa/variance_sa.hpp>

using namespace entsa;

namespace {

std::vector<double> outputs(const Model& m, std::size_t n, std::uint64_t seed) {
  return draw_batch(m, n, RngStream(seed)).outputs;
}

Model from_fn(std::size_t d, double (*f)(std::span<const double>)) {
  return Model("f", std::vector<Distribution>(d, Distribution::uniform(0, 1)), f);
}

double variance(const std::vector<double>& v) {
  double m = 0, s = 0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

// Plain 2-D plug-in mutual information, written independently of the library.
double mutual_information(const std::vector<double>& x, const std::vector<double>& y, std::size_t bx,
                          std::size_t by) {
  auto [xl, xh] = std::minmax_element(x.begin(), x.end());
  auto [yl, yh] = std::minmax_element(y.begin(), y.end());
  std::vector<double> joint(bx * by, 0), px(bx, 0), py(by, 0);
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    auto i = static_cast<std::size_t>((x[k] - *xl) / (*xh - *xl) * bx);
    auto j = static_cast<std::size_t>((y[k] - *yl) / (*yh - *yl) * by);
    i = std::min(i, bx - 1);
    j = std::min(j, by - 1);
    joint[i * by + j] += 1;
    px[i] += 1;
    py[j] += 1;
  }
  double mi = 0;
  for (std::size_t i = 0; i < bx; ++i)
    for (std::size_t j = 0; j < by; ++j)
      if (joint[i * by + j] > 0) mi += joint[i * by + j] / n * std::log(joint[i * by + j] * n / (px[i] * py[j]));
  return mi;
}

}  // namespace

TEST_CASE("auto bin counts") {
  HistogramSpec s;
  CHECK(output_bins(s, 1'000'000) == 100);
  CHECK(conditioning_bins(s, 1'000'000, 1) == 100);
  CHECK(conditioning_bins(s, 1'000'000, 3) == 32);
  CHECK(conditioning_bins(s, 1'000'000, 4) == 16);
  s.bins_output = 50;
  s.bins_per_conditioning_dim = 7;
  CHECK(output_bins(s, 1'000'000) == 50);
  CHECK(conditioning_bins(s, 10, 2) == 7);
}

TEST_CASE("histogram entropy of known laws") {
  RngStream rng(1);
  const auto u = Distribution::uniform(0, 1).sample(1'000'000, rng);
  CHECK(std::abs(entropy_histogram(u)) < 0.01);

  const auto e1 = std::exp(entropy_histogram(outputs(builtin("mono1").model, 1'000'000, 2)));
  CHECK(std::abs(e1 - 2.26) < 0.05);
  const auto e3 = std::exp(entropy_histogram(outputs(builtin("mono3").model, 1'000'000, 3)));
  CHECK(std::abs(e3 - 3.54) < 0.07);
}

TEST_CASE("degenerate and invalid samples") {
  const std::vector<double> flat(2000, 3.0);
  CHECK(entropy_histogram(flat) == -std::numeric_limits<double>::infinity());
  const std::vector<double> few(999, 1.0);
  CHECK_THROWS_AS(entropy_histogram(few), ConfigError);
  std::vector<double> bad(2000, 1.0);
  bad[10] = NAN;
  CHECK_THROWS_AS(entropy_histogram(bad), ConfigError);
}

TEST_CASE("affine law") {
  // Dyadic samples make a power-of-two scale and an integer shift exact in
  // floating point, so every sample keeps its bin.
  RngStream rng(4);
  std::vector<double> s(100'000);
  for (auto& x : s) x = std::floor(std::pow(rng.uniform(), 2) * 1048576.0) / 1048576.0;
  HistogramSpec spec;
  spec.bins_output = 64;
  const double h = entropy_histogram(s, spec);
  for (double a : {4.0, 0.125, -2.0}) {
    for (double b : {0.0, 3.0, -17.0}) {
      std::vector<double> t(s.size());
      for (std::size_t k = 0; k < s.size(); ++k) t[k] = a * s[k] + b;
      CAPTURE(a);
      CAPTURE(b);
      if (a > 0) CHECK(histogram_counts(t, 64).counts == histogram_counts(s, 64).counts);
      CHECK(std::abs(entropy_histogram(t, spec) - (h + std::log(std::abs(a)))) <= 1e-12);
    }
  }
  // General scale and shift: bin edges move with the data, counts can only
  // differ by rounding at the edges.
  std::vector<double> t(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) t[k] = 3.7 * s[k] + 0.31;
  CHECK(std::abs(entropy_histogram(t, spec) - (h + std::log(3.7))) < 1e-3);
}

TEST_CASE("histogram counts are chunk-independent") {
  RngStream rng(5);
  const auto u = Distribution::gaussian(0, 1).sample(300'000, rng);
  const auto h = histogram_counts(u, 97);
  std::size_t total = 0;
  for (auto c : h.counts) total += c;
  CHECK(total == u.size());
  CHECK(h.counts.back() >= 1);
}

TEST_CASE("conditional entropy") {
  const auto m = from_fn(2, [](std::span<const double> x) { return x[0]; });
  const auto b = draw_batch(m, 1'000'000, RngStream(6));
  Matrix x2(b.inputs.rows(), 1);
  for (std::size_t r = 0; r < x2.rows(); ++r) x2(r, 0) = b.inputs(r, 1);
  CHECK(std::abs(conditional_entropy(b.outputs, x2) - entropy_histogram(b.outputs)) < 0.02);
}

TEST_CASE("mono2 conditioned on x2") {
  const auto b = draw_batch(builtin("mono2").model, 10'000'000, RngStream(7));
  Matrix x2(b.inputs.rows(), 1);
  for (std::size_t r = 0; r < x2.rows(); ++r) x2(r, 0) = b.inputs(r, 1);
  HistogramSpec s;
  s.range = RangePolicy::per_cell;
  CHECK(std::abs(conditional_entropy(b.outputs, x2, s) + 1.0) < 0.02);
}

TEST_CASE("sparse grids") {
  const auto b = draw_batch(builtin("ishigami").model, 2000, RngStream(8));
  const auto x = b.inputs.without_column(0);
  HistogramSpec s;
  s.bins_per_conditioning_dim = 200;
  CHECK_THROWS_AS(conditional_entropy(b.outputs, x, s), SparseGridError);
  s.bins_per_conditioning_dim = 16;
  ConditionalDiagnostics diag;
  (void)conditional_entropy(b.outputs, x, s, &diag);
  CHECK(diag.sparse);
  CHECK(diag.mean_count < 10);

  const Matrix wide(2000, 5, 0.5);
  CHECK_THROWS_AS(conditional_entropy(b.outputs, wide), ConfigError);
}

TEST_CASE("published total entropies at 1e6") {
  const auto g = estimate_entropy_indices(builtin("gfunction3").model, 1'000'000, {}, 1, RngStream(9));
  const std::vector<double> gref{0.3477, -0.1376, -0.3988};
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(g.total_entropy[i] - gref[i]) < 0.05);

  const auto m1 = estimate_entropy_indices(builtin("mono1").model, 1'000'000, {}, 1, RngStream(10));
  CHECK(std::abs(m1.total_entropy[0] - 0.0) < 0.02);
  CHECK(std::abs(m1.total_entropy[1] - 0.5) < 0.02);
  CHECK(m1.n_samples == 1'000'000);
  CHECK(m1.bins_output == 100);
}

TEST_CASE("ishigami repetitions") {
  const auto r = estimate_entropy_indices(builtin("ishigami").model, 1'000'000, {}, 3, RngStream(11));
  CHECK(std::abs(r.total_entropy[0] - 1.3902) < 0.05);
  CHECK(r.repetitions == 3);
  CHECK(r.output_lower.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(r.total_entropy_std[i] > 0.0);
    CHECK(r.kappa[i] == doctest::Approx(std::exp(r.total_entropy[i] - r.output_entropy)).epsilon(0.01));
    CHECK(r.kappa[i] <= 1.0);
    CHECK(r.eta[i] == doctest::Approx(r.total_entropy[i] / r.output_entropy).epsilon(0.01));
  }
  const auto again = estimate_entropy_indices(builtin("ishigami").model, 1'000'000, {}, 3, RngStream(11));
  CHECK(again.total_entropy == r.total_entropy);
}

TEST_CASE("nested conditioning on a linear gaussian") {
  const auto b = builtin("mono5");
  const auto* ht = b.find("H_T", Provenance::closed_form);
  const auto r = estimate_entropy_indices(b.model, 1'000'000, {}, 1, RngStream(12));
  CHECK(r.scheme == ConditioningScheme::nested);
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(r.total_entropy[i] - ht->values[i]) < 0.05);
}

TEST_CASE("entropy upper bound holds on differentiable builtins") {
  HistogramSpec cell;
  cell.range = RangePolicy::per_cell;
  for (const char* name : {"mono1", "mono2", "mono3", "mono4", "mono5", "gfunction3"}) {
    CAPTURE(name);
    const auto b = builtin(name);
    const auto r = estimate_entropy_indices(b.model, 1'000'000, cell, 2, RngStream(13));
    const auto dm = estimate_deriv_measures(b.model, 20'000, 1e-5, RngStream(14));
    const auto eb = entropy_upper_bounds(dm, b.model.inputs(), r.output_entropy);
    for (std::size_t i = 0; i < b.model.dimension(); ++i) {
      CAPTURE(i);
      // monotonic models sit exactly on the bound, so the slack has to cover
      // the upward histogram bias at this sample size as well as the noise
      CHECK(r.total_entropy[i] <= eb.h_bound[i] + 3 * r.total_entropy_std[i] + 0.05);
    }
  }
}

TEST_CASE("entropy power inequality at the output") {
  const double c = 2 * std::numbers::pi * std::numbers::e;
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    const auto y = outputs(builtin(name).model, 200'000, 15);
    CHECK(std::exp(2 * entropy_histogram(y)) <= c * variance(y) * 1.05);
  }
}

TEST_CASE("scale mixture: conditional variance and entropy given the scale") {
  // y = z x with z ~ U(1,3), x ~ N(0,1)
  Model m("mix", {Distribution::gaussian(0, 1), Distribution::uniform(1, 3)},
          [](std::span<const double> v) { return v[1] * v[0]; });
  const auto vr = estimate_total_effect_variance(m, 200'000, RngStream(16));
  CHECK(vr.total_variance[0] == doctest::Approx(13.0 / 3).epsilon(0.02));

  const auto b = draw_batch(m, 2'000'000, RngStream(17));
  Matrix z(b.inputs.rows(), 1);
  for (std::size_t r = 0; r < z.rows(); ++r) z(r, 0) = b.inputs(r, 1);
  HistogramSpec s;
  s.range = RangePolicy::per_cell;
  const double expected = (3 * std::log(3.0) - 2) / 2 + 0.5 * std::log(2 * std::numbers::pi * std::numbers::e);
  CHECK(std::abs(conditional_entropy(b.outputs, z, s) - expected) < 0.02);
}

TEST_CASE("upper bounds") {
  const auto b = builtin("mono5");
  const auto dm = estimate_deriv_measures(b.model, 100, 1e-5, RngStream(18));
  const auto* ht = b.find("H_T", Provenance::closed_form);
  const auto eb = entropy_upper_bounds(dm, b.model.inputs(), 2.0);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(eb.h_bound[i] == doctest::Approx(ht->values[i]).epsilon(1e-6));
    CHECK(eb.kappa_bound[i] == doctest::Approx(std::exp(ht->values[i] - 2.0)).epsilon(1e-6));
    // constant derivative: sqrt(nu) = exp(l)
    CHECK(eb.nu_bound[i] == doctest::Approx(eb.kappa_bound[i]).epsilon(1e-6));
  }
  const std::vector<std::size_t> g{0, 1};
  CHECK(group_kappa_bound(std::log(3.0), b.model.inputs(), g, 2.0) ==
        doctest::Approx(std::exp(b.model.input(0).entropy() + b.model.input(1).entropy() + std::log(3.0) - 2.0)));
}

TEST_CASE("linear gaussian: entropy and variance families agree") {
  const auto b = builtin("mono5");
  const auto r = estimate_entropy_indices(b.model, 1'000'000, {}, 1, RngStream(19));
  const auto vr = estimate_total_effect_variance(b.model, 100'000, RngStream(20));
  for (std::size_t i = 0; i < 5; ++i) {
    const double ep = std::exp(2 * r.total_entropy[i]) / (2 * std::numbers::pi * std::numbers::e);
    CHECK(ep == doctest::Approx(vr.total_variance[i]).epsilon(0.1));
  }
}

TEST_CASE("KL index") {
  const auto dummy = from_fn(2, [](std::span<const double> x) { return 3 * x[1]; });
  const auto k = kl_total_index(dummy, 0, 1'000'000, {}, RngStream(21));
  CHECK(std::abs(k.value) < 0.01);
  CHECK_FALSE(k.floor_warning);

  const auto ratio = builtin("ratio_chi2").model;
  const auto k1 = kl_total_index(ratio, 0, 1'000'000, {}, RngStream(22));
  const auto k2 = kl_total_index(ratio, 1, 1'000'000, {}, RngStream(23));
  CHECK(std::abs(k1.value - 0.1571) < 0.03);
  CHECK(std::abs(k2.value - 0.0791) < 0.03);
  CHECK(k1.value > k2.value);
  CHECK_THROWS_AS(kl_total_index(ratio, 2, 1000, {}, RngStream(1)), ConfigError);
}

TEST_CASE("KL floor warning") {
  // Only the frozen value x1 = 0.5 lifts y by 100, so f1 sits entirely where
  // the unconditional sample has no mass.
  const auto m = from_fn(2, [](std::span<const double> x) { return x[0] == 0.5 ? 100 + x[1] : x[1]; });
  const auto k = kl_total_index(m, 0, 100'000, {}, RngStream(24));
  CHECK(k.floor_warning);
  CHECK(k.floored_mass > 0.05);
  CHECK_FALSE(k.warning.empty());
}

TEST_CASE("first-order index") {
  const auto dummy = from_fn(2, [](std::span<const double> x) { return 3 * x[1]; });
  CHECK(std::abs(first_order_entropy_index(dummy, 0, 1'000'000, {}, RngStream(25)).eta) < 0.02);

  // Y determined by X1: the plug-in MI saturates at the discrete entropy of
  // the binned output, ln(bins). The factor 3 keeps H(Y) = ln 3 away from 0.
  const auto id = from_fn(2, [](std::span<const double> x) { return 3 * x[0]; });
  const auto fo = first_order_entropy_index(id, 0, 1'000'000, {}, RngStream(26));
  CHECK(fo.mutual_information == doctest::Approx(std::log(100.0)).epsilon(0.01));

  const auto ish = builtin("ishigami").model;
  const auto f3 = first_order_entropy_index(ish, 2, 1'000'000, {}, RngStream(27));
  const auto f2 = first_order_entropy_index(ish, 1, 1'000'000, {}, RngStream(27));
  CHECK(f3.eta > 0.0);
  CHECK(f3.eta < f2.eta);

  // independent 2-D histogram oracle on a fresh sample
  const auto b = draw_batch(ish, 1'000'000, RngStream(28));
  const double oracle = mutual_information(b.inputs.column(1), b.outputs, 100, 100);
  CHECK(f2.mutual_information == doctest::Approx(oracle).epsilon(0.05));

  Model flat("flat", {Distribution::uniform(0, 1)}, [](std::span<const double>) { return 1.0; });
  CHECK_FALSE(first_order_entropy_index(flat, 0, 10'000, {}, RngStream(29)).defined);
}
