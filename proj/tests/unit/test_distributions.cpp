#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <entsa/distributions.hpp>
#include <entsa/error.hpp>

using namespace entsa;

namespace {

// Composite Simpson over [a, b]; independent of the library's quadrature.
template <class F>
double simpson(F f, double a, double b, int n = 200000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

double sample_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v) {
  const double m = sample_mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

std::vector<Distribution> flood_inputs() {
  return {Distribution::truncated_gumbel(1013, 558, 500, 3000),
          Distribution::truncated_gaussian(30, 64, 15, INFINITY),
          Distribution::triangular(49, 50, 51),
          Distribution::triangular(54, 55, 56),
          Distribution::uniform(7, 9),
          Distribution::triangular(55, 55.5, 56),
          Distribution::triangular(4990, 5000, 5010),
          Distribution::triangular(295, 300, 305)};
}

}  // namespace

TEST_CASE("uniform sample mean") {
  RngStream rng(11);
  const auto s = Distribution::uniform(0, 1).sample(1'000'000, rng);
  CHECK(std::abs(sample_mean(s) - 0.5) < 0.002);
}

TEST_CASE("triangular sample mean") {
  RngStream rng(12);
  const auto s = Distribution::triangular(49, 50, 51).sample(1'000'000, rng);
  CHECK(std::abs(sample_mean(s) - 50.0) < 0.01);
}

TEST_CASE("truncated draws stay in the window") {
  RngStream rng(13);
  const auto g = Distribution::truncated_gumbel(1013, 558, 500, 3000);
  for (double x : g.sample(200'000, rng)) {
    REQUIRE(x >= 500.0);
    REQUIRE(x <= 3000.0);
  }
  const auto n = Distribution::truncated_gaussian(30, 64, 15, INFINITY);
  for (double x : n.sample(200'000, rng)) REQUIRE(x >= 15.0);
}

TEST_CASE("closed-form entropies") {
  CHECK(Distribution::uniform(0, 1).entropy() == 0.0);
  for (double s : {0.5, 1.0, 3.0}) CHECK(Distribution::uniform(0, s).entropy() == doctest::Approx(std::log(s)));
  CHECK(Distribution::gaussian(0, 4).entropy() ==
        doctest::Approx(0.5 * std::log(2 * std::numbers::pi * std::numbers::e * 4)));
  CHECK(Distribution::triangular(1, 2, 5).entropy() == doctest::Approx(0.5 + std::log(2.0)));
  // chi-squared(2) is exponential with mean 2: entropy 1 + ln 2.
  CHECK(Distribution::chi_squared(2).entropy() == doctest::Approx(1 + std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("flood input exponential entropies") {
  const std::vector<double> published{2051, 30, 1.65, 1.65, 2, 0.825, 16.5, 8.24};
  const auto in = flood_inputs();
  for (std::size_t i = 0; i < in.size(); ++i) {
    CAPTURE(i);
    CHECK(std::exp(in[i].entropy()) == doctest::Approx(published[i]).epsilon(0.005));
  }
}

TEST_CASE("truncated entropy against an independent quadrature") {
  for (const auto& d : {Distribution::truncated_gumbel(1013, 558, 500, 3000),
                        Distribution::truncated_gaussian(30, 64, 15, 200)}) {
    const double h = simpson([&](double x) {
      const double p = d.pdf(x);
      return p > 0 ? -p * std::log(p) : 0.0;
    }, d.lower(), d.upper());
    CHECK(d.entropy() == doctest::Approx(h).epsilon(1e-7));
  }
}

TEST_CASE("wide truncation matches the untruncated gaussian") {
  const double mu = 3.0, var = 2.25, sd = 1.5;
  const auto t = Distribution::truncated_gaussian(mu, var, mu - 10 * sd, mu + 10 * sd);
  CHECK(std::abs(t.entropy() - Distribution::gaussian(mu, var).entropy()) < 1e-6);
}

TEST_CASE("pdf integrates to one and cdf is monotone") {
  auto all = flood_inputs();
  all.push_back(Distribution::gaussian(1, 2));
  all.push_back(Distribution::chi_squared(13.978));
  for (const auto& d : all) {
    CAPTURE(d.describe());
    const double lo = std::isfinite(d.lower()) ? d.lower() : d.quantile(1e-15);
    const double hi = std::isfinite(d.upper()) ? d.upper() : d.quantile(1 - 1e-15);
    CHECK(simpson([&](double x) { return d.pdf(x); }, lo, hi) == doctest::Approx(1.0).epsilon(1e-6));
    double prev = 0.0;
    for (int k = 0; k <= 1000; ++k) {
      const double c = d.cdf(lo + (hi - lo) * k / 1000.0);
      REQUIRE(c >= prev);
      prev = c;
    }
    if (std::isfinite(d.lower())) CHECK(d.cdf(d.lower()) == 0.0);
    if (std::isfinite(d.upper())) CHECK(d.cdf(d.upper()) == doctest::Approx(1.0));
  }
}

TEST_CASE("entropy power never exceeds 2 pi e variance") {
  auto all = flood_inputs();
  all.push_back(Distribution::uniform(-2, 5));
  all.push_back(Distribution::chi_squared(10));
  all.push_back(Distribution::chi_squared(13.978));
  const double c = 2 * std::numbers::pi * std::numbers::e;
  for (const auto& d : all) {
    CAPTURE(d.describe());
    CHECK(std::exp(2 * d.entropy()) <= c * d.variance() * 1.01);
  }
  const auto g = Distribution::gaussian(0.5, 3.0);
  CHECK(std::abs(std::exp(2 * g.entropy()) - c * 3.0) < 1e-9 * c * 3.0);
}

TEST_CASE("truncated moments agree with Monte Carlo") {
  RngStream rng(5);
  for (const auto& d : flood_inputs()) {
    const auto s = d.sample(400'000, rng);
    CAPTURE(d.describe());
    CHECK(sample_mean(s) == doctest::Approx(d.mean()).epsilon(0.01));
    CHECK(sample_variance(s) == doctest::Approx(d.variance()).epsilon(0.02));
  }
}

TEST_CASE("sampling is deterministic per stream") {
  const auto d = Distribution::truncated_gumbel(1013, 558, 500, 3000);
  RngStream a(99, 3), b(99, 3), c(99, 4);
  const auto x = d.sample(1000, a);
  CHECK(x == d.sample(1000, b));
  CHECK(x != d.sample(1000, c));
}

TEST_CASE("invalid parameters are configuration errors") {
  CHECK_THROWS_AS(Distribution::gaussian(0, 0), ConfigError);
  CHECK_THROWS_AS(Distribution::uniform(1, 1), ConfigError);
  CHECK_THROWS_AS(Distribution::triangular(0, 2, 1), ConfigError);
  CHECK_THROWS_AS(Distribution::chi_squared(-1), ConfigError);
  CHECK_THROWS_AS(Distribution::truncated_gaussian(0, 1, 2, 1), ConfigError);
  // A window far in the upper tail has no mass in double precision.
  CHECK_THROWS_AS(Distribution::truncated_gaussian(0, 1, 60, 70), ConfigError);
}

TEST_CASE("construction from kind name and parameter list") {
  const std::vector<double> p{1013, 558, 500, 3000};
  CHECK(Distribution::from_spec("Truncated Gumbel", p) == Distribution::truncated_gumbel(1013, 558, 500, 3000));
  const std::vector<double> t{49, 50, 51};
  CHECK(Distribution::from_spec("triangular", t) == Distribution::triangular(49, 50, 51));
  CHECK_THROWS_AS(Distribution::from_spec("cauchy", t), ConfigError);
  CHECK_THROWS_AS(Distribution::from_spec("uniform", t), ConfigError);
}
