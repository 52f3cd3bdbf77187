#include "entsa/distributions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "entsa/error.hpp"

namespace entsa {

namespace {

using std::numbers::pi;
constexpr double kQuadratureTolerance = 1e-9;

using QuietPolicy = boost::math::policies::policy<
    boost::math::policies::domain_error<boost::math::policies::ignore_error>,
    boost::math::policies::overflow_error<boost::math::policies::ignore_error>,
    boost::math::policies::evaluation_error<boost::math::policies::ignore_error>>;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }
double normal_quantile(double p) {
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p, QuietPolicy());
}

std::string lower_alnum(std::string_view s) {
  std::string out;
  for (char c : s)
    if (std::isalnum(static_cast<unsigned char>(c)))
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

}  // namespace

std::string_view to_string(DistKind kind) {
  switch (kind) {
    case DistKind::uniform: return "Uniform";
    case DistKind::gaussian: return "Gaussian";
    case DistKind::triangular: return "Triangular";
    case DistKind::chi_squared: return "ChiSquared";
    case DistKind::truncated_gaussian: return "TruncatedGaussian";
    case DistKind::truncated_gumbel: return "TruncatedGumbel";
  }
  return "?";
}

Distribution::Distribution(DistKind kind, std::initializer_list<double> params)
    : kind_(kind), n_params_(params.size()) {
  std::copy(params.begin(), params.end(), params_.begin());
  validate();
}

Distribution Distribution::uniform(double a, double b) { return {DistKind::uniform, {a, b}}; }
Distribution Distribution::gaussian(double mean, double variance) {
  return {DistKind::gaussian, {mean, variance}};
}
Distribution Distribution::triangular(double a, double mode, double b) {
  return {DistKind::triangular, {a, mode, b}};
}
Distribution Distribution::chi_squared(double k) { return {DistKind::chi_squared, {k}}; }
Distribution Distribution::truncated_gaussian(double mean, double variance, double lower,
                                              double upper) {
  return {DistKind::truncated_gaussian, {mean, variance, lower, upper}};
}
Distribution Distribution::truncated_gumbel(double location, double scale, double lower,
                                            double upper) {
  return {DistKind::truncated_gumbel, {location, scale, lower, upper}};
}

Distribution Distribution::from_spec(std::string_view kind, std::span<const double> p) {
  const std::string k = lower_alnum(kind);
  auto need = [&](std::size_t n) {
    if (p.size() != n) {
      std::ostringstream msg;
      msg << "distribution '" << kind << "' takes " << n << " parameters, got " << p.size();
      throw ConfigError(msg.str());
    }
  };
  if (k == "uniform") { need(2); return uniform(p[0], p[1]); }
  if (k == "gaussian" || k == "normal") { need(2); return gaussian(p[0], p[1]); }
  if (k == "triangular") { need(3); return triangular(p[0], p[1], p[2]); }
  if (k == "chisquared" || k == "chi2") { need(1); return chi_squared(p[0]); }
  if (k == "truncatedgaussian" || k == "truncatednormal") {
    need(4);
    return truncated_gaussian(p[0], p[1], p[2], p[3]);
  }
  if (k == "truncatedgumbel") { need(4); return truncated_gumbel(p[0], p[1], p[2], p[3]); }
  throw ConfigError("unknown distribution kind '" + std::string(kind) + "'");
}

void Distribution::validate() {
  const auto& p = params_;
  auto fail = [&](const std::string& why) {
    throw ConfigError("invalid " + std::string(to_string(kind_)) + " parameters: " + why);
  };
  for (std::size_t i = 0; i < n_params_; ++i)
    if (std::isnan(p[i])) fail("NaN parameter");
  switch (kind_) {
    case DistKind::uniform:
      if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || !(p[0] < p[1])) fail("need finite a < b");
      break;
    case DistKind::gaussian:
      if (!std::isfinite(p[0]) || !(p[1] > 0.0) || !std::isfinite(p[1])) fail("need variance > 0");
      break;
    case DistKind::triangular:
      if (!std::isfinite(p[0]) || !std::isfinite(p[2]) || !(p[0] < p[2]) || p[1] < p[0] ||
          p[1] > p[2])
        fail("need a < b and a <= mode <= b");
      break;
    case DistKind::chi_squared:
      if (!(p[0] > 0.0) || !std::isfinite(p[0])) fail("need k > 0");
      break;
    case DistKind::truncated_gaussian:
    case DistKind::truncated_gumbel: {
      if (!std::isfinite(p[0]) || !(p[1] > 0.0) || !std::isfinite(p[1]))
        fail("need finite centre and positive spread");
      if (!(p[2] < p[3])) fail("need lower < upper");
      cdf_lo_ = base_cdf(p[2]);
      cdf_hi_ = base_cdf(p[3]);
      sf_lo_ = base_sf(p[2]);
      sf_hi_ = base_sf(p[3]);
      const double mass = cdf_lo_ < 0.5 ? cdf_hi_ - cdf_lo_ : sf_lo_ - sf_hi_;
      if (!(mass > 1e-300)) fail("truncation window carries no probability mass");
      break;
    }
  }
}

std::string Distribution::describe() const {
  std::ostringstream out;
  out << to_string(kind_) << '(';
  for (std::size_t i = 0; i < n_params_; ++i) {
    if (i) out << ", ";
    if (std::isinf(params_[i]))
      out << (params_[i] > 0 ? "inf" : "-inf");
    else
      out << params_[i];
  }
  out << ')';
  return out.str();
}

double Distribution::lower() const {
  switch (kind_) {
    case DistKind::uniform:
    case DistKind::triangular: return params_[0];
    case DistKind::gaussian: return -INFINITY;
    case DistKind::chi_squared: return 0.0;
    default: return params_[2];
  }
}

double Distribution::upper() const {
  switch (kind_) {
    case DistKind::uniform: return params_[1];
    case DistKind::triangular: return params_[2];
    case DistKind::gaussian:
    case DistKind::chi_squared: return INFINITY;
    default: return params_[3];
  }
}

// --- untruncated base laws -------------------------------------------------

double Distribution::base_cdf(double x) const {
  if (kind_ == DistKind::truncated_gaussian) return normal_cdf((x - params_[0]) / std::sqrt(params_[1]));
  const double z = (x - params_[0]) / params_[1];
  return std::exp(-std::exp(-z));
}

double Distribution::base_sf(double x) const {
  if (kind_ == DistKind::truncated_gaussian) return normal_sf((x - params_[0]) / std::sqrt(params_[1]));
  const double z = (x - params_[0]) / params_[1];
  return -std::expm1(-std::exp(-z));
}

double Distribution::base_log_pdf(double x) const {
  if (kind_ == DistKind::truncated_gaussian) {
    const double z = (x - params_[0]) / std::sqrt(params_[1]);
    return -0.5 * z * z - 0.5 * std::log(2.0 * pi * params_[1]);
  }
  const double z = (x - params_[0]) / params_[1];
  return -std::log(params_[1]) - z - std::exp(-z);
}

double Distribution::base_quantile(double p) const {
  if (kind_ == DistKind::truncated_gaussian) return params_[0] + std::sqrt(params_[1]) * normal_quantile(p);
  return params_[0] - params_[1] * std::log(-std::log(p));
}

double Distribution::base_quantile_sf(double q) const {
  if (kind_ == DistKind::truncated_gaussian)
    return params_[0] - std::sqrt(params_[1]) * normal_quantile(q);
  return params_[0] - params_[1] * std::log(-std::log1p(-q));
}

double Distribution::truncated_quantile(double u, double one_minus_u) const {
  double x;
  if (u <= 0.5)
    x = base_quantile(cdf_lo_ + u * (cdf_hi_ - cdf_lo_));
  else
    x = base_quantile_sf(sf_hi_ + one_minus_u * (sf_lo_ - sf_hi_));
  return std::clamp(x, params_[2], params_[3]);
}

// --- density, cdf, quantile -----------------------------------------------

double Distribution::log_pdf(double x) const {
  const auto& p = params_;
  switch (kind_) {
    case DistKind::uniform:
      return (x < p[0] || x > p[1]) ? -INFINITY : -std::log(p[1] - p[0]);
    case DistKind::gaussian: {
      const double z = (x - p[0]);
      return -0.5 * z * z / p[1] - 0.5 * std::log(2.0 * pi * p[1]);
    }
    case DistKind::triangular: {
      const double f = pdf(x);
      return f > 0.0 ? std::log(f) : -INFINITY;
    }
    case DistKind::chi_squared: {
      if (x < 0.0) return -INFINITY;
      const double k = p[0];
      return (k / 2.0 - 1.0) * std::log(x) - x / 2.0 - (k / 2.0) * std::log(2.0) -
             boost::math::lgamma(k / 2.0, QuietPolicy());
    }
    case DistKind::truncated_gaussian:
    case DistKind::truncated_gumbel: {
      if (x < p[2] || x > p[3]) return -INFINITY;
      const double mass = cdf_lo_ < 0.5 ? cdf_hi_ - cdf_lo_ : sf_lo_ - sf_hi_;
      return base_log_pdf(x) - std::log(mass);
    }
  }
  return -INFINITY;
}

double Distribution::pdf(double x) const {
  const auto& p = params_;
  if (kind_ == DistKind::triangular) {
    const double a = p[0], c = p[1], b = p[2];
    if (x < a || x > b) return 0.0;
    if (x < c) return 2.0 * (x - a) / ((b - a) * (c - a));
    if (x > c) return 2.0 * (b - x) / ((b - a) * (b - c));
    return 2.0 / (b - a);
  }
  return std::exp(log_pdf(x));
}

double Distribution::cdf(double x) const {
  const auto& p = params_;
  switch (kind_) {
    case DistKind::uniform: return std::clamp((x - p[0]) / (p[1] - p[0]), 0.0, 1.0);
    case DistKind::gaussian: return normal_cdf((x - p[0]) / std::sqrt(p[1]));
    case DistKind::triangular: {
      const double a = p[0], c = p[1], b = p[2];
      if (x <= a) return 0.0;
      if (x >= b) return 1.0;
      if (x <= c) return (x - a) * (x - a) / ((b - a) * (c - a));
      return 1.0 - (b - x) * (b - x) / ((b - a) * (b - c));
    }
    case DistKind::chi_squared:
      if (x <= 0.0) return 0.0;
      return boost::math::gamma_p(p[0] / 2.0, x / 2.0, QuietPolicy());
    case DistKind::truncated_gaussian:
    case DistKind::truncated_gumbel: {
      if (x <= p[2]) return 0.0;
      if (x >= p[3]) return 1.0;
      if (cdf_lo_ < 0.5) return std::clamp((base_cdf(x) - cdf_lo_) / (cdf_hi_ - cdf_lo_), 0.0, 1.0);
      return std::clamp((sf_lo_ - base_sf(x)) / (sf_lo_ - sf_hi_), 0.0, 1.0);
    }
  }
  return 0.0;
}

double Distribution::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw ConfigError("quantile level outside [0, 1]");
  const auto& p = params_;
  switch (kind_) {
    case DistKind::uniform: return p[0] + u * (p[1] - p[0]);
    case DistKind::gaussian: return p[0] + std::sqrt(p[1]) * normal_quantile(u);
    case DistKind::triangular: {
      const double a = p[0], c = p[1], b = p[2];
      const double fc = (c - a) / (b - a);
      if (u < fc) return a + std::sqrt(u * (b - a) * (c - a));
      return b - std::sqrt((1.0 - u) * (b - a) * (b - c));
    }
    case DistKind::chi_squared:
      return boost::math::gamma_p_inv(p[0] / 2.0, u, QuietPolicy()) * 2.0;
    case DistKind::truncated_gaussian:
    case DistKind::truncated_gumbel:
      if (u == 0.0) return p[2];
      if (u == 1.0) return p[3];
      return truncated_quantile(u, 1.0 - u);
  }
  return NAN;
}

// --- moments and entropy ----------------------------------------------------

double Distribution::truncated_moment(int order, double centre) const {
  const double lo = params_[2], hi = params_[3];
  double error = 0.0;
  double value;
  if (std::isfinite(lo) && std::isfinite(hi)) {
    auto f = [&](double x) { return std::pow(x - centre, order) * pdf(x); };
    value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-13, &error);
  } else {
    // Quantile domain: E[(X-c)^m] = int_0^1 (Q(u)-c)^m du.
    boost::math::quadrature::tanh_sinh<double> integrator;
    auto f = [&](double u, double uc) {
      const double one_minus_u = uc > 0.0 ? uc : 1.0 - u;
      const double uu = uc < 0.0 ? -uc : u;
      return std::pow(truncated_quantile(uu, one_minus_u) - centre, order);
    };
    value = integrator.integrate(f, 0.0, 1.0, 1e-13, &error);
  }
  if (!std::isfinite(value)) throw NumericalError("moment quadrature failed for " + describe());
  return value;
}

double Distribution::mean() const {
  const auto& p = params_;
  switch (kind_) {
    case DistKind::uniform: return 0.5 * (p[0] + p[1]);
    case DistKind::gaussian: return p[0];
    case DistKind::triangular: return (p[0] + p[1] + p[2]) / 3.0;
    case DistKind::chi_squared: return p[0];
    default: return truncated_moment(1, 0.0);
  }
}

double Distribution::variance() const {
  const auto& p = params_;
  switch (kind_) {
    case DistKind::uniform: return (p[1] - p[0]) * (p[1] - p[0]) / 12.0;
    case DistKind::gaussian: return p[1];
    case DistKind::triangular: {
      const double a = p[0], c = p[1], b = p[2];
      return (a * a + b * b + c * c - a * b - a * c - b * c) / 18.0;
    }
    case DistKind::chi_squared: return 2.0 * p[0];
    default: return truncated_moment(2, mean());
  }
}

double Distribution::truncated_entropy() const {
  const double lo = params_[2], hi = params_[3];
  const double log_mass = std::log(cdf_lo_ < 0.5 ? cdf_hi_ - cdf_lo_ : sf_lo_ - sf_hi_);
  double error = 0.0;
  double value;
  if (std::isfinite(lo) && std::isfinite(hi)) {
    auto f = [&](double x) {
      const double lg = base_log_pdf(x) - log_mass;
      const double g = std::exp(lg);
      return g > 0.0 ? -g * lg : 0.0;
    };
    value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 20, 1e-14, &error);
  } else {
    // H = -int_0^1 ln g(Q(u)) du, integrable log singularity at the open end.
    boost::math::quadrature::tanh_sinh<double> integrator;
    auto f = [&](double u, double uc) {
      const double one_minus_u = uc > 0.0 ? uc : 1.0 - u;
      const double uu = uc < 0.0 ? -uc : u;
      return -(base_log_pdf(truncated_quantile(uu, one_minus_u)) - log_mass);
    };
    value = integrator.integrate(f, 0.0, 1.0, 1e-14, &error);
  }
  if (!std::isfinite(value) || error > kQuadratureTolerance) {
    std::ostringstream msg;
    msg << "entropy quadrature did not converge for " << describe() << " (estimate " << value
        << ", error " << error << ", tolerance " << kQuadratureTolerance << ')';
    throw NumericalError(msg.str());
  }
  return value;
}

double Distribution::entropy() const {
  const auto& p = params_;
  switch (kind_) {
    case DistKind::uniform: return std::log(p[1] - p[0]);
    case DistKind::gaussian: return 0.5 * std::log(2.0 * pi * std::numbers::e * p[1]);
    case DistKind::triangular: return 0.5 + std::log((p[2] - p[0]) / 2.0);
    case DistKind::chi_squared: {
      const double h = p[0] / 2.0;
      return h + std::log(2.0) + boost::math::lgamma(h) + (1.0 - h) * boost::math::digamma(h);
    }
    default: return truncated_entropy();
  }
}

// --- sampling -----------------------------------------------------------------

void Distribution::sample_into(std::span<double> out, RngStream& rng) const {
  const auto& p = params_;
  switch (kind_) {
    case DistKind::chi_squared: {
      std::gamma_distribution<double> gamma(p[0] / 2.0, 2.0);
      for (double& v : out) v = gamma(rng);
      return;
    }
    case DistKind::truncated_gaussian:
    case DistKind::truncated_gumbel:
      for (double& v : out) {
        const double u = rng.uniform();
        v = truncated_quantile(u, 1.0 - u);
      }
      return;
    default:
      for (double& v : out) v = quantile(rng.uniform());
      return;
  }
}

std::vector<double> Distribution::sample(std::size_t n, RngStream& rng) const {
  if (n == 0) throw ConfigError("sample size must be at least 1");
  std::vector<double> out(n);
  sample_into(out, rng);
  return out;
}

double Distribution::sample_one(RngStream& rng) const {
  double v;
  sample_into({&v, 1}, rng);
  return v;
}

}  // namespace entsa
