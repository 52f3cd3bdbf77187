#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entsa/rng.hpp"

namespace entsa {

enum class DistKind {
  uniform,             // (a, b)
  gaussian,            // (mean, variance)
  triangular,          // (a, mode, b)
  chi_squared,         // (k), real-valued degrees of freedom
  truncated_gaussian,  // (mean, variance, lower, upper)
  truncated_gumbel,    // (location, scale, lower, upper)
};

std::string_view to_string(DistKind kind);

/// Univariate input law. Immutable after construction; every method is const
/// and safe to call concurrently. Sampling draws from a caller-owned stream.
///
/// Truncated laws are sampled by inverse CDF on the restricted quantile range
/// [F(lower), F(upper)], so a fixed stream state always yields the same draws.
class Distribution {
 public:
  static Distribution uniform(double a, double b);
  static Distribution gaussian(double mean, double variance);
  static Distribution triangular(double a, double mode, double b);
  static Distribution chi_squared(double k);
  static Distribution truncated_gaussian(double mean, double variance, double lower, double upper);
  static Distribution truncated_gumbel(double location, double scale, double lower, double upper);

  /// Build from a kind name and parameter list as written in experiment
  /// configs, e.g. ("TruncatedGumbel", {1013, 558, 500, 3000}).
  static Distribution from_spec(std::string_view kind, std::span<const double> params);

  [[nodiscard]] DistKind kind() const { return kind_; }
  [[nodiscard]] std::span<const double> params() const { return {params_.data(), n_params_}; }
  [[nodiscard]] std::string describe() const;

  [[nodiscard]] double lower() const;
  [[nodiscard]] double upper() const;

  [[nodiscard]] double pdf(double x) const;
  [[nodiscard]] double log_pdf(double x) const;
  [[nodiscard]] double cdf(double x) const;
  [[nodiscard]] double quantile(double u) const;

  [[nodiscard]] double mean() const;
  [[nodiscard]] double variance() const;

  /// Differential entropy in nats. Closed form for the untruncated kinds,
  /// adaptive quadrature (absolute tolerance 1e-9) for the truncated ones.
  [[nodiscard]] double entropy() const;

  [[nodiscard]] std::vector<double> sample(std::size_t n, RngStream& rng) const;
  void sample_into(std::span<double> out, RngStream& rng) const;
  double sample_one(RngStream& rng) const;

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  Distribution(DistKind kind, std::initializer_list<double> params);
  void validate();

  // Untruncated base law of a truncated kind.
  [[nodiscard]] double base_cdf(double x) const;
  [[nodiscard]] double base_sf(double x) const;
  [[nodiscard]] double base_log_pdf(double x) const;
  [[nodiscard]] double base_quantile(double p) const;
  [[nodiscard]] double base_quantile_sf(double q) const;
  [[nodiscard]] double truncated_quantile(double u, double one_minus_u) const;
  [[nodiscard]] double truncated_entropy() const;
  [[nodiscard]] double truncated_moment(int order, double centre) const;

  DistKind kind_ = DistKind::uniform;
  std::array<double, 4> params_{};
  std::size_t n_params_ = 0;
  // Truncation mass bookkeeping: F(lower), F(upper), S(lower), S(upper).
  double cdf_lo_ = 0.0, cdf_hi_ = 1.0, sf_lo_ = 1.0, sf_hi_ = 0.0;
};

}  // namespace entsa
