#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "entsa/matrix.hpp"
#include "entsa/model.hpp"
#include "entsa/rng.hpp"

namespace entsa {

/// Partial derivatives with |dg/dx_i| below this count as zero; they enter
/// l_i as ln(kGradientFloor).
inline constexpr double kGradientFloor = 1e-300;

struct DerivMeasures {
  std::vector<double> mu;             // E|dg/dx_i|
  std::vector<double> nu;             // E (dg/dx_i)^2
  std::vector<double> l;              // E ln|dg/dx_i|, -inf for an all-zero column
  std::vector<double> zero_fraction;  // share of samples at or below the floor
  std::size_t n_samples = 0;          // rows that entered the means
  std::size_t excluded_rows = 0;      // rows dropped for a non-finite derivative
  double h = kDefaultStep;

  [[nodiscard]] std::size_t dimension() const { return mu.size(); }
};

/// n x d matrix of finite-difference gradients at n input draws.
Matrix sample_gradients(const Model& model, std::size_t n, double h, const RngStream& rng);

/// mu, nu and l from one gradient matrix, so exp(l) <= mu <= sqrt(nu) holds
/// on the same rows. Rows with a NaN entry are excluded; throws
/// NumericalError above max_excluded_rate.
DerivMeasures deriv_measures_from_gradients(const Matrix& gradients, double h,
                                            double max_excluded_rate = 1e-3);

DerivMeasures estimate_deriv_measures(const Model& model, std::size_t n, double h,
                                      const RngStream& rng);

struct GroupLogDerivative {
  double l = 0.0;
  double zero_fraction = 0.0;
  std::size_t n_samples = 0;
};

/// E ln|d/dt g(x + t 1_group)| at t = 0: the log of the summed partials over
/// the group, estimated by moving every member by h at once.
GroupLogDerivative estimate_group_l(const Model& model, std::span<const std::size_t> group,
                                    std::size_t n, double h, const RngStream& rng);

}  // namespace entsa
