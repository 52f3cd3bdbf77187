#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "entsa/deriv.hpp"
#include "entsa/distributions.hpp"
#include "entsa/matrix.hpp"
#include "entsa/model.hpp"
#include "entsa/rng.hpp"

namespace entsa {

struct VarianceReport {
  double output_variance = 0.0;
  std::vector<double> total_variance;  // V_Ti
  std::vector<double> total_index;     // S_Ti, NaN when V(Y) vanishes
  std::vector<double> total_index_stderr;
  // Covariance of the per-row Jansen terms (f(A) - f(AB_i))^2 / 2.
  Matrix term_covariance;
  std::size_t n_base = 0;
  std::size_t excluded_rows = 0;
  std::size_t evaluations = 0;
  std::string estimator = "jansen";
  bool defined = true;

  /// Standard error of S_Ti - S_Tk over the shared base rows.
  [[nodiscard]] double index_difference_stderr(std::size_t i, std::size_t k) const;
};

/// Pick-and-freeze over base matrices A, B and hybrids AB_i (column i of A
/// taken from B): n_base (d + 2) evaluations.
VarianceReport estimate_total_effect_variance(const Model& model, std::size_t n_base,
                                              const RngStream& rng);

enum class ConstantSource { closed_form, table };

struct PoincareBound {
  std::vector<double> constant;  // C_i
  std::vector<double> bound;     // C_i nu_i, an upper bound on V_Ti
  std::vector<ConstantSource> source;

  /// C_i nu_i / V(Y), an upper bound on S_Ti.
  [[nodiscard]] std::vector<double> normalized(double output_variance) const;
};

/// Closed-form constants for Gaussian (sigma^2) and uniform ((b-a)^2/pi^2)
/// inputs; every other kind takes its constant from table_constants.
PoincareBound variance_upper_bound(const DerivMeasures& measures,
                                   std::span<const Distribution> inputs,
                                   std::span<const double> table_constants = {},
                                   std::span<const std::string> names = {});

}  // namespace entsa
