#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entsa/deriv.hpp"
#include "entsa/distributions.hpp"
#include "entsa/matrix.hpp"
#include "entsa/model.hpp"
#include "entsa/rng.hpp"

namespace entsa {

enum class RangePolicy {
  global,    // one output range for the whole sample
  per_cell,  // output range taken separately inside each conditioning cell
};

enum class ConditioningScheme {
  automatic,  // grid for up to three conditioning dimensions, nested beyond
  grid,       // dense equal-width grid over the conditioning variables
  nested,     // outer draws of X_~i, one 1-D histogram over X_i per draw
};

std::string_view to_string(RangePolicy p);
std::string_view to_string(ConditioningScheme s);
RangePolicy parse_range_policy(std::string_view s);
ConditioningScheme parse_conditioning_scheme(std::string_view s);

/// Equal-width binning. Zero bin counts mean "auto": round(N^(1/3)) output
/// bins and round(N^(1/max(3, k+1))) bins per conditioning dimension.
struct HistogramSpec {
  std::size_t bins_output = 0;
  std::size_t bins_per_conditioning_dim = 0;
  RangePolicy range = RangePolicy::global;
  ConditioningScheme scheme = ConditioningScheme::automatic;
};

std::size_t output_bins(const HistogramSpec& spec, std::size_t n);
std::size_t conditioning_bins(const HistogramSpec& spec, std::size_t n, std::size_t k);

struct Histogram {
  std::vector<std::size_t> counts;
  double lower = 0.0;
  double upper = 0.0;
  [[nodiscard]] double width() const { return (upper - lower) / static_cast<double>(counts.size()); }
};

/// Counts over [min, max] of the sample with `bins` equal cells; the maximum
/// lands in the last cell.
Histogram histogram_counts(std::span<const double> samples, std::size_t bins);

/// Plug-in differential entropy -sum (k/N) ln(k/N) + ln(width). Needs
/// N >= 1000; a sample with max == min returns -inf.
double entropy_histogram(std::span<const double> samples, const HistogramSpec& spec = {});

struct ConditionalDiagnostics {
  std::size_t bins_output = 0;
  std::size_t bins_conditioning = 0;
  std::size_t occupied_cells = 0;
  std::size_t singleton_cells = 0;
  double mean_count = 0.0;  // samples per occupied conditioning cell
  bool sparse = false;      // mean_count below 10
};

/// H(Y | X) on an equal-width grid over the k columns of x_cond (k <= 4).
/// Throws SparseGridError when more than half of the occupied conditioning
/// cells hold a single sample.
double conditional_entropy(std::span<const double> y, const Matrix& x_cond,
                           const HistogramSpec& spec = {},
                           ConditionalDiagnostics* diagnostics = nullptr);

struct EntropyReport {
  double output_entropy = 0.0;  // H(Y), mean over repetitions
  double output_entropy_std = 0.0;
  std::vector<double> total_entropy, total_entropy_std;  // H_Ti
  std::vector<double> eta, eta_std;                      // H_Ti / H(Y)
  std::vector<double> kappa, kappa_std;                  // exp(H_Ti - H(Y))
  std::vector<bool> kappa_clipped;
  std::size_t n_samples = 0;
  std::size_t repetitions = 0;
  std::size_t evaluations = 0;
  std::size_t bins_output = 0;
  std::size_t bins_conditioning = 0;  // grid scheme only
  std::size_t nested_outer = 0, nested_inner = 0;
  RangePolicy range = RangePolicy::global;
  ConditioningScheme scheme = ConditioningScheme::grid;  // as resolved
  std::vector<double> output_lower, output_upper;        // per repetition
  bool sparse_warning = false;
};

/// H(Y) and H_Ti for every input, repeated on independent substreams.
/// The grid scheme uses n rows; the nested scheme uses n rows for H(Y) and
/// round(sqrt(n))^2 more per input.
EntropyReport estimate_entropy_indices(const Model& model, std::size_t n,
                                       const HistogramSpec& spec, std::size_t repetitions,
                                       const RngStream& rng);

struct EntropyBounds {
  std::vector<double> input_entropy;  // H(X_i)
  std::vector<double> h_bound;        // H(X_i) + l_i
  std::vector<double> kappa_bound;    // exp(H(X_i) + l_i - H(Y))
  std::vector<double> nu_bound;       // exp(H(X_i)) sqrt(nu_i) / exp(H(Y))
};

/// l_i = -inf gives an H-bound of -inf and zero exponentiated bounds.
EntropyBounds entropy_upper_bounds(const DerivMeasures& measures,
                                   std::span<const Distribution> inputs, double output_entropy);

/// exp(H(Z) + l_Z - H(Y)) for a group Z of independent inputs.
double group_kappa_bound(double group_l, std::span<const Distribution> inputs,
                         std::span<const std::size_t> group, double output_entropy);

struct KLResult {
  double value = 0.0;
  double floored_mass = 0.0;  // share of f1 mass on cells where f0 was empty
  bool floor_warning = false;
  std::size_t bins = 0;
  std::string warning;
};

/// KL(f1 || f0): f1 with x_i frozen at its mean, f0 unconditional, both
/// binned on one grid spanning the pooled sample.
KLResult kl_total_index(const Model& model, std::size_t i, std::size_t n,
                        const HistogramSpec& spec, const RngStream& rng);

struct FirstOrderResult {
  double eta = 0.0;  // I(X_i; Y) / H(Y), NaN when H(Y) is ~0
  double mutual_information = 0.0;
  double output_entropy = 0.0;
  bool defined = true;
};

FirstOrderResult first_order_entropy_index(const Model& model, std::size_t i, std::size_t n,
                                           const HistogramSpec& spec, const RngStream& rng);

}  // namespace entsa
