#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entsa/model.hpp"
#include "entsa/rng.hpp"

namespace entsa {

enum class Provenance { closed_form, published };

std::string_view to_string(Provenance p);

/// A known per-variable quantity. NaN entries mean "not reported".
struct Reference {
  std::string quantity;  // "H_T", "l", "H_bound", "S_T", "kappa_T", ...
  std::vector<double> values;
  Provenance source = Provenance::closed_form;
  std::string note;      // sample size or setting the values belong to
};

struct BenchmarkModel {
  std::string name;
  Model model;
  std::vector<Reference> analytic;
  // Per-input Poincare constants for kinds without a closed form.
  std::vector<double> poincare_constants;
  // Variables pinned (at their means) before entropy indices are estimated.
  std::map<std::size_t, double> entropy_reduction;
  // Natural variable groups, if the benchmark defines any.
  std::vector<std::vector<std::size_t>> groups;

  [[nodiscard]] const Reference* find(std::string_view quantity, Provenance source,
                                      std::string_view note = {}) const;
};

struct BuiltinOptions {
  double r = 2.0;              // mono4 exponent
  std::vector<double> a;       // mono5 coefficients or gfunction3 parameters
  std::vector<double> sigma;   // mono5 standard deviations
};

std::vector<std::string> builtin_names();

/// Throws ConfigError for unknown names or bad options.
BenchmarkModel builtin(std::string_view name, const BuiltinOptions& options = {});

/// G-function  prod_i (|4x_i - 2| + a_i) / (1 + a_i)  over U(0,1)^d.
Model make_gfunction(std::string name, std::vector<double> a);

// --- randomised metafunction ------------------------------------------------

inline constexpr int kBasisCount = 9;
inline constexpr int kDummyBasis = 7;

double metafunction_basis(int id, double x);
std::string_view metafunction_basis_name(int id);

struct MetaFunctionSpec {
  std::array<int, 3> basis{1, 1, 1};  // u_i in 1..9
  std::array<int, 2> pair{1, 1};      // v_j in 1..3
  std::array<int, 3> triple{1, 1, 1}; // w_k in 1..3
  std::array<double, 3> alpha{};
  double beta = 0.0;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  friend bool operator==(const MetaFunctionSpec&, const MetaFunctionSpec&) = default;
};

struct MetaFunctionMixture {
  double weight_low = 0.5;
  double variance_low = 0.5;
  double variance_high = 5.0;
};

/// Draws a spec from stream (seed, stream) of the given generator seed.
MetaFunctionSpec draw_metafunction_spec(std::uint64_t seed, std::uint64_t stream,
                                        const MetaFunctionMixture& mixture = {});
MetaFunctionSpec draw_metafunction_spec(RngStream& rng, const MetaFunctionMixture& mixture = {});

Model make_metafunction(const MetaFunctionSpec& spec);

struct MetaFunction {
  MetaFunctionSpec spec;
  Model model;
};

MetaFunction draw_metafunction(RngStream& rng, const MetaFunctionMixture& mixture = {});

}  // namespace entsa
