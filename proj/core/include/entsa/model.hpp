#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "entsa/distributions.hpp"
#include "entsa/matrix.hpp"
#include "entsa/parallel.hpp"
#include "entsa/rng.hpp"

namespace entsa {

using Evaluator = std::function<double(std::span<const double>)>;

/// Deterministic scalar model g: R^d -> R over independent inputs.
/// Copies share the evaluator; everything is immutable after construction.
class Model {
 public:
  Model(std::string name, std::vector<Distribution> inputs, Evaluator evaluator,
        std::vector<std::string> input_names = {});

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] std::size_t dimension() const { return inputs_.size(); }
  [[nodiscard]] const std::vector<Distribution>& inputs() const { return inputs_; }
  [[nodiscard]] const Distribution& input(std::size_t i) const { return inputs_.at(i); }
  [[nodiscard]] const std::vector<std::string>& input_names() const { return names_; }

  /// Position of each input in the model this one was reduced from (the
  /// identity for models that were never reduced).
  [[nodiscard]] const std::vector<std::size_t>& original_indices() const { return original_; }

  double operator()(std::span<const double> x) const { return (*evaluator_)(x); }

  /// Reduced model with the given coordinates pinned. Indices refer to this
  /// model's coordinates.
  [[nodiscard]] Model fix_variables(const std::map<std::size_t, double>& fixed) const;

 private:
  std::string name_;
  std::vector<Distribution> inputs_;
  std::shared_ptr<const Evaluator> evaluator_;
  std::vector<std::string> names_;
  std::vector<std::size_t> original_;
};

struct SampleBatch {
  Matrix inputs;
  std::vector<double> outputs;
  std::uint64_t seed = 0;
  std::string model_id;
  std::size_t non_finite = 0;
};

/// n independent input rows. Row chunk c is drawn from rng.substream(c), so
/// the matrix does not depend on the worker count.
Matrix sample_inputs(const Model& model, std::size_t n, const RngStream& rng,
                     std::size_t chunk = kDefaultChunk);

struct BatchResult {
  std::vector<double> outputs;
  std::size_t non_finite = 0;
  [[nodiscard]] double non_finite_rate() const {
    return outputs.empty() ? 0.0 : static_cast<double>(non_finite) / outputs.size();
  }
};

/// Row-wise evaluation. Non-finite outputs are kept in place and counted;
/// throws NumericalError only when every row fails.
BatchResult evaluate_batch(const Model& model, const Matrix& inputs);

/// Sample and evaluate in one go. Throws NumericalError when the non-finite
/// rate exceeds max_non_finite_rate.
SampleBatch draw_batch(const Model& model, std::size_t n, const RngStream& rng,
                       double max_non_finite_rate = 1e-3);

/// Forward differences, backward where x_i + h leaves the support. Costs d+1
/// evaluations; a coordinate whose difference is non-finite comes back NaN.
std::vector<double> fd_gradient(const Model& model, std::span<const double> x, double h);

inline constexpr double kDefaultStep = 1e-5;

}  // namespace entsa
