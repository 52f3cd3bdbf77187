#include "entsa/model.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include "entsa/error.hpp"

namespace entsa {

Model::Model(std::string name, std::vector<Distribution> inputs, Evaluator evaluator,
             std::vector<std::string> input_names)
    : name_(std::move(name)),
      inputs_(std::move(inputs)),
      evaluator_(std::make_shared<const Evaluator>(std::move(evaluator))),
      names_(std::move(input_names)),
      original_(inputs_.size()) {
  if (inputs_.empty()) throw ConfigError("model '" + name_ + "' needs at least one input");
  if (!*evaluator_) throw ConfigError("model '" + name_ + "' has no evaluator");
  if (names_.empty()) {
    for (std::size_t i = 0; i < inputs_.size(); ++i) names_.push_back("x" + std::to_string(i + 1));
  } else if (names_.size() != inputs_.size()) {
    throw ConfigError("model '" + name_ + "': input name count does not match dimension");
  }
  std::iota(original_.begin(), original_.end(), std::size_t{0});
}

Model Model::fix_variables(const std::map<std::size_t, double>& fixed) const {
  if (fixed.empty()) return *this;
  const std::size_t d = dimension();
  for (const auto& [index, value] : fixed) {
    if (index >= d) {
      std::ostringstream msg;
      msg << "cannot fix input " << index << " of model '" << name_ << "' (dimension " << d << ')';
      throw ConfigError(msg.str());
    }
    const auto& dist = inputs_[index];
    if (!(value >= dist.lower() && value <= dist.upper()))
      throw ConfigError("fixed value for '" + names_[index] + "' lies outside its support");
  }
  if (fixed.size() == d) throw ConfigError("cannot fix every input of model '" + name_ + "'");

  std::vector<Distribution> inputs;
  std::vector<std::string> names;
  std::vector<std::size_t> free_slots, original;
  std::vector<double> base(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    if (auto it = fixed.find(i); it != fixed.end()) {
      base[i] = it->second;
    } else {
      inputs.push_back(inputs_[i]);
      names.push_back(names_[i]);
      free_slots.push_back(i);
      original.push_back(original_[i]);
    }
  }

  auto parent = evaluator_;
  Evaluator reduced = [parent, base, free_slots](std::span<const double> x) {
    constexpr std::size_t kStack = 32;
    if (base.size() <= kStack) {
      std::array<double, kStack> full;
      std::copy(base.begin(), base.end(), full.begin());
      for (std::size_t k = 0; k < free_slots.size(); ++k) full[free_slots[k]] = x[k];
      return (*parent)(std::span<const double>(full.data(), base.size()));
    }
    std::vector<double> full = base;
    for (std::size_t k = 0; k < free_slots.size(); ++k) full[free_slots[k]] = x[k];
    return (*parent)(full);
  };
  Model out(name_ + "|fixed", std::move(inputs), std::move(reduced), std::move(names));
  out.original_ = std::move(original);
  return out;
}

Matrix sample_inputs(const Model& model, std::size_t n, const RngStream& rng, std::size_t chunk) {
  if (n == 0) throw ConfigError("sample size must be at least 1");
  const std::size_t d = model.dimension();
  Matrix x(n, d);
  for_each_chunk(n, chunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
    RngStream sub = rng.substream(c);
    std::vector<double> column(end - begin);
    for (std::size_t i = 0; i < d; ++i) {
      model.input(i).sample_into(column, sub);
      for (std::size_t r = begin; r < end; ++r) x(r, i) = column[r - begin];
    }
  });
  return x;
}

BatchResult evaluate_batch(const Model& model, const Matrix& inputs) {
  if (inputs.cols() != model.dimension())
    throw ConfigError("input matrix width does not match model dimension");
  BatchResult result;
  result.outputs.resize(inputs.rows());
  std::vector<std::size_t> bad(chunk_count(inputs.rows(), kDefaultChunk), 0);
  for_each_chunk(inputs.rows(), kDefaultChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const double y = model(inputs.row(r));
      result.outputs[r] = y;
      if (!std::isfinite(y)) ++bad[c];
    }
  });
  result.non_finite = std::accumulate(bad.begin(), bad.end(), std::size_t{0});
  if (inputs.rows() > 0 && result.non_finite == inputs.rows())
    throw NumericalError("model '" + model.name() + "' returned non-finite values for every row");
  return result;
}

SampleBatch draw_batch(const Model& model, std::size_t n, const RngStream& rng,
                       double max_non_finite_rate) {
  SampleBatch batch;
  batch.inputs = sample_inputs(model, n, rng);
  auto result = evaluate_batch(model, batch.inputs);
  if (result.non_finite_rate() > max_non_finite_rate) {
    std::ostringstream msg;
    msg << "model '" << model.name() << "' produced " << result.non_finite << " non-finite outputs in "
        << n << " rows (rate limit " << max_non_finite_rate << ')';
    throw NumericalError(msg.str());
  }
  batch.outputs = std::move(result.outputs);
  batch.non_finite = result.non_finite;
  batch.seed = rng.seed();
  batch.model_id = model.name();
  return batch;
}

std::vector<double> fd_gradient(const Model& model, std::span<const double> x, double h) {
  if (!(h > 0.0)) throw ConfigError("finite-difference step must be positive");
  const std::size_t d = model.dimension();
  if (x.size() != d) throw ConfigError("point dimension does not match model");
  std::vector<double> point(x.begin(), x.end());
  const double y0 = model(point);
  std::vector<double> grad(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double xi = point[i];
    const bool forward = xi + h <= model.input(i).upper();
    point[i] = forward ? xi + h : xi - h;
    const double y1 = model(point);
    point[i] = xi;
    const double g = forward ? (y1 - y0) / h : (y0 - y1) / h;
    grad[i] = std::isfinite(g) ? g : NAN;
  }
  return grad;
}

}  // namespace entsa
