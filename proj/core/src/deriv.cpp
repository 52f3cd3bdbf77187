#include "entsa/deriv.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "entsa/error.hpp"
#include "entsa/parallel.hpp"

namespace entsa {

namespace {

constexpr std::size_t kDerivChunk = 4096;

// Extended precision keeps the summation error of the three means below the
// rounding of the final doubles, so the chain inequality survives estimation.
struct ColumnSums {
  std::vector<long double> abs, sq, log;
  std::vector<std::size_t> zeros;
  std::size_t rows = 0, excluded = 0;

  explicit ColumnSums(std::size_t d) : abs(d), sq(d), log(d), zeros(d) {}

  void merge(const ColumnSums& o) {
    for (std::size_t i = 0; i < abs.size(); ++i) {
      abs[i] += o.abs[i];
      sq[i] += o.sq[i];
      log[i] += o.log[i];
      zeros[i] += o.zeros[i];
    }
    rows += o.rows;
    excluded += o.excluded;
  }
};

}  // namespace

Matrix sample_gradients(const Model& model, std::size_t n, double h, const RngStream& rng) {
  if (!(h > 0.0)) throw ConfigError("finite-difference step must be positive");
  const Matrix x = sample_inputs(model, n, rng);
  Matrix grads(n, model.dimension());
  for_each_chunk(n, kDerivChunk, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const auto g = fd_gradient(model, x.row(r), h);
      std::copy(g.begin(), g.end(), grads.row(r).begin());
    }
  });
  return grads;
}

DerivMeasures deriv_measures_from_gradients(const Matrix& gradients, double h,
                                            double max_excluded_rate) {
  const std::size_t n = gradients.rows(), d = gradients.cols();
  if (n == 0 || d == 0) throw ConfigError("empty gradient sample");

  std::vector<ColumnSums> partial(chunk_count(n, kDerivChunk), ColumnSums(d));
  for_each_chunk(n, kDerivChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
    auto& s = partial[c];
    for (std::size_t r = begin; r < end; ++r) {
      const auto row = gradients.row(r);
      if (std::any_of(row.begin(), row.end(), [](double v) { return !std::isfinite(v); })) {
        ++s.excluded;
        continue;
      }
      ++s.rows;
      for (std::size_t i = 0; i < d; ++i) {
        const long double a = std::abs(row[i]);
        s.abs[i] += a;
        s.sq[i] += a * a;
        if (a <= kGradientFloor) ++s.zeros[i];
        s.log[i] += std::log(std::max(a, static_cast<long double>(kGradientFloor)));
      }
    }
  });
  ColumnSums total(d);
  for (const auto& p : partial) total.merge(p);

  if (total.rows == 0 ||
      static_cast<double>(total.excluded) > max_excluded_rate * static_cast<double>(n)) {
    std::ostringstream msg;
    msg << total.excluded << " of " << n << " derivative rows were non-finite";
    throw NumericalError(msg.str());
  }

  DerivMeasures m;
  m.h = h;
  m.n_samples = total.rows;
  m.excluded_rows = total.excluded;
  const auto rows = static_cast<long double>(total.rows);
  for (std::size_t i = 0; i < d; ++i) {
    m.mu.push_back(static_cast<double>(total.abs[i] / rows));
    m.nu.push_back(static_cast<double>(total.sq[i] / rows));
    m.zero_fraction.push_back(static_cast<double>(total.zeros[i]) / rows);
    m.l.push_back(total.zeros[i] == total.rows ? -INFINITY
                                               : static_cast<double>(total.log[i] / rows));
  }
  return m;
}

DerivMeasures estimate_deriv_measures(const Model& model, std::size_t n, double h,
                                      const RngStream& rng) {
  if (n < 10) throw ConfigError("derivative measures need at least 10 samples");
  return deriv_measures_from_gradients(sample_gradients(model, n, h, rng), h);
}

GroupLogDerivative estimate_group_l(const Model& model, std::span<const std::size_t> group,
                                    std::size_t n, double h, const RngStream& rng) {
  if (group.empty()) throw ConfigError("variable group must not be empty");
  if (std::set<std::size_t>(group.begin(), group.end()).size() != group.size())
    throw ConfigError("variable group has repeated indices");
  for (std::size_t i : group)
    if (i >= model.dimension()) throw ConfigError("variable group index out of range");
  if (n < 10) throw ConfigError("derivative measures need at least 10 samples");
  if (!(h > 0.0)) throw ConfigError("finite-difference step must be positive");

  const Matrix x = sample_inputs(model, n, rng);
  Matrix directional(n, 1);
  for_each_chunk(n, kDerivChunk, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<double> point(model.dimension());
    for (std::size_t r = begin; r < end; ++r) {
      const auto row = x.row(r);
      std::copy(row.begin(), row.end(), point.begin());
      const double y0 = model(point);
      const bool forward = std::all_of(group.begin(), group.end(), [&](std::size_t i) {
        return point[i] + h <= model.input(i).upper();
      });
      for (std::size_t i : group) point[i] += forward ? h : -h;
      const double y1 = model(point);
      const double g = forward ? (y1 - y0) / h : (y0 - y1) / h;
      directional(r, 0) = std::isfinite(g) ? g : NAN;
    }
  });
  const auto m = deriv_measures_from_gradients(directional, h);
  return {m.l[0], m.zero_fraction[0], m.n_samples};
}

}  // namespace entsa
