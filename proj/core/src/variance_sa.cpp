#include "entsa/variance_sa.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "entsa/error.hpp"

namespace entsa {

double VarianceReport::index_difference_stderr(std::size_t i, std::size_t k) const {
  if (!defined || n_base == 0) return NAN;
  const double var = term_covariance(i, i) + term_covariance(k, k) - 2.0 * term_covariance(i, k);
  return std::sqrt(std::max(var, 0.0) / static_cast<double>(n_base)) / output_variance;
}

VarianceReport estimate_total_effect_variance(const Model& model, std::size_t n_base,
                                              const RngStream& rng) {
  if (n_base < 100) throw ConfigError("variance estimation needs n_base >= 100");
  const std::size_t d = model.dimension();
  const Matrix a = sample_inputs(model, n_base, rng.substream(0));
  const Matrix b = sample_inputs(model, n_base, rng.substream(1));
  const auto fa = evaluate_batch(model, a).outputs;
  const auto fb = evaluate_batch(model, b).outputs;

  std::vector<std::vector<double>> fab(d);
  Matrix ab = a;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t r = 0; r < n_base; ++r) ab(r, i) = b(r, i);
    fab[i] = evaluate_batch(model, ab).outputs;
    for (std::size_t r = 0; r < n_base; ++r) ab(r, i) = a(r, i);
  }

  std::vector<std::size_t> keep;
  keep.reserve(n_base);
  for (std::size_t r = 0; r < n_base; ++r) {
    bool ok = std::isfinite(fa[r]) && std::isfinite(fb[r]);
    for (std::size_t i = 0; ok && i < d; ++i) ok = std::isfinite(fab[i][r]);
    if (ok) keep.push_back(r);
  }
  const std::size_t excluded = n_base - keep.size();
  if (keep.size() < 2 || static_cast<double>(excluded) > 1e-3 * static_cast<double>(n_base)) {
    std::ostringstream msg;
    msg << "model '" << model.name() << "': " << excluded << " of " << n_base
        << " pick-and-freeze rows had non-finite outputs";
    throw NumericalError(msg.str());
  }
  const std::size_t n = keep.size();
  const auto nd = static_cast<double>(n);

  VarianceReport rep;
  rep.n_base = n;
  rep.excluded_rows = excluded;
  rep.evaluations = n_base * (d + 2);

  double mean = 0.0;
  for (std::size_t r : keep) mean += fa[r] + fb[r];
  mean /= 2.0 * nd;
  double ss = 0.0;
  for (std::size_t r : keep) ss += (fa[r] - mean) * (fa[r] - mean) + (fb[r] - mean) * (fb[r] - mean);
  rep.output_variance = ss / (2.0 * nd - 1.0);

  Matrix terms(n, d);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < d; ++i) {
      const double diff = fa[keep[k]] - fab[i][keep[k]];
      terms(k, i) = 0.5 * diff * diff;
    }
  std::vector<double> tmean(d, 0.0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < d; ++i) tmean[i] += terms(k, i);
  for (double& m : tmean) m /= nd;
  rep.term_covariance = Matrix(d, d);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j <= i; ++j)
        rep.term_covariance(i, j) += (terms(k, i) - tmean[i]) * (terms(k, j) - tmean[j]);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      rep.term_covariance(i, j) /= nd - 1.0;
      rep.term_covariance(j, i) = rep.term_covariance(i, j);
    }

  const double scale = std::max(1.0, mean * mean);
  rep.defined = rep.output_variance > 1e-14 * scale;
  rep.total_variance = tmean;
  for (std::size_t i = 0; i < d; ++i) {
    if (rep.defined) {
      rep.total_index.push_back(tmean[i] / rep.output_variance);
      rep.total_index_stderr.push_back(std::sqrt(rep.term_covariance(i, i) / nd) / rep.output_variance);
    } else {
      rep.total_index.push_back(NAN);
      rep.total_index_stderr.push_back(NAN);
    }
  }
  return rep;
}

std::vector<double> PoincareBound::normalized(double output_variance) const {
  std::vector<double> out;
  for (double b : bound) out.push_back(output_variance > 0.0 ? b / output_variance : NAN);
  return out;
}

PoincareBound variance_upper_bound(const DerivMeasures& measures,
                                   std::span<const Distribution> inputs,
                                   std::span<const double> table_constants,
                                   std::span<const std::string> names) {
  const std::size_t d = measures.dimension();
  if (inputs.size() != d) throw ConfigError("input count does not match derivative measures");
  if (!table_constants.empty() && table_constants.size() != d)
    throw ConfigError("Poincare constant table length does not match dimension");
  PoincareBound pb;
  for (std::size_t i = 0; i < d; ++i) {
    const auto& dist = inputs[i];
    double c;
    ConstantSource src = ConstantSource::closed_form;
    if (dist.kind() == DistKind::gaussian) {
      c = dist.variance();
    } else if (dist.kind() == DistKind::uniform) {
      const double w = dist.upper() - dist.lower();
      c = w * w / (std::numbers::pi * std::numbers::pi);
    } else if (!table_constants.empty() && table_constants[i] > 0.0) {
      c = table_constants[i];
      src = ConstantSource::table;
    } else {
      const std::string name = i < names.size() ? names[i] : "x" + std::to_string(i + 1);
      throw ConfigError("no Poincare constant for input '" + name + "' (" + dist.describe() +
                        "); supply one in the constant table");
    }
    pb.constant.push_back(c);
    pb.source.push_back(src);
    pb.bound.push_back(c * measures.nu[i]);
  }
  return pb;
}

}  // namespace entsa
