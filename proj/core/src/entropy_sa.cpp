#include "entsa/entropy_sa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "entsa/error.hpp"
#include "entsa/parallel.hpp"

namespace entsa {

namespace {

constexpr std::size_t kMinHistogramSamples = 1000;
constexpr std::size_t kMaxGridCells = std::size_t{1} << 30;

std::size_t root_bins(std::size_t n, double power) {
  const auto b = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(n), 1.0 / power)));
  return std::max<std::size_t>(b, 2);
}

std::size_t bin_of(double x, double lower, double width, std::size_t bins) {
  if (!(width > 0.0)) return 0;
  const double t = (x - lower) / width;
  const auto k = static_cast<std::size_t>(t);
  return std::min(k, bins - 1);
}

void require_finite(std::span<const double> s, const char* what) {
  for (double v : s)
    if (!std::isfinite(v)) throw ConfigError(std::string(what) + " contains non-finite values");
}

// -sum (k/N) ln(k/N) over the non-empty cells.
double discrete_entropy(std::span<const std::size_t> counts, std::size_t n) {
  const auto nd = static_cast<double>(n);
  double s = 0.0;
  for (std::size_t k : counts)
    if (k > 0) s += static_cast<double>(k) * std::log(static_cast<double>(k));
  return std::log(nd) - s / nd;
}

double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  if (!std::isfinite(m)) return NAN;
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// Per-row histogram entropy with a row-local range, for nested conditioning.
double row_entropy(std::span<const double> values, std::size_t bins) {
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) return -INFINITY;
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) ++counts[bin_of(v, lo, width, bins)];
  return discrete_entropy(counts, values.size()) + std::log(width);
}

double nested_total_entropy(const Model& model, std::size_t i, std::size_t side, std::size_t bins,
                            const RngStream& rng) {
  const Matrix outer = sample_inputs(model, side, rng.substream(0));
  std::vector<double> per_row(side);
  std::vector<std::size_t> dropped(side, 0);
  for_each_chunk(side, 16, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<double> point(model.dimension()), inner(side), y;
    y.reserve(side);
    for (std::size_t o = begin; o < end; ++o) {
      RngStream sub = rng.substream(1 + o);
      model.input(i).sample_into(inner, sub);
      auto row = outer.row(o);
      std::copy(row.begin(), row.end(), point.begin());
      y.clear();
      for (double xi : inner) {
        point[i] = xi;
        const double v = model(point);
        if (std::isfinite(v)) y.push_back(v); else ++dropped[o];
      }
      per_row[o] = y.size() < 2 ? -INFINITY : row_entropy(y, bins);
    }
  });
  const std::size_t bad = std::accumulate(dropped.begin(), dropped.end(), std::size_t{0});
  if (static_cast<double>(bad) > 1e-3 * static_cast<double>(side * side))
    throw NumericalError("too many non-finite outputs in nested conditioning of input " +
                         model.input_names()[i]);
  return mean(per_row);
}

}  // namespace

std::string_view to_string(RangePolicy p) { return p == RangePolicy::global ? "global" : "per_cell"; }

std::string_view to_string(ConditioningScheme s) {
  switch (s) {
    case ConditioningScheme::automatic: return "auto";
    case ConditioningScheme::grid: return "grid";
    case ConditioningScheme::nested: return "nested";
  }
  return "?";
}

RangePolicy parse_range_policy(std::string_view s) {
  if (s == "global") return RangePolicy::global;
  if (s == "per_cell") return RangePolicy::per_cell;
  throw ConfigError("unknown range policy '" + std::string(s) + "' (global, per_cell)");
}

ConditioningScheme parse_conditioning_scheme(std::string_view s) {
  if (s == "auto") return ConditioningScheme::automatic;
  if (s == "grid") return ConditioningScheme::grid;
  if (s == "nested") return ConditioningScheme::nested;
  throw ConfigError("unknown conditioning scheme '" + std::string(s) + "' (auto, grid, nested)");
}

std::size_t output_bins(const HistogramSpec& spec, std::size_t n) {
  if (spec.bins_output == 1) throw ConfigError("histograms need at least 2 bins");
  return spec.bins_output ? spec.bins_output : root_bins(n, 3.0);
}

std::size_t conditioning_bins(const HistogramSpec& spec, std::size_t n, std::size_t k) {
  if (spec.bins_per_conditioning_dim == 1) throw ConfigError("histograms need at least 2 bins");
  if (spec.bins_per_conditioning_dim) return spec.bins_per_conditioning_dim;
  return root_bins(n, std::max(3.0, static_cast<double>(k + 1)));
}

Histogram histogram_counts(std::span<const double> samples, std::size_t bins) {
  if (bins < 2) throw ConfigError("histograms need at least 2 bins");
  if (samples.empty()) throw ConfigError("empty sample");
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  Histogram h{std::vector<std::size_t>(bins, 0), *lo_it, *hi_it};
  const double width = h.width();
  const std::size_t n = samples.size();
  std::vector<std::vector<std::size_t>> partial(chunk_count(n, kDefaultChunk));
  for_each_chunk(n, kDefaultChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
    auto& counts = partial[c];
    counts.assign(bins, 0);
    for (std::size_t r = begin; r < end; ++r) ++counts[bin_of(samples[r], h.lower, width, bins)];
  });
  for (const auto& p : partial)
    for (std::size_t b = 0; b < bins; ++b) h.counts[b] += p[b];
  return h;
}

double entropy_histogram(std::span<const double> samples, const HistogramSpec& spec) {
  if (samples.size() < kMinHistogramSamples)
    throw ConfigError("histogram entropy needs at least 1000 samples");
  require_finite(samples, "sample");
  const auto h = histogram_counts(samples, output_bins(spec, samples.size()));
  if (!(h.upper > h.lower)) return -INFINITY;
  return discrete_entropy(h.counts, samples.size()) + std::log(h.width());
}

double conditional_entropy(std::span<const double> y, const Matrix& x_cond,
                           const HistogramSpec& spec, ConditionalDiagnostics* diagnostics) {
  const std::size_t n = y.size(), k = x_cond.cols();
  if (x_cond.rows() != n) throw ConfigError("conditioning matrix rows do not match output length");
  if (k == 0) throw ConfigError("conditional entropy needs at least one conditioning variable");
  if (k > 4)
    throw ConfigError("a dense conditioning grid is limited to 4 dimensions; fix variables first "
                      "or use the nested conditioning scheme");
  if (n < kMinHistogramSamples) throw ConfigError("histogram entropy needs at least 1000 samples");
  require_finite(y, "output sample");
  require_finite(x_cond.data(), "conditioning sample");

  const std::size_t by = output_bins(spec, n);
  const std::size_t bx = conditioning_bins(spec, n, k);
  std::size_t cells = 1;
  for (std::size_t j = 0; j < k; ++j) {
    if (cells > kMaxGridCells / bx) throw ConfigError("conditioning grid too large");
    cells *= bx;
  }

  const auto [ylo_it, yhi_it] = std::minmax_element(y.begin(), y.end());
  const double ylo = *ylo_it, yhi = *yhi_it;
  if (!(yhi > ylo)) return -INFINITY;
  const double yw = (yhi - ylo) / static_cast<double>(by);

  std::vector<double> xlo(k), xw(k);
  for (std::size_t j = 0; j < k; ++j) {
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t r = 0; r < n; ++r) {
      lo = std::min(lo, x_cond(r, j));
      hi = std::max(hi, x_cond(r, j));
    }
    xlo[j] = lo;
    xw[j] = (hi - lo) / static_cast<double>(bx);
  }

  std::vector<std::uint32_t> cell(n);
  for_each_chunk(n, kDefaultChunk, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      std::size_t c = 0;
      for (std::size_t j = 0; j < k; ++j) c = c * bx + bin_of(x_cond(r, j), xlo[j], xw[j], bx);
      cell[r] = static_cast<std::uint32_t>(c);
    }
  });

  // Counting sort of the outputs by conditioning cell.
  std::vector<std::size_t> offset(cells + 1, 0);
  for (std::uint32_t c : cell) ++offset[c + 1];
  std::partial_sum(offset.begin(), offset.end(), offset.begin());
  std::vector<double> sorted(n);
  {
    std::vector<std::size_t> cursor(offset.begin(), offset.end() - 1);
    for (std::size_t r = 0; r < n; ++r) sorted[cursor[cell[r]]++] = y[r];
  }

  std::vector<std::size_t> scratch(by, 0), touched;
  touched.reserve(by);
  double sum_klogk = 0.0;   // sum_ij k_ij ln(k_ij / k_i)
  double sum_logw = 0.0;    // sum_i k_i ln(width_i), per_cell only
  std::size_t occupied = 0, singletons = 0;
  for (std::size_t c = 0; c < cells; ++c) {
    const std::size_t begin = offset[c], end = offset[c + 1], kc = end - begin;
    if (kc == 0) continue;
    ++occupied;
    if (kc == 1) ++singletons;
    double lo = ylo, w = yw;
    if (spec.range == RangePolicy::per_cell) {
      const auto [a, b] = std::minmax_element(sorted.begin() + begin, sorted.begin() + end);
      if (*b > *a) {
        lo = *a;
        w = (*b - *a) / static_cast<double>(by);
      }
      sum_logw += static_cast<double>(kc) * std::log(w);
    }
    for (std::size_t r = begin; r < end; ++r) {
      const std::size_t j = bin_of(sorted[r], lo, w, by);
      if (scratch[j]++ == 0) touched.push_back(j);
    }
    const double log_kc = std::log(static_cast<double>(kc));
    for (std::size_t j : touched) {
      const auto kij = static_cast<double>(scratch[j]);
      sum_klogk += kij * (std::log(kij) - log_kc);
      scratch[j] = 0;
    }
    touched.clear();
  }

  const double mean_count = static_cast<double>(n) / static_cast<double>(occupied);
  if (diagnostics) {
    diagnostics->bins_output = by;
    diagnostics->bins_conditioning = bx;
    diagnostics->occupied_cells = occupied;
    diagnostics->singleton_cells = singletons;
    diagnostics->mean_count = mean_count;
    diagnostics->sparse = mean_count < 10.0;
  }
  if (2 * singletons > occupied) {
    std::ostringstream msg;
    msg << "conditioning grid too sparse: " << singletons << " of " << occupied
        << " occupied cells hold a single sample (" << bx << " bins per dimension, " << k
        << " dimensions, " << n << " samples)";
    throw SparseGridError(msg.str());
  }

  const auto nd = static_cast<double>(n);
  const double log_width = spec.range == RangePolicy::per_cell ? sum_logw / nd : std::log(yw);
  return -sum_klogk / nd + log_width;
}

EntropyReport estimate_entropy_indices(const Model& model, std::size_t n,
                                       const HistogramSpec& spec, std::size_t repetitions,
                                       const RngStream& rng) {
  if (repetitions == 0) throw ConfigError("repetitions must be at least 1");
  if (n < kMinHistogramSamples) throw ConfigError("entropy indices need at least 1000 samples");
  const std::size_t d = model.dimension();
  const std::size_t k = d - 1;

  EntropyReport rep;
  rep.n_samples = n;
  rep.repetitions = repetitions;
  rep.range = spec.range;
  rep.scheme = spec.scheme;
  if (rep.scheme == ConditioningScheme::automatic)
    rep.scheme = k <= 3 ? ConditioningScheme::grid : ConditioningScheme::nested;
  rep.bins_output = output_bins(spec, n);
  const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  if (k > 0 && rep.scheme == ConditioningScheme::grid) rep.bins_conditioning = conditioning_bins(spec, n, k);
  if (k > 0 && rep.scheme == ConditioningScheme::nested) {
    rep.nested_outer = rep.nested_inner = side;
  }

  std::vector<double> hy(repetitions);
  std::vector<std::vector<double>> ht(d, std::vector<double>(repetitions));
  for (std::size_t r = 0; r < repetitions; ++r) {
    const RngStream stream = rng.substream(r);
    SampleBatch batch = draw_batch(model, n, stream.substream(0));
    rep.evaluations += n;
    std::vector<std::size_t> finite_rows;
    if (batch.non_finite > 0) {
      for (std::size_t j = 0; j < n; ++j)
        if (std::isfinite(batch.outputs[j])) finite_rows.push_back(j);
      batch.inputs = batch.inputs.select_rows(finite_rows);
      std::vector<double> kept;
      for (std::size_t j : finite_rows) kept.push_back(batch.outputs[j]);
      batch.outputs = std::move(kept);
    }
    const auto& y = batch.outputs;
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    rep.output_lower.push_back(*lo);
    rep.output_upper.push_back(*hi);
    hy[r] = entropy_histogram(y, spec);

    for (std::size_t i = 0; i < d; ++i) {
      if (k == 0) {
        ht[i][r] = hy[r];
      } else if (rep.scheme == ConditioningScheme::grid) {
        ConditionalDiagnostics diag;
        try {
          ht[i][r] = conditional_entropy(y, batch.inputs.without_column(i), spec, &diag);
        } catch (const SparseGridError& e) {
          throw SparseGridError("input '" + model.input_names()[i] + "': " + e.what());
        }
        rep.sparse_warning = rep.sparse_warning || diag.sparse;
      } else {
        const std::size_t inner_bins = root_bins(side, 3.0);
        ht[i][r] = nested_total_entropy(model, i, side, inner_bins, stream.substream(1 + i));
        rep.evaluations += side * side;
      }
    }
  }

  rep.output_entropy = mean(hy);
  rep.output_entropy_std = stddev(hy);
  rep.kappa_clipped.assign(d, false);
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<double> eta(repetitions), kappa(repetitions);
    for (std::size_t r = 0; r < repetitions; ++r) {
      eta[r] = std::abs(hy[r]) > 1e-12 ? ht[i][r] / hy[r] : NAN;
      kappa[r] = std::exp(ht[i][r] - hy[r]);
      if (kappa[r] > 1.0) {
        kappa[r] = 1.0;
        rep.kappa_clipped[i] = true;
      }
    }
    rep.total_entropy.push_back(mean(ht[i]));
    rep.total_entropy_std.push_back(stddev(ht[i]));
    rep.eta.push_back(mean(eta));
    rep.eta_std.push_back(stddev(eta));
    rep.kappa.push_back(mean(kappa));
    rep.kappa_std.push_back(stddev(kappa));
  }
  return rep;
}

EntropyBounds entropy_upper_bounds(const DerivMeasures& measures,
                                   std::span<const Distribution> inputs, double output_entropy) {
  const std::size_t d = measures.dimension();
  if (inputs.size() != d) throw ConfigError("input count does not match derivative measures");
  EntropyBounds b;
  for (std::size_t i = 0; i < d; ++i) {
    const double hx = inputs[i].entropy();
    if (!std::isfinite(hx)) throw NumericalError("input entropy is not finite for " + inputs[i].describe());
    b.input_entropy.push_back(hx);
    if (measures.l[i] == -INFINITY) {
      b.h_bound.push_back(-INFINITY);
      b.kappa_bound.push_back(0.0);
      b.nu_bound.push_back(0.0);
      continue;
    }
    b.h_bound.push_back(hx + measures.l[i]);
    b.kappa_bound.push_back(std::exp(hx + measures.l[i] - output_entropy));
    b.nu_bound.push_back(std::exp(hx - output_entropy) * std::sqrt(measures.nu[i]));
  }
  return b;
}

double group_kappa_bound(double group_l, std::span<const Distribution> inputs,
                         std::span<const std::size_t> group, double output_entropy) {
  if (group_l == -INFINITY) return 0.0;
  double hz = 0.0;
  for (std::size_t i : group) hz += inputs[i].entropy();
  return std::exp(hz + group_l - output_entropy);
}

KLResult kl_total_index(const Model& model, std::size_t i, std::size_t n,
                        const HistogramSpec& spec, const RngStream& rng) {
  if (i >= model.dimension()) throw ConfigError("KL index: input index out of range");
  if (n < kMinHistogramSamples) throw ConfigError("KL index needs at least 1000 samples");
  const double centre = model.input(i).mean();
  if (!std::isfinite(centre)) throw ConfigError("KL index: input mean is not finite");
  const Model frozen = model.fix_variables({{i, centre}});

  auto finite_outputs = [](const SampleBatch& b) {
    std::vector<double> out;
    out.reserve(b.outputs.size());
    for (double v : b.outputs)
      if (std::isfinite(v)) out.push_back(v);
    return out;
  };
  const auto y0 = finite_outputs(draw_batch(model, n, rng.substream(0)));
  const auto y1 = finite_outputs(draw_batch(frozen, n, rng.substream(1)));

  const auto [lo0, hi0] = std::minmax_element(y0.begin(), y0.end());
  const auto [lo1, hi1] = std::minmax_element(y1.begin(), y1.end());
  const double lo = std::min(*lo0, *lo1), hi = std::max(*hi0, *hi1);

  KLResult res;
  res.bins = output_bins(spec, n);
  if (!(hi > lo)) return res;
  const double width = (hi - lo) / static_cast<double>(res.bins);
  std::vector<std::size_t> c0(res.bins, 0), c1(res.bins, 0);
  for (double v : y0) ++c0[bin_of(v, lo, width, res.bins)];
  for (double v : y1) ++c1[bin_of(v, lo, width, res.bins)];

  const auto n0 = static_cast<double>(y0.size()), n1 = static_cast<double>(y1.size());
  const double floor = 0.5 / n0;
  for (std::size_t b = 0; b < res.bins; ++b) {
    if (c1[b] == 0) continue;
    const double p1 = static_cast<double>(c1[b]) / n1;
    double p0 = static_cast<double>(c0[b]) / n0;
    if (c0[b] == 0) {
      p0 = floor;
      res.floored_mass += p1;
    }
    res.value += p1 * std::log(p1 / p0);
  }
  if (res.floored_mass > 0.05) {
    res.floor_warning = true;
    std::ostringstream msg;
    msg << "KL estimate dominated by the density floor: " << res.floored_mass
        << " of the conditional mass lies where the unconditional histogram is empty";
    res.warning = msg.str();
  }
  return res;
}

FirstOrderResult first_order_entropy_index(const Model& model, std::size_t i, std::size_t n,
                                           const HistogramSpec& spec, const RngStream& rng) {
  if (i >= model.dimension()) throw ConfigError("first-order index: input index out of range");
  const SampleBatch batch = draw_batch(model, n, rng);
  std::vector<std::size_t> rows;
  for (std::size_t j = 0; j < n; ++j)
    if (std::isfinite(batch.outputs[j])) rows.push_back(j);
  std::vector<double> y;
  Matrix xi(rows.size(), 1);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    y.push_back(batch.outputs[rows[k]]);
    xi(k, 0) = batch.inputs(rows[k], i);
  }
  HistogramSpec s = spec;
  s.range = RangePolicy::global;
  FirstOrderResult res;
  res.output_entropy = entropy_histogram(y, s);
  const double hcond = conditional_entropy(y, xi, s);
  res.mutual_information = res.output_entropy - hcond;
  res.defined = std::isfinite(res.output_entropy) && std::abs(res.output_entropy) > 1e-12;
  res.eta = res.defined ? res.mutual_information / res.output_entropy : NAN;
  return res;
}

}  // namespace entsa
