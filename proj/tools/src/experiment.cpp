#include "entsa_cli/experiment.hpp"

#include <chrono>
#include <cmath>
#include <optional>
#include <sstream>

#include <entsa/deriv.hpp>
#include <entsa/error.hpp>
#include <entsa/ranking.hpp>
#include <entsa/variance_sa.hpp>

#ifndef ENTSA_VERSION
#define ENTSA_VERSION "0.0.0"
#endif

namespace entsa::cli {

namespace {

using Clock = std::chrono::steady_clock;

std::string group_label(const std::vector<std::size_t>& g) {
  return "group:" + format_groups({g});
}

std::string sample_label(std::size_t n) {
  std::size_t p = 0, m = n;
  while (m >= 10 && m % 10 == 0) {
    m /= 10;
    ++p;
  }
  if (m == 1 && p > 0) return "N=1e" + std::to_string(p);
  return "N=" + std::to_string(n);
}

Json conventions() {
  return Json{
      {"histogram_bins_auto", "output round(N^(1/3)); per conditioning dim round(N^(1/max(3,k+1)))"},
      {"variance_estimator", "jansen pick-and-freeze, V(Y) over A and B"},
      {"fd_scheme", "forward difference, backward at the upper support edge"},
      {"gradient_floor", kGradientFloor},
      {"group_derivative", "sum of partials (equal-weight directional derivative)"},
      {"metafunction_mixture", "weights 0.5/0.5, variances 0.5 and 5, all coefficients i.i.d."},
      {"ranking", "descending, 1 = most influential, ties within 1e-12 broken by variable order"},
      {"nu_variance_bound", "raw C_i nu_i; the _normalized column divides by V(Y)"},
      {"missing_values", "null in JSON, empty in CSV"},
  };
}

std::vector<double> pad(const std::vector<double>& values, std::size_t rows, std::size_t offset = 0) {
  std::vector<double> out(rows, NAN);
  for (std::size_t i = 0; i < values.size(); ++i) out[offset + i] = values[i];
  return out;
}

void add_rank(Table& t, const std::string& column, std::size_t first, std::size_t count, Json& ties) {
  const auto* values = t.column(column);
  if (!values) return;
  std::vector<double> slice(values->begin() + static_cast<std::ptrdiff_t>(first),
                            values->begin() + static_cast<std::ptrdiff_t>(first + count));
  const auto r = rank_descending(slice);
  std::vector<double> ranks(count, NAN);
  Json tied = Json::array();
  for (std::size_t i = 0; i < count; ++i) {
    if (r.rank[i] > 0) ranks[i] = static_cast<double>(r.rank[i]);
    if (r.tied[i]) tied.push_back(t.labels[first + i]);
  }
  if (!tied.empty()) ties[column] = std::move(tied);
  t.set("rank_" + column, pad(ranks, t.labels.size(), first));
}

std::vector<std::size_t> agreement(std::span<const double> reference, std::span<const double> bound) {
  const auto a = rank_descending(reference).order();
  const auto b = rank_descending(bound).order();
  const bool full = a == b;
  const bool top = !a.empty() && !b.empty() && a.front() == b.front();
  const bool bottom = !a.empty() && !b.empty() && a.back() == b.back();
  return {full ? 1u : 0u, top ? 1u : 0u, bottom ? 1u : 0u};
}

}  // namespace

std::string toolkit_version() { return ENTSA_VERSION; }

BenchmarkModel resolve_model(const RunConfig& config) {
  if (config.model == "metafunction") {
    if (!config.metafunction) throw ConfigError("metafunction model needs a spec");
    return BenchmarkModel{"metafunction", make_metafunction(*config.metafunction), {}, {}, {}, {}};
  }
  return builtin(config.model, config.options);
}

SensitivityReport run(const RunConfig& config) {
  config.validate();
  const auto start = Clock::now();
  const BenchmarkModel bench = resolve_model(config);
  const Model& model = bench.model;
  const std::size_t d = model.dimension();
  const RngStream base(config.seed);

  auto groups = config.groups.empty() ? bench.groups : config.groups;
  if (!config.has(Method::groups)) groups.clear();
  for (const auto& g : groups)
    for (std::size_t i : g)
      if (i >= d) throw ConfigError("group index " + std::to_string(i + 1) + " exceeds model dimension");

  SensitivityReport t;
  t.labels = model.input_names();
  for (const auto& g : groups) t.labels.push_back(group_label(g));
  const std::size_t rows = t.labels.size();
  auto var_col = [&](const std::vector<double>& v) { return pad(v, rows); };

  Json warnings = Json::array();
  Json scalars = Json::object();
  Json estimators = Json::object();
  std::size_t evaluations = 0;

  std::optional<DerivMeasures> dm;
  if (config.has(Method::deriv) || config.has(Method::bounds)) {
    dm = estimate_deriv_measures(model, config.n_deriv, config.fd_step, base.substream(1));
    evaluations += config.n_deriv * (d + 1);
    estimators["deriv"] = Json{{"n_samples", dm->n_samples}, {"excluded_rows", dm->excluded_rows},
                               {"h", dm->h}};
  }
  if (config.has(Method::deriv)) {
    std::vector<double> exp_l;
    for (double l : dm->l) exp_l.push_back(std::exp(l));
    t.set("mu", var_col(dm->mu));
    t.set("nu", var_col(dm->nu));
    t.set("l", var_col(dm->l));
    t.set("exp_l", var_col(exp_l));
    t.set("zero_fraction", var_col(dm->zero_fraction));
  }

  std::optional<VarianceReport> vr;
  if (config.has(Method::variance)) {
    vr = estimate_total_effect_variance(model, config.n_base, base.substream(2));
    evaluations += vr->evaluations;
    t.set("V_T", var_col(vr->total_variance));
    t.set("S_T", var_col(vr->total_index));
    t.set("S_T_stderr", var_col(vr->total_index_stderr));
    scalars["V_Y"] = number_to_json(vr->output_variance);
    Json near = Json::array();
    if (vr->defined)
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = i + 1; k < d; ++k) {
          const double diff = std::abs(vr->total_index[i] - vr->total_index[k]);
          const double se = vr->index_difference_stderr(i, k);
          if (diff <= 3.0 * se)
            near.push_back(Json{{"pair", {t.labels[i], t.labels[k]}}, {"difference", diff}, {"stderr", se}});
        }
    estimators["variance"] = Json{{"estimator", vr->estimator}, {"n_base", vr->n_base},
                                  {"excluded_rows", vr->excluded_rows}, {"defined", vr->defined},
                                  {"near_ties", std::move(near)}};
  }

  std::optional<double> full_output_entropy;
  if (config.has(Method::entropy)) {
    const auto fixed = resolve_entropy_fix(config, bench);
    const Model reduced = model.fix_variables(fixed);
    const auto er = estimate_entropy_indices(reduced, config.n_samples, config.histogram,
                                             config.repetitions, base.substream(3));
    evaluations += er.evaluations;
    std::vector<double> ht(d, NAN), hts(d, NAN), eta(d, NAN), etas(d, NAN), kap(d, NAN), kaps(d, NAN);
    Json clipped = Json::array();
    for (std::size_t k = 0; k < reduced.dimension(); ++k) {
      const std::size_t i = reduced.original_indices()[k];
      ht[i] = er.total_entropy[k];
      hts[i] = er.total_entropy_std[k];
      eta[i] = er.eta[k];
      etas[i] = er.eta_std[k];
      kap[i] = er.kappa[k];
      kaps[i] = er.kappa_std[k];
      if (er.kappa_clipped[k]) clipped.push_back(t.labels[i]);
    }
    t.set("H_T", var_col(ht));
    t.set("H_T_std", var_col(hts));
    t.set("eta_T", var_col(eta));
    t.set("eta_T_std", var_col(etas));
    t.set("kappa_T", var_col(kap));
    t.set("kappa_T_std", var_col(kaps));
    if (fixed.empty()) {
      full_output_entropy = er.output_entropy;
      scalars["H_Y"] = number_to_json(er.output_entropy);
      scalars["H_Y_std"] = number_to_json(er.output_entropy_std);
    } else {
      scalars["H_Y_reduced"] = number_to_json(er.output_entropy);
      scalars["H_Y_reduced_std"] = number_to_json(er.output_entropy_std);
    }
    Json fixed_json = Json::object();
    for (const auto& [i, v] : fixed) fixed_json[t.labels[i]] = v;
    Json lower = Json::array(), upper = Json::array();
    for (double v : er.output_lower) lower.push_back(v);
    for (double v : er.output_upper) upper.push_back(v);
    estimators["entropy"] = Json{
        {"n_samples", er.n_samples},          {"repetitions", er.repetitions},
        {"bins_output", er.bins_output},      {"bins_conditioning", er.bins_conditioning},
        {"nested_outer", er.nested_outer},    {"nested_inner", er.nested_inner},
        {"range", to_string(er.range)},       {"scheme", to_string(er.scheme)},
        {"output_lower", std::move(lower)},   {"output_upper", std::move(upper)},
        {"fixed_variables", std::move(fixed_json)}, {"kappa_clipped", std::move(clipped)},
        {"sparse_warning", er.sparse_warning}};
    if (er.sparse_warning) warnings.push_back("conditioning grid has fewer than 10 samples per occupied cell");
  }

  if ((config.has(Method::bounds) || config.has(Method::groups)) && !full_output_entropy) {
    const auto batch = draw_batch(model, config.n_samples, base.substream(6));
    evaluations += config.n_samples;
    std::vector<double> y;
    for (double v : batch.outputs)
      if (std::isfinite(v)) y.push_back(v);
    full_output_entropy = entropy_histogram(y, config.histogram);
    scalars["H_Y"] = number_to_json(*full_output_entropy);
  }

  if (config.has(Method::bounds)) {
    const auto eb = entropy_upper_bounds(*dm, model.inputs(), *full_output_entropy);
    t.set("H_X", var_col(eb.input_entropy));
    t.set("H_bound", var_col(eb.h_bound));
    t.set("kappa_bound", var_col(eb.kappa_bound));
    t.set("nu_bound", var_col(eb.nu_bound));
    try {
      const auto pb = variance_upper_bound(*dm, model.inputs(), bench.poincare_constants, model.input_names());
      t.set("poincare_constant", var_col(pb.constant));
      t.set("nu_variance_bound", var_col(pb.bound));
      if (vr && vr->defined) t.set("nu_variance_bound_normalized", var_col(pb.normalized(vr->output_variance)));
    } catch (const ConfigError& e) {
      warnings.push_back(std::string("variance bound skipped: ") + e.what());
    }
  }

  if (config.has(Method::kl)) {
    std::vector<double> kl;
    const RngStream kl_base = base.substream(4);
    for (std::size_t i = 0; i < d; ++i) {
      const auto res = kl_total_index(model, i, config.n_samples, config.histogram, kl_base.substream(i));
      evaluations += 2 * config.n_samples;
      kl.push_back(res.value);
      if (res.floor_warning) warnings.push_back(t.labels[i] + ": " + res.warning);
    }
    t.set("KL_T", var_col(kl));
  }

  if (!groups.empty()) {
    std::vector<double> gl, gb, gz;
    const RngStream g_base = base.substream(5);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const auto res = estimate_group_l(model, groups[g], config.n_deriv, config.fd_step, g_base.substream(g));
      evaluations += 2 * config.n_deriv;
      gl.push_back(res.l);
      gz.push_back(res.zero_fraction);
      gb.push_back(group_kappa_bound(res.l, model.inputs(), groups[g], *full_output_entropy));
    }
    t.set("group_l", pad(gl, rows, d));
    t.set("group_kappa_bound", pad(gb, rows, d));
    t.set("group_zero_fraction", pad(gz, rows, d));
  }

  Json ties = Json::object();
  for (const char* family : {"S_T", "nu_variance_bound", "kappa_T", "kappa_bound", "nu_bound", "KL_T",
                             "eta_T", "mu", "nu"})
    add_rank(t, family, 0, d, ties);
  if (!groups.empty()) add_rank(t, "group_kappa_bound", d, groups.size(), ties);

  const double wall = std::chrono::duration<double>(Clock::now() - start).count();
  t.metadata = Json{{"tool", "entsa"},
                    {"version", toolkit_version()},
                    {"model", bench.name},
                    {"seed", config.seed},
                    {"config", config.to_ini()},
                    {"wall_time_s", wall},
                    {"evaluations", evaluations},
                    {"scalars", std::move(scalars)},
                    {"estimators", std::move(estimators)},
                    {"rank_ties", std::move(ties)},
                    {"warnings", std::move(warnings)},
                    {"conventions", conventions()}};
  if (config.metafunction) {
    const auto& s = *config.metafunction;
    t.metadata["metafunction"] = Json{{"basis", s.basis}, {"pair", s.pair}, {"triple", s.triple},
                                      {"alpha", s.alpha}, {"beta", s.beta}, {"gamma", s.gamma},
                                      {"seed", s.seed}, {"stream", s.stream}};
  }
  return t;
}

RunConfig config_from_report(const Table& report) {
  if (!report.metadata.contains("config") || !report.metadata["config"].is_string())
    throw ConfigError("report carries no embedded config");
  return parse_config(report.metadata["config"].get<std::string>());
}

// --- metastudy ------------------------------------------------------------------

Table metastudy(const std::vector<MetaFunctionSpec>& specs, const MetaStudySettings& settings) {
  Table t;
  t.label_header = "function";
  for (std::size_t f = 0; f < specs.size(); ++f) t.labels.push_back(std::to_string(f));
  const std::size_t n = specs.size();
  std::vector<std::vector<double>> cols;
  const std::vector<std::string> names{
      "seed", "stream", "basis_1", "basis_2", "basis_3", "pair_1", "pair_2", "triple_1", "triple_2",
      "triple_3", "alpha_1", "alpha_2", "alpha_3", "beta", "gamma", "excluded", "H_Y",
      "H_T_1", "H_T_2", "H_T_3", "kappa_1", "kappa_2", "kappa_3", "l_1", "l_2", "l_3",
      "l_bound_1", "l_bound_2", "l_bound_3", "nu_bound_1", "nu_bound_2", "nu_bound_3",
      "agree_full_l", "agree_max_l", "agree_min_l", "agree_full_nu", "agree_max_nu", "agree_min_nu"};
  std::map<std::string, std::vector<double>> c;
  for (const auto& name : names) c[name].assign(n, NAN);

  Json excluded = Json::array();
  std::array<std::size_t, 3> hits_l{}, hits_nu{};
  std::size_t used = 0;
  for (std::size_t f = 0; f < n; ++f) {
    const auto& s = specs[f];
    c["seed"][f] = static_cast<double>(s.seed);
    c["stream"][f] = static_cast<double>(s.stream);
    for (std::size_t k = 0; k < 3; ++k) {
      c["basis_" + std::to_string(k + 1)][f] = s.basis[k];
      c["triple_" + std::to_string(k + 1)][f] = s.triple[k];
      c["alpha_" + std::to_string(k + 1)][f] = s.alpha[k];
    }
    c["pair_1"][f] = s.pair[0];
    c["pair_2"][f] = s.pair[1];
    c["beta"][f] = s.beta;
    c["gamma"][f] = s.gamma;
    c["excluded"][f] = 1.0;
    try {
      const Model model = make_metafunction(s);
      const RngStream fs(s.seed, s.stream);
      const auto er = estimate_entropy_indices(model, settings.n_samples, settings.histogram, 1, fs.substream(1));
      if (!std::isfinite(er.output_entropy)) {
        excluded.push_back(Json{{"function", f}, {"reason", "constant output"}});
        continue;
      }
      const auto dm = estimate_deriv_measures(model, settings.n_deriv, settings.fd_step, fs.substream(2));
      const auto eb = entropy_upper_bounds(dm, model.inputs(), er.output_entropy);
      std::array<double, 3> kappa{};
      for (std::size_t k = 0; k < 3; ++k) {
        kappa[k] = std::exp(er.total_entropy[k] - er.output_entropy);
        c["H_T_" + std::to_string(k + 1)][f] = er.total_entropy[k];
        c["kappa_" + std::to_string(k + 1)][f] = kappa[k];
        c["l_" + std::to_string(k + 1)][f] = dm.l[k];
        c["l_bound_" + std::to_string(k + 1)][f] = eb.kappa_bound[k];
        c["nu_bound_" + std::to_string(k + 1)][f] = eb.nu_bound[k];
      }
      c["H_Y"][f] = er.output_entropy;
      const auto al = agreement(kappa, eb.kappa_bound);
      const auto an = agreement(kappa, eb.nu_bound);
      const char* kinds[3] = {"full", "max", "min"};
      for (std::size_t k = 0; k < 3; ++k) {
        c[std::string("agree_") + kinds[k] + "_l"][f] = static_cast<double>(al[k]);
        c[std::string("agree_") + kinds[k] + "_nu"][f] = static_cast<double>(an[k]);
        hits_l[k] += al[k];
        hits_nu[k] += an[k];
      }
      c["excluded"][f] = 0.0;
      ++used;
    } catch (const std::exception& e) {
      excluded.push_back(Json{{"function", f}, {"reason", e.what()}});
    }
  }
  for (const auto& name : names) t.columns.emplace_back(name, std::move(c[name]));

  auto fraction = [&](std::size_t hits) {
    return used ? number_to_json(static_cast<double>(hits) / static_cast<double>(used)) : Json(nullptr);
  };
  Json summary{{"functions", n},
               {"used", used},
               {"excluded", excluded.size()},
               {"empty", used == 0},
               {"l_bound", {{"full", fraction(hits_l[0])}, {"max", fraction(hits_l[1])}, {"min", fraction(hits_l[2])}}},
               {"nu_bound", {{"full", fraction(hits_nu[0])}, {"max", fraction(hits_nu[1])}, {"min", fraction(hits_nu[2])}}}};
  t.metadata = Json{{"tool", "entsa"},
                    {"version", toolkit_version()},
                    {"study", "metafunction ranking agreement"},
                    {"n_samples", settings.n_samples},
                    {"n_deriv", settings.n_deriv},
                    {"fd_step", settings.fd_step},
                    {"histogram", {{"bins_output", settings.histogram.bins_output},
                                   {"bins_conditioning", settings.histogram.bins_per_conditioning_dim},
                                   {"range", to_string(settings.histogram.range)},
                                   {"scheme", to_string(settings.histogram.scheme)}}},
                    {"summary", std::move(summary)},
                    {"excluded_functions", std::move(excluded)},
                    {"conventions", conventions()}};
  return t;
}

Table metastudy(std::size_t n_functions, std::uint64_t seed, const MetaStudySettings& settings) {
  if (n_functions < 10) throw ConfigError("metastudy needs at least 10 functions");
  std::vector<MetaFunctionSpec> specs;
  for (std::size_t f = 0; f < n_functions; ++f) specs.push_back(draw_metafunction_spec(seed, f));
  auto t = metastudy(specs, settings);
  t.metadata["seed"] = seed;
  return t;
}

// --- convergence -------------------------------------------------------------------

ConvergenceMethod parse_convergence_method(std::string_view s) {
  if (s == "entropy") return ConvergenceMethod::entropy;
  if (s == "deriv") return ConvergenceMethod::deriv;
  throw ConfigError("convergence method must be 'entropy' or 'deriv'");
}

Table convergence(const ConvergenceSettings& s) {
  if (s.ladder.empty()) throw ConfigError("convergence ladder is empty");
  for (std::size_t k = 1; k < s.ladder.size(); ++k)
    if (s.ladder[k] <= s.ladder[k - 1]) throw ConfigError("convergence ladder must be ascending");
  if (s.repetitions < 1) throw ConfigError("repetitions must be at least 1");
  const BenchmarkModel bench = builtin(s.model, s.options);
  const Model& model = bench.model;
  const std::size_t d = model.dimension();
  const RngStream base(s.seed);

  Table t;
  t.label_header = "n";
  for (std::size_t n : s.ladder) t.labels.push_back(std::to_string(n));
  const std::string quantity = s.method == ConvergenceMethod::entropy ? "H_T" : "l";
  for (std::size_t i = 0; i < d; ++i) {
    const std::string v = model.input_names()[i];
    for (const char* what : {"mean_", "std_", "ref_", "abs_error_", "rel_error_"})
      t.columns.emplace_back(what + v, std::vector<double>(s.ladder.size(), NAN));
  }
  Json sources = Json::array();
  for (std::size_t r = 0; r < s.ladder.size(); ++r) {
    const std::size_t n = s.ladder[r];
    std::vector<double> mean(d), sd(d);
    if (s.method == ConvergenceMethod::entropy) {
      const auto er = estimate_entropy_indices(model, n, s.histogram, s.repetitions, base.substream(r));
      mean = er.total_entropy;
      sd = er.total_entropy_std;
    } else {
      std::vector<std::vector<double>> ls(d);
      for (std::size_t k = 0; k < s.repetitions; ++k) {
        const auto dm = estimate_deriv_measures(model, n, s.fd_step, base.substream(r).substream(k));
        for (std::size_t i = 0; i < d; ++i) ls[i].push_back(dm.l[i]);
      }
      for (std::size_t i = 0; i < d; ++i) {
        double m = 0.0;
        for (double v : ls[i]) m += v;
        m /= static_cast<double>(ls[i].size());
        double ss = 0.0;
        for (double v : ls[i]) ss += (v - m) * (v - m);
        mean[i] = m;
        sd[i] = ls[i].size() > 1 ? std::sqrt(ss / static_cast<double>(ls[i].size() - 1)) : 0.0;
      }
    }
    const Reference* ref = bench.find(quantity, Provenance::closed_form);
    if (!ref) ref = bench.find(quantity, Provenance::published, sample_label(n));
    sources.push_back(ref ? Json(std::string(to_string(ref->source)) + (ref->note.empty() ? "" : " " + ref->note))
                          : Json(nullptr));
    for (std::size_t i = 0; i < d; ++i) {
      const std::string v = model.input_names()[i];
      auto col = [&](const std::string& name) -> std::vector<double>& {
        for (auto& [cn, values] : t.columns)
          if (cn == name) return values;
        throw std::logic_error("missing column " + name);
      };
      col("mean_" + v)[r] = mean[i];
      col("std_" + v)[r] = sd[i];
      if (ref) {
        const double rv = ref->values[i];
        col("ref_" + v)[r] = rv;
        col("abs_error_" + v)[r] = std::abs(mean[i] - rv);
        // Both quantities are logarithms, so the error is relative on the exp scale.
        col("rel_error_" + v)[r] = std::abs(std::expm1(mean[i] - rv));
      }
    }
  }
  t.metadata = Json{{"tool", "entsa"},
                    {"version", toolkit_version()},
                    {"model", s.model},
                    {"quantity", quantity},
                    {"repetitions", s.repetitions},
                    {"seed", s.seed},
                    {"reference_sources", std::move(sources)},
                    {"rel_error", "|exp(mean - ref) - 1|"},
                    {"conventions", conventions()}};
  return t;
}

// --- presets -----------------------------------------------------------------------

std::vector<std::string> preset_names() {
  return {"ratio", "monotonic", "ishigami", "gfunction", "flood", "groups", "metastudy"};
}

std::vector<PresetOutput> run_preset(const std::string& name, std::uint64_t seed, bool quick) {
  auto scaled = [quick](std::size_t n, std::size_t floor) { return quick ? std::max(n / 100, floor) : n; };
  auto make = [&](const std::string& model, std::set<Method> methods) {
    RunConfig c;
    c.model = model;
    c.methods = std::move(methods);
    c.seed = seed;
    c.n_samples = scaled(1'000'000, 10'000);
    c.n_base = scaled(100'000, 1000);
    c.n_deriv = scaled(100'000, 1000);
    return c;
  };
  std::vector<PresetOutput> out;
  if (name == "ratio") {
    auto c = make("ratio_chi2", {Method::variance, Method::entropy, Method::kl});
    c.n_samples = scaled(10'000'000, 10'000);
    c.repetitions = 3;
    out.push_back({"ratio_chi2", run(c)});
  } else if (name == "monotonic") {
    for (const char* m : {"mono1", "mono2", "mono3", "mono4", "mono5"}) {
      auto c = make(m, {Method::deriv, Method::entropy, Method::bounds});
      c.n_samples = scaled(10'000'000, 10'000);
      c.repetitions = 3;
      c.histogram.range = RangePolicy::per_cell;
      out.push_back({m, run(c)});
    }
  } else if (name == "ishigami" || name == "gfunction") {
    auto c = make(name == "ishigami" ? "ishigami" : "gfunction3",
                  {Method::deriv, Method::variance, Method::entropy, Method::bounds});
    c.repetitions = quick ? 2 : 20;
    out.push_back({c.model, run(c)});
  } else if (name == "flood") {
    auto c = make("flood", {Method::deriv, Method::variance, Method::entropy, Method::bounds});
    c.n_samples = scaled(10'000'000, 10'000);
    out.push_back({"flood", run(c)});
  } else if (name == "groups") {
    for (int k = 1; k <= 3; ++k) {
      auto c = make("gfunction9_case" + std::to_string(k), {Method::groups});
      out.push_back({c.model, run(c)});
    }
  } else if (name == "metastudy") {
    MetaStudySettings s;
    s.n_samples = scaled(1'000'000, 10'000);
    out.push_back({"metastudy", metastudy(quick ? 20 : 200, seed, s)});
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return out;
}

}  // namespace entsa::cli
