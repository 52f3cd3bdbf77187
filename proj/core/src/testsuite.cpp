#include "entsa/testsuite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/digamma.hpp>

#include "entsa/error.hpp"

namespace entsa {

namespace {

using std::numbers::pi;

std::vector<Distribution> uniforms(std::size_t d, double a = 0.0, double b = 1.0) {
  return std::vector<Distribution>(d, Distribution::uniform(a, b));
}

double chi2_entropy(double k) { return Distribution::chi_squared(k).entropy(); }
double chi2_mean_log(double k) { return boost::math::digamma(k / 2.0) + std::log(2.0); }

// E[ln(u + a)] for u ~ U(0, 2).
double mean_log_shifted_uniform(double a) {
  const double upper = (2.0 + a) * std::log(2.0 + a);
  const double lower = a > 0.0 ? a * std::log(a) : 0.0;
  return 0.5 * (upper - lower) - 1.0;
}

std::vector<double> gfunction_partial_variances(const std::vector<double>& a) {
  std::vector<double> v;
  for (double ai : a) v.push_back(1.0 / (3.0 * (1.0 + ai) * (1.0 + ai)));
  return v;
}

// Total-effect index of a set of G-function inputs.
double gfunction_total_index(const std::vector<double>& a, const std::vector<std::size_t>& set) {
  const auto v = gfunction_partial_variances(a);
  double all = 1.0, rest = 1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    all *= 1.0 + v[i];
    if (std::find(set.begin(), set.end(), i) == set.end()) rest *= 1.0 + v[i];
  }
  return (all - rest) / (all - 1.0);
}

BenchmarkModel ratio_chi2() {
  constexpr double k1 = 10.0, k2 = 13.978;
  Model model("ratio_chi2", {Distribution::chi_squared(k1), Distribution::chi_squared(k2)},
              [](std::span<const double> x) { return x[0] / x[1]; });
  BenchmarkModel b{"ratio_chi2", std::move(model), {}, {}, {}, {}};

  // y = (k1/k2) F(k1, k2).
  using boost::math::digamma;
  const double h1 = k1 / 2.0, h2 = k2 / 2.0;
  const double hy = std::log(boost::math::beta(h1, h2)) + (1.0 - h1) * digamma(h1) -
                    (1.0 + h2) * digamma(h2) + (h1 + h2) * digamma(h1 + h2);
  // Given x2, y = x1/x2; given x1, y = x1/x2 with ln|dy/dx2| = ln x1 - 2 ln x2.
  const double ht1 = chi2_entropy(k1) - chi2_mean_log(k2);
  const double ht2 = chi2_entropy(k2) - 2.0 * chi2_mean_log(k2) + chi2_mean_log(k1);
  b.analytic.push_back({"H_Y", {hy}, Provenance::closed_form, ""});
  b.analytic.push_back({"H_T", {ht1, ht2}, Provenance::closed_form, ""});
  b.analytic.push_back({"eta_T", {ht1 / hy, ht2 / hy}, Provenance::closed_form, ""});

  const double ex1 = k1, ex1sq = k1 * (k1 + 2.0);
  const double einv = 1.0 / (k2 - 2.0), einvsq = 1.0 / ((k2 - 2.0) * (k2 - 4.0));
  const double vy = ex1sq * einvsq - (ex1 * einv) * (ex1 * einv);
  const double vt1 = (ex1sq - ex1 * ex1) * einvsq;
  const double vt2 = ex1sq * (einvsq - einv * einv);
  b.analytic.push_back({"V_Y", {vy}, Provenance::closed_form, ""});
  b.analytic.push_back({"S_T", {vt1 / vy, vt2 / vy}, Provenance::closed_form, ""});

  b.analytic.push_back({"S_T", {0.546, 0.547}, Provenance::published, ""});
  b.analytic.push_back({"KL_T", {0.1571, 0.0791}, Provenance::published, ""});
  b.analytic.push_back({"eta_T", {0.510, 0.213}, Provenance::published, "N=1e7"});
  return b;
}

BenchmarkModel ishigami() {
  constexpr double a = 7.0, bb = 0.1;
  Model model("ishigami", uniforms(3, -pi, pi), [](std::span<const double> x) {
    const double s1 = std::sin(x[0]), s2 = std::sin(x[1]);
    const double x3sq = x[2] * x[2];
    return s1 + a * s2 * s2 + bb * x3sq * x3sq * s1;
  });
  BenchmarkModel b{"ishigami", std::move(model), {}, {}, {}, {}};

  const double pi4 = std::pow(pi, 4), pi8 = pi4 * pi4;
  const double v1 = 0.5 * std::pow(1.0 + bb * pi4 / 5.0, 2);
  const double v2 = a * a / 8.0;
  const double v13 = bb * bb * pi8 * 8.0 / 225.0;
  const double v = v1 + v2 + v13;
  b.analytic.push_back({"V_Y", {v}, Provenance::closed_form, ""});
  b.analytic.push_back({"S_T", {(v1 + v13) / v, v2 / v, v13 / v}, Provenance::closed_form, ""});

  b.analytic.push_back({"H_T", {1.3902, 1.7614, 0.9701}, Provenance::published, "N=1e6"});
  b.analytic.push_back({"H_T", {1.2978, 1.7023, 0.7693}, Provenance::published, "N=1e7"});
  b.analytic.push_back({"H_T", {1.2335, 1.6609, 0.6066}, Provenance::published, "N=1e8"});
  b.analytic.push_back({"H_bound", {1.9024, 3.0906, 0.6626}, Provenance::published, ""});
  return b;
}

BenchmarkModel gfunction3(std::vector<double> a) {
  if (a.empty()) a = {0.0, 0.5, 1.0};
  if (a.size() != 3) throw ConfigError("gfunction3 takes exactly three a-parameters");
  BenchmarkModel b{"gfunction3", make_gfunction("gfunction3", a), {}, {}, {}, {}};

  // l_i = ln(4/(1+a_i)) + sum_{j != i} [E ln(|4x-2| + a_j) - ln(1 + a_j)], |4x-2| ~ U(0,2).
  // The other factors have mean one, so ln mu_i = ln(4/(1+a_i)).
  std::vector<double> l(3), log_mu(3), st(3);
  for (std::size_t i = 0; i < 3; ++i) {
    l[i] = std::log(4.0 / (1.0 + a[i]));
    log_mu[i] = l[i];
    for (std::size_t j = 0; j < 3; ++j)
      if (j != i) l[i] += mean_log_shifted_uniform(a[j]) - std::log(1.0 + a[j]);
    st[i] = gfunction_total_index(a, {i});
  }
  b.analytic.push_back({"l", l, Provenance::closed_form, ""});
  b.analytic.push_back({"H_bound", l, Provenance::closed_form, ""});
  b.analytic.push_back({"log_mu", log_mu, Provenance::closed_form, ""});
  b.analytic.push_back({"S_T", st, Provenance::closed_form, ""});

  b.analytic.push_back({"H_T", {0.3477, -0.1376, -0.3988}, Provenance::published, "N=1e6"});
  b.analytic.push_back({"H_T", {0.3398, -0.1737, -0.4482}, Provenance::published, "N=1e7"});
  b.analytic.push_back({"H_T", {0.3378, -0.1917, -0.4738}, Provenance::published, "N=1e8"});
  b.analytic.push_back({"H_bound", {1.3863, 0.9808, 0.6931}, Provenance::published, ""});
  return b;
}

BenchmarkModel gfunction9(int which) {
  static const std::array<std::vector<double>, 3> cases{{
      {0.02, 0.03, 0.05, 11, 12.5, 13, 34, 35, 37},
      {0.02, 0.04, 0.06, 0.03, 0.05, 0.07, 34, 35, 37},
      {0.02, 11, 35, 0.05, 12.5, 37, 0.03, 13, 14},
  }};
  static const std::array<std::vector<double>, 3> published_st{{
      {0.995, 0.010, 0.001}, {0.694, 0.686, 0.001}, {0.436, 0.393, 0.429}}};
  static const std::array<std::vector<double>, 3> published_ub{{
      {4.425, 0.349, 0.126}, {5.917, 5.861, 0.170}, {1.664, 1.604, 1.632}}};

  const auto& a = cases[which - 1];
  const std::string name = "gfunction9_case" + std::to_string(which);
  BenchmarkModel b{name, make_gfunction(name, a), {}, {}, {}, {}};
  b.groups = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}};
  std::vector<double> group_st;
  for (const auto& g : b.groups) group_st.push_back(gfunction_total_index(a, g));
  b.analytic.push_back({"group_S_T", group_st, Provenance::closed_form, ""});
  b.analytic.push_back({"group_S_T", published_st[which - 1], Provenance::published, ""});
  b.analytic.push_back({"group_l_bound", published_ub[which - 1], Provenance::published, ""});
  return b;
}

BenchmarkModel monotonic(int which, const BuiltinOptions& options) {
  const std::string name = "mono" + std::to_string(which);
  std::vector<double> ht;
  switch (which) {
    case 1: {
      BenchmarkModel b{name, Model(name, uniforms(2),
                                   [](std::span<const double> x) { return x[0] + std::exp(x[1]); }),
                       {}, {}, {}, {}};
      ht = {0.0, 0.5};
      b.analytic.push_back({"H_T", ht, Provenance::closed_form, ""});
      b.analytic.push_back({"l", ht, Provenance::closed_form, ""});
      return b;
    }
    case 2: {
      BenchmarkModel b{name, Model(name, uniforms(2),
                                   [](std::span<const double> x) { return x[0] * x[1]; }),
                       {}, {}, {}, {}};
      ht = {-1.0, -1.0};
      b.analytic.push_back({"H_T", ht, Provenance::closed_form, ""});
      b.analytic.push_back({"l", ht, Provenance::closed_form, ""});
      return b;
    }
    case 3: {
      BenchmarkModel b{name, Model(name, uniforms(2),
                                   [](std::span<const double> x) { return x[0] + 3.0 * x[1]; }),
                       {}, {}, {}, {}};
      ht = {0.0, std::log(3.0)};
      b.analytic.push_back({"H_T", ht, Provenance::closed_form, ""});
      b.analytic.push_back({"l", ht, Provenance::closed_form, ""});
      b.analytic.push_back({"mu", {1.0, 3.0}, Provenance::closed_form, ""});
      b.analytic.push_back({"nu", {1.0, 9.0}, Provenance::closed_form, ""});
      return b;
    }
    case 4: {
      const double r = options.r;
      if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("mono4 needs r > 0");
      BenchmarkModel b{name, Model(name, uniforms(2),
                                   [r](std::span<const double> x) { return x[0] * std::pow(x[1], r); }),
                       {}, {}, {}, {}};
      ht = {-r, std::log(r) - r};
      b.analytic.push_back({"H_T", ht, Provenance::closed_form, ""});
      b.analytic.push_back({"l", ht, Provenance::closed_form, ""});
      return b;
    }
    case 5: {
      std::vector<double> a = options.a.empty() ? std::vector<double>{1, 2, 3, 4, 5} : options.a;
      std::vector<double> sigma = options.sigma.empty() ? std::vector<double>(a.size(), 1.0) : options.sigma;
      if (sigma.size() != a.size()) throw ConfigError("mono5: a and sigma lengths differ");
      std::vector<Distribution> inputs;
      for (double s : sigma) {
        if (!(s > 0.0)) throw ConfigError("mono5: sigma must be positive");
        inputs.push_back(Distribution::gaussian(0.0, s * s));
      }
      Model model(name, std::move(inputs), [a](std::span<const double> x) {
        double y = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) y += a[i] * x[i];
        return y;
      });
      BenchmarkModel b{name, std::move(model), {}, {}, {}, {}};
      std::vector<double> l, vt, st;
      double v = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        l.push_back(std::log(std::abs(a[i])));
        ht.push_back(0.5 * std::log(2.0 * pi * std::numbers::e * a[i] * a[i] * sigma[i] * sigma[i]));
        vt.push_back(a[i] * a[i] * sigma[i] * sigma[i]);
        v += vt.back();
      }
      for (double t : vt) st.push_back(t / v);
      b.analytic.push_back({"H_T", ht, Provenance::closed_form, ""});
      b.analytic.push_back({"l", l, Provenance::closed_form, ""});
      b.analytic.push_back({"V_T", vt, Provenance::closed_form, ""});
      b.analytic.push_back({"S_T", st, Provenance::closed_form, ""});
      return b;
    }
    default: break;
  }
  throw ConfigError("unknown monotonic benchmark " + name);
}

BenchmarkModel flood() {
  std::vector<Distribution> inputs{
      Distribution::truncated_gumbel(1013.0, 558.0, 500.0, 3000.0),
      Distribution::truncated_gaussian(30.0, 64.0, 15.0, INFINITY),
      Distribution::triangular(49.0, 50.0, 51.0),
      Distribution::triangular(54.0, 55.0, 56.0),
      Distribution::uniform(7.0, 9.0),
      Distribution::triangular(55.0, 55.5, 56.0),
      Distribution::triangular(4990.0, 5000.0, 5010.0),
      Distribution::triangular(295.0, 300.0, 305.0),
  };
  // Overflow: Z_v + (Q / (B K_s sqrt((Z_m - Z_v)/L)))^0.6 - D_d - C_b.
  Model model("flood", std::move(inputs),
              [](std::span<const double> x) {
                const double q = x[0], ks = x[1], zv = x[2], zm = x[3], dd = x[4], cb = x[5],
                             len = x[6], width = x[7];
                const double h = std::pow(q / (width * ks * std::sqrt((zm - zv) / len)), 0.6);
                return zv + h - dd - cb;
              },
              {"Q", "K_s", "Z_v", "Z_m", "D_d", "C_b", "L", "B"});
  BenchmarkModel b{"flood", std::move(model), {}, {}, {}, {}};
  b.poincare_constants = {3.93e5, 5.77e1, 1.73e-1, 1.73e-1, 4.05e-1, 4.32e-2, 1.73e1, 4.32};
  b.entropy_reduction = {{3, 55.0}, {5, 55.5}, {6, 5000.0}, {7, 300.0}};

  const double na = NAN;
  b.analytic.push_back({"exp_H_X", {2051, 30, 1.65, 1.65, 2, 0.825, 16.5, 8.24}, Provenance::published, ""});
  b.analytic.push_back({"S_T", {0.353, 0.139, 0.186, 0.003, 0.276, 0.036, 0.000, 0.000},
                        Provenance::published, ""});
  b.analytic.push_back({"nu_variance_bound", {0.607, 0.226, 0.232, 0.005, 0.405, 0.043, 0.000, 0.000},
                        Provenance::published, ""});
  b.analytic.push_back({"kappa_T", {0.397, 0.231, 0.327, na, 0.361, na, na, na},
                        Provenance::published, "reduced model"});
  b.analytic.push_back({"l_bound", {0.543, 0.336, 0.429, 0.055, 0.450, 0.186, 0.001, 0.009},
                        Provenance::published, ""});
  b.analytic.push_back({"nu_bound", {0.572, 0.425, 0.430, 0.061, 0.450, 0.186, 0.001, 0.010},
                        Provenance::published, ""});
  b.analytic.push_back({"exp_l", {0.001, 0.050, 1.155, 0.148, 1.000, 1.000, 0.000, 0.005},
                        Provenance::published, ""});
  b.analytic.push_back({"rank", {1, 4, 3, 6, 2, 5, 7, 8}, Provenance::published, "S_T"});
  return b;
}

}  // namespace

std::string_view to_string(Provenance p) {
  return p == Provenance::closed_form ? "closed-form" : "published";
}

const Reference* BenchmarkModel::find(std::string_view quantity, Provenance source,
                                      std::string_view note) const {
  for (const auto& r : analytic)
    if (r.quantity == quantity && r.source == source && (note.empty() || r.note == note)) return &r;
  return nullptr;
}

Model make_gfunction(std::string name, std::vector<double> a) {
  for (double ai : a)
    if (!(ai > -1.0)) throw ConfigError("G-function parameters must exceed -1");
  const std::size_t d = a.size();
  return Model(std::move(name), uniforms(d), [a = std::move(a)](std::span<const double> x) {
    double y = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) y *= (std::abs(4.0 * x[i] - 2.0) + a[i]) / (1.0 + a[i]);
    return y;
  });
}

std::vector<std::string> builtin_names() {
  return {"ratio_chi2", "ishigami", "gfunction3", "gfunction9_case1", "gfunction9_case2",
          "gfunction9_case3", "mono1", "mono2", "mono3", "mono4", "mono5", "flood"};
}

BenchmarkModel builtin(std::string_view name, const BuiltinOptions& options) {
  if (name == "ratio_chi2") return ratio_chi2();
  if (name == "ishigami") return ishigami();
  if (name == "gfunction3") return gfunction3(options.a);
  if (name == "gfunction9_case1") return gfunction9(1);
  if (name == "gfunction9_case2") return gfunction9(2);
  if (name == "gfunction9_case3") return gfunction9(3);
  if (name.size() == 5 && name.starts_with("mono") && name[4] >= '1' && name[4] <= '5')
    return monotonic(name[4] - '0', options);
  if (name == "flood") return flood();
  throw ConfigError("unknown builtin model '" + std::string(name) + "'");
}

// --- metafunction -------------------------------------------------------------

double metafunction_basis(int id, double x) {
  switch (id) {
    case 1: return x;
    case 2: return x * x;
    case 3: return x * x * x;
    case 4: return std::expm1(x) / (std::numbers::e - 1.0);
    case 5: return 0.5 * std::sin(2.0 * pi * x) + 0.5;
    case 6: return x >= 0.5 ? 1.0 : 0.0;
    case 7: return 0.0;
    case 8: return 4.0 * (x - 0.5) * (x - 0.5);
    case 9: return 1.0 / ((10.0 - 1.0 / 1.1) * (x + 0.1)) - 0.1;
    default: throw ConfigError("basis id must be in 1..9");
  }
}

std::string_view metafunction_basis_name(int id) {
  static constexpr std::array<std::string_view, 9> names{
      "linear", "quadratic", "cubic", "exponential", "periodic",
      "discontinuous", "dummy", "non-monotonic", "inverse"};
  if (id < 1 || id > kBasisCount) throw ConfigError("basis id must be in 1..9");
  return names[static_cast<std::size_t>(id - 1)];
}

MetaFunctionSpec draw_metafunction_spec(RngStream& rng, const MetaFunctionMixture& mixture) {
  MetaFunctionSpec s;
  s.seed = rng.seed();
  s.stream = rng.stream();
  for (int& u : s.basis) u = static_cast<int>(rng.uniform_int(1, kBasisCount));
  for (int& v : s.pair) v = static_cast<int>(rng.uniform_int(1, 3));
  for (int& w : s.triple) w = static_cast<int>(rng.uniform_int(1, 3));
  const auto low = Distribution::gaussian(0.0, mixture.variance_low);
  const auto high = Distribution::gaussian(0.0, mixture.variance_high);
  auto coefficient = [&] {
    const bool pick_low = rng.uniform() < mixture.weight_low;
    return (pick_low ? low : high).sample_one(rng);
  };
  for (double& a : s.alpha) a = coefficient();
  s.beta = coefficient();
  s.gamma = coefficient();
  return s;
}

MetaFunctionSpec draw_metafunction_spec(std::uint64_t seed, std::uint64_t stream,
                                        const MetaFunctionMixture& mixture) {
  RngStream rng(seed, stream);
  return draw_metafunction_spec(rng, mixture);
}

Model make_metafunction(const MetaFunctionSpec& spec) {
  auto in_range = [](int v, int hi) { return v >= 1 && v <= hi; };
  for (int u : spec.basis)
    if (!in_range(u, kBasisCount)) throw ConfigError("metafunction basis id outside 1..9");
  for (int v : spec.pair)
    if (!in_range(v, 3)) throw ConfigError("metafunction pair index outside 1..3");
  for (int w : spec.triple)
    if (!in_range(w, 3)) throw ConfigError("metafunction triple index outside 1..3");
  return Model("metafunction", uniforms(3), [spec](std::span<const double> x) {
    std::array<double, 3> f{};
    for (std::size_t i = 0; i < 3; ++i) f[i] = metafunction_basis(spec.basis[i], x[i]);
    double y = spec.alpha[0] * f[0] + spec.alpha[1] * f[1] + spec.alpha[2] * f[2];
    y += spec.beta * f[spec.pair[0] - 1] * f[spec.pair[1] - 1];
    y += spec.gamma * f[spec.triple[0] - 1] * f[spec.triple[1] - 1] * f[spec.triple[2] - 1];
    return y;
  });
}

MetaFunction draw_metafunction(RngStream& rng, const MetaFunctionMixture& mixture) {
  auto spec = draw_metafunction_spec(rng, mixture);
  return {spec, make_metafunction(spec)};
}

}  // namespace entsa
