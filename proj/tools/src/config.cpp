#include "entsa_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <entsa/error.hpp>

namespace entsa::cli {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto pos = s.find(sep, start);
    const auto piece = trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
    if (!piece.empty()) out.push_back(piece);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view text, std::string_view what) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf") return INFINITY;
  if (t == "-inf") return -INFINITY;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigError("invalid number '" + t + "' for " + std::string(what));
  return v;
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class Seq>
std::string join(const Seq& seq) {
  std::string out;
  for (const auto& v : seq) {
    if (!out.empty()) out += ',';
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(v)>>)
      out += fmt(v);
    else
      out += std::to_string(v);
  }
  return out;
}

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigError("invalid integer '" + t + "' for " + std::string(what));
  return v;
}

template <std::size_t N>
std::array<int, N> parse_int_array(std::string_view text, std::string_view what) {
  const auto items = split(text, ',');
  if (items.size() != N)
    throw ConfigError(std::string(what) + " needs " + std::to_string(N) + " entries");
  std::array<int, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = static_cast<int>(parse_u64(items[i], what));
  return out;
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"run", {"model", "methods", "seed", "output", "format"}},
      {"model",
       {"r", "a", "sigma", "entropy_fix", "groups", "meta_seed", "meta_stream", "meta_basis",
        "meta_pair", "meta_triple", "meta_alpha", "meta_beta", "meta_gamma"}},
      {"sampling", {"n_samples", "n_base", "n_deriv", "repetitions", "fd_step"}},
      {"histogram", {"bins_output", "bins_conditioning", "range", "scheme"}},
  };
  return s;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::deriv: return "deriv";
    case Method::variance: return "variance";
    case Method::entropy: return "entropy";
    case Method::kl: return "kl";
    case Method::bounds: return "bounds";
    case Method::groups: return "groups";
  }
  return "?";
}

std::string_view to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

Method parse_method(std::string_view s) {
  for (Method m : {Method::deriv, Method::variance, Method::entropy, Method::kl, Method::bounds,
                   Method::groups})
    if (s == to_string(m)) return m;
  throw ConfigError("unknown method '" + std::string(s) +
                    "' (deriv, variance, entropy, kl, bounds, groups)");
}

Format parse_format(std::string_view s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw ConfigError("unknown output format '" + std::string(s) + "' (csv, json)");
}

std::size_t parse_count(std::string_view text, std::string_view what) {
  const double v = parse_double(text, what);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e15)
    throw ConfigError(std::string(what) + " must be a non-negative whole number, got '" +
                      trim(text) + "'");
  return static_cast<std::size_t>(v);
}

std::vector<double> parse_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_double(item, what));
  return out;
}

std::set<Method> parse_methods(std::string_view text) {
  std::set<Method> out;
  for (const auto& item : split(text, ',')) out.insert(parse_method(item));
  if (out.empty()) throw ConfigError("method set must not be empty");
  return out;
}

std::vector<std::vector<std::size_t>> parse_groups(std::string_view text) {
  std::vector<std::vector<std::size_t>> groups;
  for (const auto& g : split(text, ',')) {
    std::vector<std::size_t> members;
    for (const auto& part : split(g, '+')) {
      const auto dash = part.find('-');
      const std::size_t lo = parse_count(part.substr(0, dash), "group index");
      const std::size_t hi = dash == std::string::npos ? lo : parse_count(part.substr(dash + 1), "group index");
      if (lo == 0 || hi < lo) throw ConfigError("bad group range '" + part + "' (1-based, ascending)");
      for (std::size_t i = lo; i <= hi; ++i) members.push_back(i - 1);
    }
    if (members.empty()) throw ConfigError("empty variable group");
    groups.push_back(std::move(members));
  }
  return groups;
}

std::string format_groups(const std::vector<std::vector<std::size_t>>& groups) {
  std::string out;
  for (const auto& g : groups) {
    if (!out.empty()) out += ',';
    std::string part;
    for (std::size_t i : g) {
      if (!part.empty()) part += '+';
      part += std::to_string(i + 1);
    }
    out += part;
  }
  return out;
}

void RunConfig::validate() const {
  if (model.empty()) throw ConfigError("model name is required");
  const auto names = builtin_names();
  if (model != "metafunction" && std::find(names.begin(), names.end(), model) == names.end())
    throw ConfigError("unknown model '" + model + "'");
  if (model == "metafunction" && !metafunction)
    throw ConfigError("model 'metafunction' needs meta_seed (and optionally meta_stream) or explicit meta_* fields");
  if (methods.empty()) throw ConfigError("method set must not be empty");
  if (has(Method::entropy) || has(Method::kl) || has(Method::bounds) || has(Method::groups))
    if (n_samples < 1000) throw ConfigError("n_samples must be at least 1000");
  if (has(Method::variance) && n_base < 100) throw ConfigError("n_base must be at least 100");
  if ((has(Method::deriv) || has(Method::bounds) || has(Method::groups)) && n_deriv < 10)
    throw ConfigError("n_deriv must be at least 10");
  if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
  if (!(fd_step > 0.0)) throw ConfigError("fd_step must be positive");
  if (has(Method::groups) && groups.empty() && model.rfind("gfunction9", 0) != 0)
    throw ConfigError("method 'groups' needs a [model] groups entry");
}

std::string RunConfig::to_ini() const {
  std::ostringstream out;
  out << "[run]\n";
  out << "model = " << model << '\n';
  std::string m;
  for (Method x : methods) m += (m.empty() ? "" : ",") + std::string(to_string(x));
  out << "methods = " << m << '\n';
  out << "seed = " << seed << '\n';
  if (!output.empty()) out << "output = " << output << '\n';
  out << "format = " << to_string(format) << "\n\n";

  out << "[model]\n";
  out << "r = " << fmt(options.r) << '\n';
  if (!options.a.empty()) out << "a = " << join(options.a) << '\n';
  if (!options.sigma.empty()) out << "sigma = " << join(options.sigma) << '\n';
  out << "entropy_fix = " << entropy_fix << '\n';
  if (!groups.empty()) out << "groups = " << format_groups(groups) << '\n';
  if (metafunction) {
    const auto& s = *metafunction;
    out << "meta_seed = " << s.seed << '\n';
    out << "meta_stream = " << s.stream << '\n';
    out << "meta_basis = " << join(s.basis) << '\n';
    out << "meta_pair = " << join(s.pair) << '\n';
    out << "meta_triple = " << join(s.triple) << '\n';
    out << "meta_alpha = " << join(s.alpha) << '\n';
    out << "meta_beta = " << fmt(s.beta) << '\n';
    out << "meta_gamma = " << fmt(s.gamma) << '\n';
  }
  out << '\n';

  out << "[sampling]\n";
  out << "n_samples = " << n_samples << '\n';
  out << "n_base = " << n_base << '\n';
  out << "n_deriv = " << n_deriv << '\n';
  out << "repetitions = " << repetitions << '\n';
  out << "fd_step = " << fmt(fd_step) << "\n\n";

  out << "[histogram]\n";
  out << "bins_output = " << histogram.bins_output << '\n';
  out << "bins_conditioning = " << histogram.bins_per_conditioning_dim << '\n';
  out << "range = " << to_string(histogram.range) << '\n';
  out << "scheme = " << to_string(histogram.scheme) << '\n';
  return out.str();
}

RunConfig parse_config(const std::string& ini_text) {
  pt::ptree tree;
  try {
    std::istringstream in(ini_text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }

  const auto& known = schema();
  for (const auto& [section, body] : tree) {
    const auto it = known.find(section);
    if (it == known.end()) {
      if (body.empty()) throw ConfigError("config keys must live in a section; found '" + section + "'");
      throw ConfigError("unknown config section [" + section + "]");
    }
    for (const auto& [key, value] : body)
      if (!it->second.contains(key))
        throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
  }

  RunConfig c;
  auto get = [&](const char* section, const char* key) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(std::string(section) + "/" + key, '/')))
      return trim(*v);
    return std::nullopt;
  };

  if (auto v = get("run", "model")) c.model = *v;
  if (auto v = get("run", "methods")) c.methods = parse_methods(*v);
  if (auto v = get("run", "seed")) c.seed = parse_u64(*v, "seed");
  if (auto v = get("run", "output")) c.output = *v;
  if (auto v = get("run", "format")) c.format = parse_format(*v);

  if (auto v = get("model", "r")) c.options.r = parse_double(*v, "r");
  if (auto v = get("model", "a")) c.options.a = parse_list(*v, "a");
  if (auto v = get("model", "sigma")) c.options.sigma = parse_list(*v, "sigma");
  if (auto v = get("model", "entropy_fix")) c.entropy_fix = *v;
  if (auto v = get("model", "groups")) c.groups = parse_groups(*v);

  const auto meta_seed = get("model", "meta_seed");
  const auto meta_basis = get("model", "meta_basis");
  if (meta_seed || meta_basis) {
    const std::uint64_t seed = meta_seed ? parse_u64(*meta_seed, "meta_seed") : 0;
    const auto stream_text = get("model", "meta_stream");
    const std::uint64_t stream = stream_text ? parse_u64(*stream_text, "meta_stream") : 0;
    MetaFunctionSpec s = draw_metafunction_spec(seed, stream);
    if (meta_basis) {
      s.basis = parse_int_array<3>(*meta_basis, "meta_basis");
      const auto need = [&](const char* key) {
        auto v = get("model", key);
        if (!v) throw ConfigError(std::string("explicit metafunction needs ") + key);
        return *v;
      };
      s.pair = parse_int_array<2>(need("meta_pair"), "meta_pair");
      s.triple = parse_int_array<3>(need("meta_triple"), "meta_triple");
      const auto alpha = parse_list(need("meta_alpha"), "meta_alpha");
      if (alpha.size() != 3) throw ConfigError("meta_alpha needs 3 entries");
      std::copy(alpha.begin(), alpha.end(), s.alpha.begin());
      s.beta = parse_double(need("meta_beta"), "meta_beta");
      s.gamma = parse_double(need("meta_gamma"), "meta_gamma");
    }
    c.metafunction = s;
  }

  if (auto v = get("sampling", "n_samples")) c.n_samples = parse_count(*v, "n_samples");
  if (auto v = get("sampling", "n_base")) c.n_base = parse_count(*v, "n_base");
  if (auto v = get("sampling", "n_deriv")) c.n_deriv = parse_count(*v, "n_deriv");
  if (auto v = get("sampling", "repetitions")) c.repetitions = parse_count(*v, "repetitions");
  if (auto v = get("sampling", "fd_step")) c.fd_step = parse_double(*v, "fd_step");

  if (auto v = get("histogram", "bins_output")) c.histogram.bins_output = parse_count(*v, "bins_output");
  if (auto v = get("histogram", "bins_conditioning"))
    c.histogram.bins_per_conditioning_dim = parse_count(*v, "bins_conditioning");
  if (auto v = get("histogram", "range")) c.histogram.range = parse_range_policy(*v);
  if (auto v = get("histogram", "scheme")) c.histogram.scheme = parse_conditioning_scheme(*v);

  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::map<std::size_t, double> resolve_entropy_fix(const RunConfig& config,
                                                  const BenchmarkModel& bench) {
  if (config.entropy_fix == "auto") return bench.entropy_reduction;
  if (config.entropy_fix == "none" || config.entropy_fix.empty()) return {};
  std::map<std::size_t, double> fixed;
  for (const auto& item : split(config.entropy_fix, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("entropy_fix entries look like '4:55' or '4:mean'");
    const std::size_t idx = parse_count(item.substr(0, colon), "entropy_fix index");
    if (idx == 0 || idx > bench.model.dimension()) throw ConfigError("entropy_fix index out of range");
    const auto value = trim(item.substr(colon + 1));
    fixed[idx - 1] = value == "mean" ? bench.model.input(idx - 1).mean() : parse_double(value, "entropy_fix");
  }
  return fixed;
}

}  // namespace entsa::cli
