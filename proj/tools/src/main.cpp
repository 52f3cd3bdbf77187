#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <entsa/error.hpp>

#include "entsa_cli/experiment.hpp"

namespace {

using namespace entsa;
using namespace entsa::cli;

enum Exit : int { ok = 0, internal = 1, config_error = 2, numerical = 3, sparse_grid = 4 };

Table read_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open report '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return table_from_json(Json::parse(text));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("malformed report '" + path + "': " + e.what());
    }
  }
  throw ConfigError("replay needs a JSON report; CSV reports carry no config");
}

struct RunFlags {
  std::string config, replay, model, methods, n, n_base, n_deriv, reps, groups, fix, range, scheme, format,
      output, a, sigma, bins_output, bins_cond;
  std::optional<std::uint64_t> seed, meta_seed, meta_stream;
  std::optional<double> h, r;
};

RunConfig build_config(const RunFlags& f) {
  RunConfig c;
  if (!f.config.empty() && !f.replay.empty()) throw ConfigError("--config and --replay are exclusive");
  if (!f.config.empty()) c = load_config(f.config);
  if (!f.replay.empty()) {
    // Only the destination may change on replay; every estimator setting comes from the report.
    c = config_from_report(read_report(f.replay));
    if (!f.format.empty()) c.format = parse_format(f.format);
    if (!f.output.empty()) c.output = f.output;
    return c;
  }
  if (!f.model.empty()) c.model = f.model;
  if (!f.methods.empty()) c.methods = parse_methods(f.methods);
  if (f.seed) c.seed = *f.seed;
  if (!f.n.empty()) c.n_samples = parse_count(f.n, "--n");
  if (!f.n_base.empty()) c.n_base = parse_count(f.n_base, "--n-base");
  if (!f.n_deriv.empty()) c.n_deriv = parse_count(f.n_deriv, "--n-deriv");
  if (!f.reps.empty()) c.repetitions = parse_count(f.reps, "--reps");
  if (!f.groups.empty()) c.groups = parse_groups(f.groups);
  if (!f.fix.empty()) c.entropy_fix = f.fix;
  if (!f.range.empty()) c.histogram.range = parse_range_policy(f.range);
  if (!f.scheme.empty()) c.histogram.scheme = parse_conditioning_scheme(f.scheme);
  if (!f.bins_output.empty()) c.histogram.bins_output = parse_count(f.bins_output, "--bins-output");
  if (!f.bins_cond.empty()) c.histogram.bins_per_conditioning_dim = parse_count(f.bins_cond, "--bins-cond");
  if (!f.format.empty()) c.format = parse_format(f.format);
  if (!f.output.empty()) c.output = f.output;
  if (f.h) c.fd_step = *f.h;
  if (f.r) c.options.r = *f.r;
  if (!f.a.empty()) c.options.a = parse_list(f.a, "--a");
  if (!f.sigma.empty()) c.options.sigma = parse_list(f.sigma, "--sigma");
  if (f.meta_seed) {
    c.model = "metafunction";
    c.metafunction = draw_metafunction_spec(*f.meta_seed, f.meta_stream.value_or(0));
  }
  return c;
}

void print_summary(const Table& t) {
  std::cout << to_csv(t);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-based and derivative-based global sensitivity analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", toolkit_version());

  RunFlags rf;
  auto* run_cmd = app.add_subcommand("run", "Run estimators on one model and write a report");
  run_cmd->add_option("--config", rf.config, "INI experiment file");
  run_cmd->add_option("--replay", rf.replay, "Re-run the config embedded in a JSON report");
  run_cmd->add_option("--model", rf.model, "Builtin model name or 'metafunction'");
  run_cmd->add_option("--methods", rf.methods, "Comma list of deriv,variance,entropy,kl,bounds,groups");
  run_cmd->add_option("--seed", rf.seed);
  run_cmd->add_option("--n", rf.n, "Samples for entropy and KL estimates (e.g. 1e6)");
  run_cmd->add_option("--n-base", rf.n_base, "Pick-and-freeze base rows");
  run_cmd->add_option("--n-deriv", rf.n_deriv, "Derivative samples");
  run_cmd->add_option("--reps", rf.reps, "Entropy repetitions");
  run_cmd->add_option("--fd-step", rf.h, "Finite-difference step");
  run_cmd->add_option("--groups", rf.groups, "1-based groups, e.g. 1-3,4-6,7-9");
  run_cmd->add_option("--fix", rf.fix, "Entropy reduction: auto, none or i:value,...");
  run_cmd->add_option("--range", rf.range, "Histogram range policy: global or per_cell");
  run_cmd->add_option("--scheme", rf.scheme, "Conditioning scheme: auto, grid or nested");
  run_cmd->add_option("--bins-output", rf.bins_output, "Output bins (0 = automatic)");
  run_cmd->add_option("--bins-cond", rf.bins_cond, "Bins per conditioning dimension (0 = automatic)");
  run_cmd->add_option("--r", rf.r, "mono4 exponent");
  run_cmd->add_option("--a", rf.a, "Coefficient list for mono5 or gfunction3");
  run_cmd->add_option("--sigma", rf.sigma, "Standard deviations for mono5");
  run_cmd->add_option("--meta-seed", rf.meta_seed, "Draw a metafunction from this seed");
  run_cmd->add_option("--meta-stream", rf.meta_stream, "Stream of the drawn metafunction");
  run_cmd->add_option("--format", rf.format, "csv or json");
  run_cmd->add_option("--output", rf.output, "Report path (relative paths go under ENTSA_OUTPUT_DIR)");

  std::uint64_t ms_seed = 0;
  std::string ms_functions = "200", ms_n = "1e6", ms_n_deriv = "1000", ms_format = "json", ms_output;
  auto* meta_cmd = app.add_subcommand("metastudy", "Ranking agreement over random metafunctions");
  meta_cmd->add_option("--seed", ms_seed)->required();
  meta_cmd->add_option("--functions", ms_functions, "Number of functions (at least 10)");
  meta_cmd->add_option("--n", ms_n, "Samples per function");
  meta_cmd->add_option("--n-deriv", ms_n_deriv, "Derivative samples per function");
  meta_cmd->add_option("--format", ms_format);
  meta_cmd->add_option("--output", ms_output);

  std::string cv_model, cv_method = "entropy", cv_ladder = "1e3,1e4,1e5,1e6", cv_reps = "3", cv_format = "json",
              cv_output;
  std::uint64_t cv_seed = 1;
  auto* conv_cmd = app.add_subcommand("convergence", "Estimates along an ascending sample ladder");
  conv_cmd->add_option("--model", cv_model)->required();
  conv_cmd->add_option("--method", cv_method, "entropy or deriv");
  conv_cmd->add_option("--ladder", cv_ladder, "Ascending comma list of sample counts");
  conv_cmd->add_option("--reps", cv_reps);
  conv_cmd->add_option("--seed", cv_seed);
  conv_cmd->add_option("--format", cv_format);
  conv_cmd->add_option("--output", cv_output);

  std::string preset, tb_format = "json";
  std::uint64_t tb_seed = 1;
  bool quick = false;
  auto* tables_cmd = app.add_subcommand("tables", "Run a named reproduction preset");
  tables_cmd->add_option("preset", preset, "One of: ratio, monotonic, ishigami, gfunction, flood, groups, metastudy")
      ->required();
  tables_cmd->add_option("--seed", tb_seed);
  tables_cmd->add_flag("--quick", quick, "Shrink sample sizes 100x");
  tables_cmd->add_option("--format", tb_format);

  auto* models_cmd = app.add_subcommand("models", "List builtin models");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Exit::ok : Exit::config_error;
  }

  try {
    if (*run_cmd) {
      const RunConfig config = build_config(rf);
      const auto report = run(config);
      const auto path = resolve_output(config.output, config.model + "-" + std::to_string(config.seed),
                                       config.format);
      write_table(path, report, config.format);
      print_summary(report);
      std::cerr << "wrote " << path.string() << '\n';
    } else if (*meta_cmd) {
      MetaStudySettings s;
      s.n_samples = parse_count(ms_n, "--n");
      s.n_deriv = parse_count(ms_n_deriv, "--n-deriv");
      const auto format = parse_format(ms_format);
      const auto t = metastudy(parse_count(ms_functions, "--functions"), ms_seed, s);
      const auto path = resolve_output(ms_output, "metastudy-" + std::to_string(ms_seed), format);
      write_table(path, t, format);
      std::cout << t.metadata["summary"].dump(2) << '\n';
      std::cerr << "wrote " << path.string() << '\n';
    } else if (*conv_cmd) {
      ConvergenceSettings s;
      s.model = cv_model;
      s.method = parse_convergence_method(cv_method);
      for (double v : parse_list(cv_ladder, "--ladder")) {
        if (!(v >= 1) || v != std::floor(v)) throw ConfigError("--ladder entries must be positive integers");
        s.ladder.push_back(static_cast<std::size_t>(v));
      }
      s.repetitions = parse_count(cv_reps, "--reps");
      s.seed = cv_seed;
      const auto format = parse_format(cv_format);
      const auto t = convergence(s);
      const auto path = resolve_output(cv_output, "convergence-" + cv_model + "-" + cv_method, format);
      write_table(path, t, format);
      print_summary(t);
      std::cerr << "wrote " << path.string() << '\n';
    } else if (*tables_cmd) {
      const auto format = parse_format(tb_format);
      for (const auto& out : run_preset(preset, tb_seed, quick)) {
        const auto path = resolve_output("", preset + "-" + out.name, format);
        write_table(path, out.table, format);
        std::cerr << "wrote " << path.string() << '\n';
      }
    } else if (*models_cmd) {
      for (const auto& name : builtin_names()) std::cout << name << '\n';
      std::cout << "metafunction\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return Exit::config_error;
  } catch (const SparseGridError& e) {
    std::cerr << "sparse conditioning grid: " << e.what() << '\n';
    return Exit::sparse_grid;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return Exit::numerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Exit::internal;
  }
  return Exit::ok;
}
