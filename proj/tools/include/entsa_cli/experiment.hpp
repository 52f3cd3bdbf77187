#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <entsa/entropy_sa.hpp>
#include <entsa/testsuite.hpp>

#include "entsa_cli/config.hpp"
#include "entsa_cli/report.hpp"

namespace entsa::cli {

std::string toolkit_version();

/// Resolves the configured model (builtin or metafunction).
BenchmarkModel resolve_model(const RunConfig& config);

/// Runs every requested estimator and returns the report; does not write it.
SensitivityReport run(const RunConfig& config);

/// Config embedded in a report's metadata.
RunConfig config_from_report(const Table& report);

struct MetaStudySettings {
  std::size_t n_samples = 1'000'000;
  std::size_t n_deriv = 1000;
  double fd_step = 1e-5;
  HistogramSpec histogram;
};

/// One row per function. Functions whose output is constant, or whose
/// estimates fail, are kept as excluded rows with a reason in the metadata.
/// The agreement summary lives in metadata["summary"].
Table metastudy(const std::vector<MetaFunctionSpec>& specs, const MetaStudySettings& settings);

/// Draws n_functions specs from (seed, 0..n_functions-1); n_functions >= 10.
Table metastudy(std::size_t n_functions, std::uint64_t seed, const MetaStudySettings& settings);

enum class ConvergenceMethod { entropy, deriv };
ConvergenceMethod parse_convergence_method(std::string_view s);

struct ConvergenceSettings {
  std::string model;
  BuiltinOptions options;
  ConvergenceMethod method = ConvergenceMethod::entropy;
  std::vector<std::size_t> ladder;
  std::size_t repetitions = 3;
  std::uint64_t seed = 1;
  double fd_step = 1e-5;
  HistogramSpec histogram;
};

/// One row per rung with mean and std per variable, plus the reference value
/// and errors where the benchmark has one.
Table convergence(const ConvergenceSettings& settings);

std::vector<std::string> preset_names();

struct PresetOutput {
  std::string name;
  Table table;
};

/// Named reproduction presets. `quick` shrinks every sample size by 100x
/// for smoke runs.
std::vector<PresetOutput> run_preset(const std::string& name, std::uint64_t seed, bool quick);

}  // namespace entsa::cli
