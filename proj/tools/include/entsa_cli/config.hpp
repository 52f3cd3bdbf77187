#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <entsa/entropy_sa.hpp>
#include <entsa/testsuite.hpp>

namespace entsa::cli {

enum class Method { deriv, variance, entropy, kl, bounds, groups };
enum class Format { csv, json };

std::string_view to_string(Method m);
std::string_view to_string(Format f);
Method parse_method(std::string_view s);
Format parse_format(std::string_view s);

/// One experiment. Serialises to and from an INI file with sections
/// [run], [model], [sampling], [histogram]; unknown keys are rejected.
struct RunConfig {
  // [run]
  std::string model = "ishigami";
  std::set<Method> methods{Method::deriv, Method::variance, Method::entropy, Method::bounds};
  std::uint64_t seed = 1;
  std::string output;  // empty: <model>-<seed>.<format> under the output directory
  Format format = Format::json;

  // [model]
  BuiltinOptions options;
  std::optional<MetaFunctionSpec> metafunction;  // model = "metafunction"
  std::string entropy_fix = "auto";              // auto | none | "i:v,i:v" (1-based)
  std::vector<std::vector<std::size_t>> groups;  // 0-based indices

  // [sampling]
  std::size_t n_samples = 1'000'000;  // entropy, KL and first-order estimates
  std::size_t n_base = 100'000;       // pick-and-freeze base rows
  std::size_t n_deriv = 10'000;       // derivative sample
  std::size_t repetitions = 1;
  double fd_step = 1e-5;

  // [histogram]
  HistogramSpec histogram;

  void validate() const;
  [[nodiscard]] std::string to_ini() const;
  [[nodiscard]] bool has(Method m) const { return methods.contains(m); }
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& ini_text);

/// "1e6", "250000" -> count. Rejects negatives and fractions.
std::size_t parse_count(std::string_view text, std::string_view what);

/// "1-3,4-6,7-9" or "1+2,3" (1-based, inclusive ranges) -> 0-based groups.
std::vector<std::vector<std::size_t>> parse_groups(std::string_view text);
std::string format_groups(const std::vector<std::vector<std::size_t>>& groups);

std::set<Method> parse_methods(std::string_view text);
std::vector<double> parse_list(std::string_view text, std::string_view what);

/// Resolves the entropy_fix setting for a benchmark into pinned coordinates.
std::map<std::size_t, double> resolve_entropy_fix(const RunConfig& config,
                                                  const BenchmarkModel& bench);

}  // namespace entsa::cli
