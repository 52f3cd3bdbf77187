#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "entsa_cli/config.hpp"

namespace entsa::cli {

using Json = nlohmann::ordered_json;

/// A labelled table of reals plus free-form metadata. NaN marks an absent
/// value; +-inf are legitimate results (e.g. l_i of a dummy input).
struct Table {
  std::string label_header = "variable";
  std::vector<std::string> labels;
  std::vector<std::pair<std::string, std::vector<double>>> columns;
  Json metadata = Json::object();

  /// Adds or replaces a column; values must have one entry per label.
  void set(const std::string& name, std::vector<double> values);
  [[nodiscard]] const std::vector<double>* column(const std::string& name) const;
  [[nodiscard]] double at(const std::string& name, std::size_t row) const;
  std::size_t add_row(std::string label);  // fills existing columns with NaN

  friend bool operator==(const Table&, const Table&);
};

using SensitivityReport = Table;

[[nodiscard]] std::string format_number(double v);
[[nodiscard]] Json number_to_json(double v);
[[nodiscard]] double number_from_json(const Json& j);

[[nodiscard]] std::string to_csv(const Table& t);
[[nodiscard]] Json to_json(const Table& t);
[[nodiscard]] Table table_from_json(const Json& j);
[[nodiscard]] Table table_from_csv(const std::string& text);

/// Writes through a temporary file in the same directory and renames it
/// into place, so readers never see a partial report.
void write_atomic(const std::filesystem::path& path, const std::string& contents);
void write_table(const std::filesystem::path& path, const Table& t, Format format);

/// ENTSA_OUTPUT_DIR if set, otherwise the working directory.
std::filesystem::path output_directory();
std::filesystem::path resolve_output(const std::string& requested, const std::string& fallback_stem,
                                     Format format);

}  // namespace entsa::cli
