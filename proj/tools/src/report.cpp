#include "entsa_cli/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <entsa/error.hpp>

namespace entsa::cli {

namespace {

bool same_value(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || a == b;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_cell(const std::string& s) {
  if (s.empty()) return NAN;
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("bad CSV number '" + s + "'");
  return v;
}

}  // namespace

void Table::set(const std::string& name, std::vector<double> values) {
  if (values.size() != labels.size())
    throw std::logic_error("column '" + name + "' has " + std::to_string(values.size()) +
                           " values for " + std::to_string(labels.size()) + " rows");
  for (auto& [n, v] : columns)
    if (n == name) {
      v = std::move(values);
      return;
    }
  columns.emplace_back(name, std::move(values));
}

const std::vector<double>* Table::column(const std::string& name) const {
  for (const auto& [n, v] : columns)
    if (n == name) return &v;
  return nullptr;
}

double Table::at(const std::string& name, std::size_t row) const {
  const auto* c = column(name);
  return c ? c->at(row) : NAN;
}

std::size_t Table::add_row(std::string label) {
  labels.push_back(std::move(label));
  for (auto& [n, v] : columns) v.push_back(NAN);
  return labels.size() - 1;
}

bool operator==(const Table& a, const Table& b) {
  if (a.label_header != b.label_header || a.labels != b.labels || a.columns.size() != b.columns.size())
    return false;
  for (std::size_t c = 0; c < a.columns.size(); ++c) {
    if (a.columns[c].first != b.columns[c].first) return false;
    const auto& x = a.columns[c].second;
    const auto& y = b.columns[c].second;
    if (x.size() != y.size()) return false;
    for (std::size_t r = 0; r < x.size(); ++r)
      if (!same_value(x[r], y[r])) return false;
  }
  return true;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

Json number_to_json(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const Json& j) {
  if (j.is_null()) return NAN;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    throw ConfigError("unexpected string value '" + s + "' in report");
  }
  return j.get<double>();
}

std::string to_csv(const Table& t) {
  std::ostringstream out;
  out << csv_escape(t.label_header);
  for (const auto& [name, values] : t.columns) out << ',' << csv_escape(name);
  out << '\n';
  for (std::size_t r = 0; r < t.labels.size(); ++r) {
    out << csv_escape(t.labels[r]);
    for (const auto& [name, values] : t.columns) out << ',' << format_number(values[r]);
    out << '\n';
  }
  return out.str();
}

Json to_json(const Table& t) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < t.labels.size(); ++r) {
    Json row = Json::object();
    row[t.label_header] = t.labels[r];
    for (const auto& [name, values] : t.columns) row[name] = number_to_json(values[r]);
    rows.push_back(std::move(row));
  }
  Json columns = Json::array();
  for (const auto& [name, values] : t.columns) columns.push_back(name);
  return Json{{"metadata", t.metadata},
              {"label", t.label_header},
              {"columns", std::move(columns)},
              {"rows", std::move(rows)}};
}

Table table_from_json(const Json& j) {
  Table t;
  t.metadata = j.value("metadata", Json::object());
  t.label_header = j.at("label").get<std::string>();
  for (const auto& name : j.at("columns")) t.columns.emplace_back(name.get<std::string>(), std::vector<double>{});
  for (const auto& row : j.at("rows")) {
    t.labels.push_back(row.at(t.label_header).get<std::string>());
    for (auto& [name, values] : t.columns) values.push_back(number_from_json(row.at(name)));
  }
  return t;
}

Table table_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Table t;
  if (!std::getline(in, line)) throw ConfigError("empty CSV report");
  const auto header = csv_split(line);
  t.label_header = header.at(0);
  for (std::size_t c = 1; c < header.size(); ++c) t.columns.emplace_back(header[c], std::vector<double>{});
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = csv_split(line);
    if (cells.size() != header.size()) throw ConfigError("ragged CSV row");
    t.labels.push_back(cells[0]);
    for (std::size_t c = 1; c < cells.size(); ++c) t.columns[c - 1].second.push_back(parse_cell(cells[c]));
  }
  return t;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw ConfigError("write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, path);
}

void write_table(const std::filesystem::path& path, const Table& t, Format format) {
  write_atomic(path, format == Format::csv ? to_csv(t) : to_json(t).dump(2) + "\n");
}

std::filesystem::path output_directory() {
  if (const char* dir = std::getenv("ENTSA_OUTPUT_DIR"); dir && *dir) return dir;
  return std::filesystem::current_path();
}

std::filesystem::path resolve_output(const std::string& requested, const std::string& fallback_stem,
                                     Format format) {
  std::filesystem::path p = requested.empty()
                                ? std::filesystem::path(fallback_stem + "." + std::string(to_string(format)))
                                : std::filesystem::path(requested);
  return p.is_absolute() ? p : output_directory() / p;
}

}  // namespace entsa::cli
