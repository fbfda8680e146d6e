#ifndef DEGEN_ESTIMATE_REPORT_HPP
#define DEGEN_ESTIMATE_REPORT_HPP

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace degen {

/// One measured quantity against its bound. An undefined metric has no value
/// and never passes unless it is marked informational.
struct Metric {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool defined = true;
  bool pass = false;
  bool informational = false;
  std::string note;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  // NaN marks an undefined cell
};

struct EstimateReport {
  std::vector<Metric> metrics;
  std::vector<Table> tables;
  nlohmann::ordered_json provenance = nlohmann::ordered_json::object();

  /// value <= bound.
  Metric& check_le(std::string name, double value, double bound, std::string note = {})
  {
    Metric m{std::move(name), value, bound, std::isfinite(value), false, false, std::move(note)};
    m.pass = m.defined && value <= bound;
    metrics.push_back(m);
    return metrics.back();
  }

  /// value >= bound.
  Metric& check_ge(std::string name, double value, double bound, std::string note = {})
  {
    Metric m{std::move(name), value, bound, std::isfinite(value), false, false, std::move(note)};
    m.pass = m.defined && value >= bound;
    metrics.push_back(m);
    return metrics.back();
  }

  Metric& check_true(std::string name, bool ok, std::string note = {})
  {
    metrics.push_back({std::move(name), ok ? 1.0 : 0.0, 1.0, true, ok, false, std::move(note)});
    return metrics.back();
  }

  Metric& inform(std::string name, double value, std::string note = {})
  {
    metrics.push_back({std::move(name), value, 0.0, std::isfinite(value), true, true, std::move(note)});
    return metrics.back();
  }

  void merge(const EstimateReport& other, const std::string& prefix = {})
  {
    for (auto m : other.metrics) {
      m.name = prefix + m.name;
      metrics.push_back(std::move(m));
    }
    for (auto t : other.tables) {
      t.name = prefix + t.name;
      tables.push_back(std::move(t));
    }
  }

  bool all_pass() const
  {
    for (const auto& m : metrics)
      if (!m.pass) return false;
    return true;
  }

  std::vector<std::string> failures() const
  {
    std::vector<std::string> out;
    for (const auto& m : metrics)
      if (!m.pass) out.push_back(m.name);
    return out;
  }
};

inline nlohmann::ordered_json finite_or_null(double v)
{
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

inline nlohmann::ordered_json metrics_json(const EstimateReport& r)
{
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& m : r.metrics) {
    nlohmann::ordered_json e{{"value", finite_or_null(m.value)},
                     {"bound", m.informational ? nlohmann::ordered_json(nullptr) : finite_or_null(m.bound)},
                     {"pass", m.pass}};
    if (!m.defined) e["undefined"] = true;
    if (m.informational) e["informational"] = true;
    if (!m.note.empty()) e["note"] = m.note;
    j[m.name] = std::move(e);
  }
  return j;
}

inline std::string table_file_name(const Table& t)
{
  std::string s = t.name;
  for (char& c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) c = '_';
  return s + ".csv";
}

inline std::filesystem::path write_table_csv(const Table& t, const std::filesystem::path& dir)
{
  std::filesystem::create_directories(dir);
  const auto path = dir / table_file_name(t);
  std::ofstream os(path);
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << '\n';
  char buf[32];
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      if (std::isfinite(row[c])) {
        std::snprintf(buf, sizeof buf, "%.17g", row[c]);
        os << buf;
      } else {
        os << "nan";
      }
    }
    os << '\n';
  }
  return path;
}

} // namespace degen

#endif // DEGEN_ESTIMATE_REPORT_HPP
