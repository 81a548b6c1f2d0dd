#pragma once

// Plain CSV input (header row, '#' comments) and number formatting for the
// command-line tool. Column layouts are described in docs/FORMATS.md.

#include "lrdimer/errors.hpp"
#include "lrdimer/lineshift.hpp"
#include "lrdimer/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace lrdimer::io {

inline std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct CsvTable {
  std::string source;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> lines;

  std::optional<std::size_t> column(const std::string &name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  }

  double number(std::size_t row, std::size_t col) const {
    const std::string &cell = rows[row][col];
    try {
      std::size_t used = 0;
      const double x = std::stod(cell, &used);
      if (used != cell.size())
        throw std::invalid_argument(cell);
      return x;
    } catch (const std::exception &) {
      throw UsageError(source + ":" + std::to_string(lines[row]) + ": column '" +
                       header[col] + "' is not a number: '" + cell + "'");
    }
  }
};

inline std::vector<std::string> splitCsvLine(const std::string &line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ','))
    out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',')
    out.emplace_back();
  return out;
}

inline CsvTable parseCsv(std::istream &in, const std::string &source) {
  CsvTable t;
  t.source = source;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string s = trim(line);
    if (s.empty() || s.front() == '#')
      continue;
    auto cells = splitCsvLine(s);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size())
      throw UsageError(source + ":" + std::to_string(number) + ": expected " +
                       std::to_string(t.header.size()) + " columns, found " +
                       std::to_string(cells.size()));
    t.rows.push_back(std::move(cells));
    t.lines.push_back(number);
  }
  if (t.header.empty())
    throw UsageError(source + ": empty CSV file");
  return t;
}

inline CsvTable readCsv(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw UsageError("cannot open '" + path + "'");
  return parseCsv(in, path);
}

/// Rejects columns outside `required` + `optional` and missing required ones.
inline void checkColumns(const CsvTable &t, const std::vector<std::string> &required,
                         const std::vector<std::string> &optional = {}) {
  for (const auto &name : required)
    if (!t.column(name))
      throw UsageError(t.source + ": missing column '" + name + "'");
  std::set<std::string> seen;
  for (const auto &name : t.header) {
    if (!seen.insert(name).second)
      throw UsageError(t.source + ": duplicate column '" + name + "'");
    if (std::find(required.begin(), required.end(), name) == required.end() &&
        std::find(optional.begin(), optional.end(), name) == optional.end())
      throw UsageError(t.source + ": unknown column '" + name + "'");
  }
}

/// v, delta_mhz, b0_gauss, t_uk[, n_cm3]
inline std::vector<Measurement> measurementsFromCsv(const CsvTable &t) {
  checkColumns(t, {"v", "delta_mhz", "b0_gauss", "t_uk"}, {"n_cm3"});
  const auto cv = *t.column("v"), cd = *t.column("delta_mhz"),
             cb = *t.column("b0_gauss"), ct = *t.column("t_uk");
  const auto cn = t.column("n_cm3");
  std::vector<Measurement> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    Measurement m;
    m.vLabel = static_cast<int>(t.number(i, cv));
    m.deltaV = t.number(i, cd);
    m.b0 = t.number(i, cb);
    m.temperature = t.number(i, ct);
    if (cn && !t.rows[i][*cn].empty())
      m.density = t.number(i, *cn);
    out.push_back(m);
  }
  return out;
}

/// detuning_mhz, temperature_uk[, atoms, od]
inline std::vector<ScanPoint> scanFromCsv(const CsvTable &t) {
  checkColumns(t, {"detuning_mhz", "temperature_uk"}, {"atoms", "od"});
  const auto cd = *t.column("detuning_mhz"), ct = *t.column("temperature_uk");
  std::vector<ScanPoint> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    out.push_back({t.number(i, cd), t.number(i, ct)});
  return out;
}

/// v, energy_mhz, sigma_mhz
inline std::vector<ExperimentalLevel> levelsFromCsv(const CsvTable &t) {
  checkColumns(t, {"v", "energy_mhz", "sigma_mhz"});
  const auto cv = *t.column("v"), ce = *t.column("energy_mhz"),
             cs = *t.column("sigma_mhz");
  std::vector<ExperimentalLevel> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    out.push_back({static_cast<int>(t.number(i, cv)), t.number(i, ce), t.number(i, cs)});
  return out;
}

/// b0_gauss, detuning_mhz[, sigma_mhz]
inline std::vector<ZeemanPoint> zeemanFromCsv(const CsvTable &t) {
  checkColumns(t, {"b0_gauss", "detuning_mhz"}, {"sigma_mhz"});
  const auto cb = *t.column("b0_gauss"), cd = *t.column("detuning_mhz");
  const auto cs = t.column("sigma_mhz");
  std::vector<ZeemanPoint> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    out.push_back({t.number(i, cb), t.number(i, cd), cs ? t.number(i, *cs) : 0.0});
  return out;
}

/// `digits` significant figures without exponent notation
/// (-1417.54 -> "-1418", -2.48181 -> "-2.482").
inline std::string significant(double x, int digits = 4) {
  if (!std::isfinite(x))
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  if (x == 0.0)
    return "0";
  const int exponent = static_cast<int>(std::floor(std::log10(std::abs(x))));
  const int decimals = std::max(0, digits - 1 - exponent);
  const double unit = std::pow(10.0, exponent - digits + 1);
  const double rounded = decimals > 0 ? x : std::round(x / unit) * unit;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, rounded);
  std::string s = buf;
  if (s == "-0")
    s = "0";
  return s;
}

inline std::string fixed(double x, int decimals = 1) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  return buf;
}

} // namespace lrdimer::io
