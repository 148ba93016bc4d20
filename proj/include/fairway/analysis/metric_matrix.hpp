#pragma once

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fairway/error.hpp"
#include "fairway/format.hpp"

namespace fairway {

// Rectangular result table of a parameter study: one row per evaluated
// configuration (signal timings, toll level, ...), one column per recorded
// metric. Key columns identify the row; metric columns are the measurements.
struct MetricMatrix {
  std::vector<std::string> key_names;
  std::vector<std::string> metric_names;
  std::vector<std::vector<double>> keys;    // keys[row][key]
  std::vector<std::vector<double>> values;  // values[row][metric]
  std::string provenance;  // written as leading '# ' comment lines
};

// column names that identify rows rather than measure anything
inline const std::set<std::string>& known_key_columns() {
  static const std::set<std::string> kKeys = {"g_straight", "g_turn",
                                              "price_eur"};
  return kKeys;
}

inline void validate(const MetricMatrix& m) {
  if (m.values.empty()) throw Error("InvalidSpec", "metric matrix has no rows");
  std::set<std::string> seen;
  for (const auto& n : m.key_names)
    if (n.empty() || !seen.insert(n).second)
      throw Error("InvalidSpec", "duplicate or empty column name: " + n);
  for (const auto& n : m.metric_names)
    if (n.empty() || !seen.insert(n).second)
      throw Error("InvalidSpec", "duplicate or empty column name: " + n);
  if (m.keys.size() != m.values.size())
    throw Error("InvalidSpec", "key rows and value rows disagree");
  for (std::size_t r = 0; r < m.values.size(); ++r) {
    if (m.keys[r].size() != m.key_names.size() ||
        m.values[r].size() != m.metric_names.size())
      throw Error("InvalidSpec", "ragged metric matrix row");
    for (double v : m.keys[r])
      if (!std::isfinite(v)) throw Error("InvalidValue", "non-finite key");
    for (double v : m.values[r])
      if (!std::isfinite(v))
        throw Error("InvalidValue", "non-finite metric value");
  }
}

inline std::size_t column_index(const MetricMatrix& m,
                                const std::string& name) {
  for (std::size_t i = 0; i < m.metric_names.size(); ++i)
    if (m.metric_names[i] == name) return i;
  std::string have;
  for (const auto& n : m.metric_names) have += (have.empty() ? "" : ", ") + n;
  throw Error("UnknownMetric", "no column '" + name + "' (have: " + have + ")");
}

inline std::vector<double> column(const MetricMatrix& m,
                                  const std::string& name) {
  const std::size_t c = column_index(m, name);
  std::vector<double> out(m.values.size());
  for (std::size_t r = 0; r < m.values.size(); ++r) out[r] = m.values[r][c];
  return out;
}

// Restrict to the named metric columns, in the order given; key columns
// always stay. Unknown names throw UnknownMetric, duplicates fail validate.
inline MetricMatrix select_metrics(const MetricMatrix& m,
                                   const std::vector<std::string>& names) {
  if (names.empty()) return m;
  MetricMatrix out;
  out.key_names = m.key_names;
  out.keys = m.keys;
  out.provenance = m.provenance;
  out.metric_names = names;
  std::vector<std::size_t> idx;
  idx.reserve(names.size());
  for (const auto& n : names) idx.push_back(column_index(m, n));
  out.values.reserve(m.values.size());
  for (const auto& row : m.values) {
    std::vector<double> r;
    r.reserve(idx.size());
    for (std::size_t i : idx) r.push_back(row[i]);
    out.values.push_back(std::move(r));
  }
  validate(out);
  return out;
}

inline void write_csv(const MetricMatrix& m, std::ostream& os) {
  if (!m.provenance.empty()) {
    std::istringstream lines(m.provenance);
    std::string line;
    while (std::getline(lines, line)) os << "# " << line << "\n";
  }
  bool first = true;
  for (const auto& n : m.key_names) {
    os << (first ? "" : ",") << n;
    first = false;
  }
  for (const auto& n : m.metric_names) {
    os << (first ? "" : ",") << n;
    first = false;
  }
  os << "\n";
  for (std::size_t r = 0; r < m.values.size(); ++r) {
    first = true;
    for (double v : m.keys[r]) {
      os << (first ? "" : ",") << format_double(v);
      first = false;
    }
    for (double v : m.values[r]) {
      os << (first ? "" : ",") << format_double(v);
      first = false;
    }
    os << "\n";
  }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

// Reads a CSV written by write_csv. Columns listed in known_key_columns()
// come back as keys, everything else as metrics.
inline MetricMatrix read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("IoError", "cannot open " + path);
  MetricMatrix m;
  std::string line;
  bool have_header = false;
  std::vector<bool> is_key;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0 || line == "#") {
      if (!m.provenance.empty()) m.provenance += "\n";
      m.provenance += line.size() > 2 ? line.substr(2) : "";
      continue;
    }
    const auto cells = detail::split_csv_line(line);
    if (!have_header) {
      for (const auto& name : cells) {
        const bool key = known_key_columns().count(name) > 0;
        is_key.push_back(key);
        (key ? m.key_names : m.metric_names).push_back(name);
      }
      have_header = true;
      continue;
    }
    if (cells.size() != is_key.size())
      throw Error("IoError", path + ":" + std::to_string(line_no) +
                                 ": expected " + std::to_string(is_key.size()) +
                                 " cells, got " + std::to_string(cells.size()));
    std::vector<double> krow, vrow;
    for (std::size_t i = 0; i < cells.size(); ++i)
      (is_key[i] ? krow : vrow).push_back(parse_double(cells[i]));
    m.keys.push_back(std::move(krow));
    m.values.push_back(std::move(vrow));
  }
  if (!have_header) throw Error("IoError", path + ": empty CSV");
  validate(m);
  return m;
}

}  // namespace fairway
