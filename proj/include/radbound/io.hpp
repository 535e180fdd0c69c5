#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "radbound/dataset.hpp"
#include "radbound/errors.hpp"
#include "radbound/matrix.hpp"

namespace radbound {

enum class DataFormat { csv, json };

[[nodiscard]] inline DataFormat infer_format(const std::string& path) {
  const auto pos = path.rfind('.');
  if (pos != std::string::npos) {
    std::string ext = path.substr(pos + 1);
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == "csv") return DataFormat::csv;
    if (ext == "json") return DataFormat::json;
  }
  throw invalid_input("cannot infer format from path: " + path);
}

namespace detail {

[[nodiscard]] inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[nodiscard]] inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

[[nodiscard]] inline double parse_cell(const std::string& cell, std::size_t line_number) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw parse_error("line " + std::to_string(line_number) + ": non-numeric cell '" + cell + "'");
  return v;
}

[[nodiscard]] inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

[[nodiscard]] inline MultitaskDataset dataset_from_groups(
    const std::map<long long, std::vector<std::vector<double>>>& groups, std::size_t dimension) {
  std::vector<Matrix> tasks;
  std::size_t points = 0;
  for (const auto& [label, rows] : groups) {
    if (!tasks.empty() && rows.size() != points)
      throw invalid_input("task " + std::to_string(label) + " has " +
                          std::to_string(rows.size()) + " rows, expected " +
                          std::to_string(points));
    points = rows.size();
    Matrix m(rows.size(), dimension);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < dimension; ++j) m(i, j) = rows[i][j];
    tasks.push_back(std::move(m));
  }
  return MultitaskDataset(std::move(tasks));
}

}  // namespace detail

// CSV: header row, optional integer `task` column, remaining columns are
// features. Without a task column the file is a single task.
[[nodiscard]] inline MultitaskDataset load_dataset_csv(std::istream& in) {
  std::string line;
  std::size_t line_number = 0;
  if (!std::getline(in, line)) throw parse_error("line 1: missing header row");
  ++line_number;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = detail::split_csv_line(line);
  if (header.empty()) throw parse_error("line 1: empty header row");
  std::size_t task_col = header.size();
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == "task") {
      task_col = j;
      break;
    }
  const bool has_task = task_col < header.size();
  const std::size_t dimension = header.size() - (has_task ? 1 : 0);
  if (dimension == 0) throw invalid_input("no feature columns");

  std::map<long long, std::vector<std::vector<double>>> groups;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    const std::vector<std::string> cells = detail::split_csv_line(line);
    if (cells.size() != header.size())
      throw parse_error("line " + std::to_string(line_number) + ": expected " +
                        std::to_string(header.size()) + " cells, got " +
                        std::to_string(cells.size()));
    long long label = 0;
    std::vector<double> row;
    row.reserve(dimension);
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (has_task && j == task_col) {
        const double v = detail::parse_cell(cells[j], line_number);
        label = static_cast<long long>(v);
        if (static_cast<double>(label) != v)
          throw parse_error("line " + std::to_string(line_number) +
                            ": task label must be an integer");
      } else {
        row.push_back(detail::parse_cell(cells[j], line_number));
      }
    }
    groups[label].push_back(std::move(row));
  }
  if (groups.empty()) throw invalid_input("no data rows");
  return detail::dataset_from_groups(groups, dimension);
}

// JSON: {"tasks": [task][row][feature]}.
[[nodiscard]] inline MultitaskDataset load_dataset_json(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("tasks") || !j["tasks"].is_array() || j["tasks"].empty())
    throw parse_error("json: expected an object with a nonempty 'tasks' array");
  std::vector<Matrix> tasks;
  for (const auto& jt : j["tasks"]) {
    if (!jt.is_array() || jt.empty()) throw parse_error("json: each task must be a nonempty array");
    const std::size_t rows = jt.size();
    std::size_t cols = 0;
    Matrix m;
    for (std::size_t i = 0; i < rows; ++i) {
      const auto& jrow = jt[i];
      if (!jrow.is_array()) throw parse_error("json: each row must be an array");
      if (i == 0) {
        cols = jrow.size();
        if (cols == 0) throw parse_error("json: empty row");
        m = Matrix(rows, cols);
      } else if (jrow.size() != cols) {
        throw parse_error("json: ragged rows within a task");
      }
      for (std::size_t c = 0; c < cols; ++c) {
        if (!jrow[c].is_number()) throw parse_error("json: non-numeric cell");
        m(i, c) = jrow[c].get<double>();
      }
    }
    tasks.push_back(std::move(m));
  }
  return MultitaskDataset(std::move(tasks));
}

[[nodiscard]] inline MultitaskDataset load_dataset(const std::string& path) {
  const DataFormat format = infer_format(path);
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open " + path);
  try {
    return format == DataFormat::csv ? load_dataset_csv(in) : load_dataset_json(in);
  } catch (parse_error& e) {
    throw parse_error(path + ": " + e.what());
  }
}

// Entries are written with 17 significant digits, so a save/load round trip
// reproduces every double bit for bit.
inline void save_dataset_csv(const MultitaskDataset& data, std::ostream& out) {
  const bool has_task = data.task_count() > 1;
  if (has_task) out << "task";
  for (std::size_t j = 0; j < data.dimension(); ++j) {
    if (has_task || j > 0) out << ',';
    out << 'x' << j;
  }
  out << '\n';
  for (std::size_t t = 0; t < data.task_count(); ++t)
    for (std::size_t i = 0; i < data.points_per_task(); ++i) {
      if (has_task) out << t;
      for (std::size_t j = 0; j < data.dimension(); ++j) {
        if (has_task || j > 0) out << ',';
        out << detail::format_double(data.tasks()[t](i, j));
      }
      out << '\n';
    }
}

inline void save_dataset_json(const MultitaskDataset& data, std::ostream& out) {
  out << "{\"tasks\":[";
  for (std::size_t t = 0; t < data.task_count(); ++t) {
    if (t > 0) out << ',';
    out << '[';
    for (std::size_t i = 0; i < data.points_per_task(); ++i) {
      if (i > 0) out << ',';
      out << '[';
      for (std::size_t j = 0; j < data.dimension(); ++j) {
        if (j > 0) out << ',';
        out << detail::format_double(data.tasks()[t](i, j));
      }
      out << ']';
    }
    out << ']';
  }
  out << "]}\n";
}

inline void save_dataset(const MultitaskDataset& data, const std::string& path) {
  const DataFormat format = infer_format(path);
  std::ofstream out(path);
  if (!out) throw invalid_input("cannot write " + path);
  if (format == DataFormat::csv)
    save_dataset_csv(data, out);
  else
    save_dataset_json(data, out);
}

}  // namespace radbound
