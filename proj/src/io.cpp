#include "locreg/io.hpp"

#include "locreg/error.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace locreg::io {

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw InvalidInput("unknown format '" + name + "' (expected csv or json)");
}

Format format_from_path(const std::string& path) {
  const std::string ext = ".json";
  if (path.size() >= ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0)
    return Format::json;
  return Format::csv;
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

bool parse_numeric_line(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &pos);
    } catch (const std::exception&) {
      return false;
    }
    while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
    if (pos != cell.size()) return false;
    out.push_back(v);
  }
  return !out.empty();
}

bool blank(const std::string& line) {
  for (char c : line)
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Matrix read_rows_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::vector<double> values;
  bool first = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank(line)) continue;
    if (!parse_numeric_line(line, values)) {
      if (first) {
        first = false;
        continue;
      }
      throw InvalidInput("malformed CSV line " + std::to_string(lineno));
    }
    first = false;
    if (!rows.empty() && values.size() != rows.front().size())
      throw InvalidInput("CSV line " + std::to_string(lineno) + " has the wrong column count");
    rows.push_back(values);
  }
  if (rows.empty()) throw InvalidInput("CSV contains no data rows");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

void write_rows_csv(std::ostream& out, const Matrix& rows) {
  for (Eigen::Index j = 0; j < rows.cols(); ++j) out << (j ? "," : "") << 'x' << j;
  out << '\n';
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) out << (j ? "," : "") << fmt_double(rows(i, j));
    out << '\n';
  }
}

nlohmann::json rows_to_json(const Matrix& rows) {
  nlohmann::json pts = nlohmann::json::array();
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < rows.cols(); ++j) row.push_back(rows(i, j));
    pts.push_back(std::move(row));
  }
  return {{"d", rows.cols()}, {"n", rows.rows()}, {"points", std::move(pts)}};
}

Matrix rows_from_json(const nlohmann::json& j) {
  try {
    const auto& pts = j.at("points");
    const auto n = static_cast<Eigen::Index>(pts.size());
    const Eigen::Index d = j.contains("d") ? j.at("d").get<Eigen::Index>()
                                           : (n ? static_cast<Eigen::Index>(pts.at(0).size()) : 0);
    if (j.contains("n") && j.at("n").get<Eigen::Index>() != n)
      throw InvalidInput("JSON 'n' does not match the number of points");
    Matrix m(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& row = pts.at(static_cast<std::size_t>(i));
      if (static_cast<Eigen::Index>(row.size()) != d)
        throw InvalidInput("JSON point " + std::to_string(i) + " has the wrong dimension");
      for (Eigen::Index k = 0; k < d; ++k) m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed point JSON: ") + e.what());
  }
}

Matrix read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  if (format_from_path(path) == Format::json) {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw InvalidInput("cannot parse '" + path + "': " + e.what());
    }
    return rows_from_json(j);
  }
  return read_rows_csv(in);
}

void write_rows(const std::string& path, const Matrix& rows, Format format) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  if (format == Format::json)
    out << rows_to_json(rows).dump() << '\n';
  else
    write_rows_csv(out, rows);
}

Vector parse_point(const std::string& text) {
  std::vector<double> values;
  if (!parse_numeric_line(text, values)) throw InvalidInput("cannot parse point '" + text + "'");
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace locreg::io
