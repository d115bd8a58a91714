#pragma once

#include "locreg/geometry.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace locreg::io {

enum class Format { csv, json };

Format parse_format(const std::string& name);
/// csv unless the path ends in ".json".
Format format_from_path(const std::string& path);

/// Shortest round-trip decimal text ("%.17g").
std::string fmt_double(double v);

/// Rows are points. CSV carries a header row "x0,x1,..."; a leading
/// non-numeric line is skipped on read.
Matrix read_rows_csv(std::istream& in);
void write_rows_csv(std::ostream& out, const Matrix& rows);

/// {"d": d, "n": n, "points": [[...], ...]}
nlohmann::json rows_to_json(const Matrix& rows);
Matrix rows_from_json(const nlohmann::json& j);

Matrix read_rows(const std::string& path);
void write_rows(const std::string& path, const Matrix& rows, Format format);

inline Dictionary read_dictionary(const std::string& path) { return Dictionary::from_rows(read_rows(path)); }
inline void write_dictionary(const std::string& path, const Dictionary& X, Format format) {
  write_rows(path, X.points().transpose(), format);
}

/// Parses "a,b,c" into a vector.
Vector parse_point(const std::string& text);

}  // namespace locreg::io
