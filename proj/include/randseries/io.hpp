#pragma once

#include <string>
#include <vector>

#include "randseries/common.hpp"

namespace randseries::io {

/// Reads a comma-separated file with a header row and exactly `columns`
/// numeric columns. Returns one vector per column.
std::vector<std::vector<double>> read_columns(const std::string& path, std::size_t columns);

/// Wide layout: first row is the time grid, each following row one trajectory.
struct WideTable {
  Vector header;
  Matrix rows;
};
WideTable read_wide(const std::string& path);

/// Shortest round-trip representation of a double.
std::string format_double(double v);

void write_columns(const std::string& path, const std::vector<std::string>& names, const std::vector<Vector>& columns);

void write_text(const std::string& path, const std::string& text);

}  // namespace randseries::io
