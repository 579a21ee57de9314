#include "randseries/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace randseries::io {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_field(const std::string& field, const std::string& path, std::size_t row, std::size_t col) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  const auto res = std::from_chars(field.data(), end, v);
  if (field.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
    throw ConfigError(path + ": row " + std::to_string(row) + ", column " + std::to_string(col + 1) +
                      ": not a finite number '" + field + "'");
  }
  return v;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open data file '" + path + "'");
  return in;
}

}  // namespace

std::vector<std::vector<double>> read_columns(const std::string& path, std::size_t columns) {
  auto in = open(path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path + ": empty file, header row required");
  if (split_line(line).size() != columns) {
    throw ConfigError(path + ": header must name " + std::to_string(columns) + " column(s)");
  }
  std::vector<std::vector<double>> out(columns);
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_line(line);
    if (fields.size() != columns) {
      throw ConfigError(path + ": row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                        " fields, expected " + std::to_string(columns));
    }
    for (std::size_t c = 0; c < columns; ++c) out[c].push_back(parse_field(fields[c], path, row, c));
  }
  return out;
}

WideTable read_wide(const std::string& path) {
  auto in = open(path);
  std::string line;
  std::vector<std::vector<double>> rows;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_line(line);
    std::vector<double> values;
    for (std::size_t c = 0; c < fields.size(); ++c) values.push_back(parse_field(fields[c], path, row, c));
    if (!rows.empty() && values.size() != rows.front().size()) {
      throw ConfigError(path + ": row " + std::to_string(row) + " length differs from the time grid row");
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ConfigError(path + ": empty file, time grid row required");
  WideTable table;
  const auto T = static_cast<Eigen::Index>(rows.front().size());
  table.header = Eigen::Map<const Vector>(rows.front().data(), T);
  table.rows.resize(static_cast<Eigen::Index>(rows.size() - 1), T);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    table.rows.row(static_cast<Eigen::Index>(r - 1)) = Eigen::Map<const Vector>(rows[r].data(), T).transpose();
  }
  return table;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_columns(const std::string& path, const std::vector<std::string>& names, const std::vector<Vector>& columns) {
  std::ostringstream os;
  for (std::size_t c = 0; c < names.size(); ++c) os << (c ? "," : "") << names[c];
  os << '\n';
  const Eigen::Index rows = columns.empty() ? 0 : columns.front().size();
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << format_double(columns[c][r]);
    os << '\n';
  }
  write_text(path, os.str());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  out << text;
  if (!out) throw ConfigError("failed writing output file '" + path + "'");
}

}  // namespace randseries::io
