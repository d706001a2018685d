#pragma once

#include <string>
#include <vector>

namespace hdqp::csv {

/// RFC-4180 style table: mandatory header row, comma separated, fields
/// quoted only when needed, floats printed with 17 significant digits.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string format_double(double v);

std::string escape(const std::string& field);

void write_file(const Table& table, const std::string& path);
std::string to_string(const Table& table);

Table read_file(const std::string& path);
Table parse(const std::string& text);

}  // namespace hdqp::csv
