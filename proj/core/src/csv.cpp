#include "hdqp/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "hdqp/errors.hpp"

namespace hdqp::csv {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {
void write_row(std::ostream& os, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) os << ',';
    os << escape(row[i]);
  }
  os << "\r\n";
}
}  // namespace

std::string to_string(const Table& table) {
  std::ostringstream os;
  write_row(os, table.header);
  for (const auto& row : table.rows) write_row(os, row);
  return os.str();
}

void write_file(const Table& table, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path);
  os << to_string(table);
}

Table parse(const std::string& text) {
  Table table;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any_field = false;

  auto end_field = [&]() {
    row.push_back(field);
    field.clear();
    any_field = true;
  };
  auto end_row = [&]() {
    if (field.empty() && !any_field && row.empty()) return;
    end_field();
    any_field = false;
    if (table.header.empty())
      table.header = std::move(row);
    else
      table.rows.push_back(std::move(row));
    row.clear();
    row.shrink_to_fit();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_row();
    } else if (c != '\r') {
      field += c;
    }
  }
  if (!field.empty() || any_field || !row.empty()) end_row();
  if (table.header.empty()) throw Error("CSV has no header row");
  return table;
}

Table read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse(buf.str());
}

}  // namespace hdqp::csv
