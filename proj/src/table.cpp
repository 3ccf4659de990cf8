#include "qkdr/table.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qkdr {

void OutputTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size()) {
    throw std::invalid_argument("OutputTable: row width " +
                                std::to_string(row.size()) +
                                " does not match header width " +
                                std::to_string(header.size()));
  }
  rows.push_back(std::move(row));
}

std::string fmt_prob(double p) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(6);
  os << p;
  return os.str();
}

std::string fmt_count(double value) {
  return std::to_string(static_cast<std::int64_t>(std::floor(value)));
}

std::string fmt_int(std::int64_t value) { return std::to_string(value); }

namespace {

bool needs_quoting(const std::string& cell) {
  return cell.find_first_of(",\"\n\r") != std::string::npos;
}

void write_csv_cell(const std::string& cell, std::ostream& os) {
  if (!needs_quoting(cell)) {
    os << cell;
    return;
  }
  os << '"';
  for (const char c : cell) {
    if (c == '"') os << '"';
    os << c;
  }
  os << '"';
}

void write_csv_row(const std::vector<std::string>& row, std::ostream& os) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i != 0) os << ',';
    write_csv_cell(row[i], os);
  }
  os << '\n';
}

}  // namespace

void render_csv(const OutputTable& table, std::ostream& os) {
  write_csv_row(table.header, os);
  for (const auto& row : table.rows) write_csv_row(row, os);
}

void render_markdown(const OutputTable& table, std::ostream& os) {
  auto write_row = [&os](const std::vector<std::string>& row) {
    os << '|';
    for (const auto& cell : row) os << ' ' << cell << " |";
    os << '\n';
  };
  write_row(table.header);
  os << '|';
  for (std::size_t i = 0; i < table.header.size(); ++i) os << "---|";
  os << '\n';
  for (const auto& row : table.rows) write_row(row);
}

void render(const OutputTable& table, TableFormat format, std::ostream& os) {
  if (format == TableFormat::csv) {
    render_csv(table, os);
  } else {
    render_markdown(table, os);
  }
}

OutputTable parse_csv(const std::string& text) {
  // Row-oriented state machine honoring quoted cells with doubled quotes.
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> row;
  std::string cell;
  bool in_quotes = false;
  bool row_has_content = false;

  const auto end_cell = [&] {
    row.push_back(std::move(cell));
    cell.clear();
  };
  const auto end_row = [&] {
    end_cell();
    grid.push_back(std::move(row));
    row.clear();
    row_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cell += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        row_has_content = true;
        break;
      case ',':
        end_cell();
        row_has_content = true;
        break;
      case '\n':
        end_row();
        break;
      case '\r':
        break;  // tolerate CRLF
      default:
        cell += c;
        row_has_content = true;
    }
  }
  if (in_quotes) throw std::invalid_argument("parse_csv: unterminated quote");
  if (row_has_content || !row.empty()) end_row();

  OutputTable table;
  if (grid.empty()) return table;
  table.header = std::move(grid.front());
  for (std::size_t r = 1; r < grid.size(); ++r) table.add_row(std::move(grid[r]));
  return table;
}

}  // namespace qkdr
