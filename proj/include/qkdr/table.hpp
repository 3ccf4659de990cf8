#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qkdr {

/// Em dash used for advantage cells below the reporting floor.
inline const std::string kDashCell = "—";

/// A rectangular table of string cells with a header row, renderable as CSV
/// or Markdown. All numeric formatting happens when cells are added, so a
/// rendered table is deterministic byte-for-byte.
struct OutputTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Append a row; its width must match the header.
  void add_row(std::vector<std::string> row);
};

enum class TableFormat { csv, markdown };

/// Probability formatting: fixed 6 decimals ("0.250000").
std::string fmt_prob(double p);

/// Count formatting: floor to a whole number ("1504").
std::string fmt_count(double value);

std::string fmt_int(std::int64_t value);

/// RFC-4180-style CSV: cells containing commas, quotes, or newlines are
/// quoted, quotes doubled. Ends each row with '\n'.
void render_csv(const OutputTable& table, std::ostream& os);

/// Pipe table with a header separator row.
void render_markdown(const OutputTable& table, std::ostream& os);

void render(const OutputTable& table, TableFormat format, std::ostream& os);

/// Inverse of render_csv; round-trips any table exactly.
OutputTable parse_csv(const std::string& text);

}  // namespace qkdr
