#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cutofflab/chain.hpp"

namespace cutofflab {

/// Chain text format: a `n=<int>` header, then `<row> <col> <value>` lines
/// in any order; `#` starts a comment and missing entries are zero.
RawMatrix parse_chain_text(std::string_view text);
/// n rows of n comma-separated values.
RawMatrix parse_chain_csv(std::string_view text);
/// Dispatches on the extension (`.csv` is dense, anything else triplets).
RawMatrix read_chain_file(const std::filesystem::path& path);

/// Writes the triplet format with 17 significant digits (exact round trip).
void write_chain_text(std::ostream& out, const Chain& chain);

/// 15 significant digits; non-finite values print as nan/inf/-inf.
std::string format_number(double v);

enum class OutputFormat { Table, Csv, JsonLines };

/// One output cell. Doubles are printed with format_number.
using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

/// Column-oriented record set that renders in any OutputFormat.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<Cell> row);
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

  void write(std::ostream& out, OutputFormat format) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

std::string render_cell(const Cell& cell);

/// Reads back what Table::write produced for Csv and JsonLines; numeric
/// cells come back as doubles, `true`/`false` as bools, empty as monostate.
Table parse_table(std::string_view text, OutputFormat format);

std::vector<double> parse_number_list(std::string_view text);

}  // namespace cutofflab
