#pragma once

// Row-oriented output: CSV with a header row, or newline-delimited JSON.
// Floats use the shortest representation that round-trips.

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace qrem::cli {

enum class Format { Csv, Json };
Format parse_format(const std::string& s);
std::string extension(Format f);

std::string format_double(double x);

// A cell: empty, integer, real, text, or a [first, last] seed range.
struct SeedRange {
  std::uint64_t first = 0;
  std::uint64_t last = 0;
};
using Cell = std::variant<std::monostate, std::int64_t, std::uint64_t, double, std::string, bool,
                          SeedRange>;

class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

  void add(std::vector<Cell> row);
  void write(std::ostream& out, Format format) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

}  // namespace qrem::cli
