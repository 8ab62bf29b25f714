#include "table.hpp"

#include <charconv>
#include <cmath>

#include "qrem/error.hpp"

namespace qrem::cli {

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw InvalidArgument("format must be csv or json, not '" + s + "'");
}

std::string extension(Format f) { return f == Format::Csv ? "csv" : "ndjson"; }

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw EngineError("table row has the wrong number of cells");
  rows_.push_back(std::move(row));
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct CsvCell {
  std::string operator()(std::monostate) const { return ""; }
  std::string operator()(std::int64_t v) const { return std::to_string(v); }
  std::string operator()(std::uint64_t v) const { return std::to_string(v); }
  std::string operator()(double v) const { return format_double(v); }
  std::string operator()(const std::string& v) const { return csv_escape(v); }
  std::string operator()(bool v) const { return v ? "1" : "0"; }
  std::string operator()(const SeedRange& r) const {
    return std::to_string(r.first) + ":" + std::to_string(r.last);
  }
};

struct JsonCell {
  nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
  nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
  nlohmann::ordered_json operator()(std::uint64_t v) const { return v; }
  nlohmann::ordered_json operator()(double v) const {
    if (std::isfinite(v)) return v;
    return format_double(v);
  }
  nlohmann::ordered_json operator()(const std::string& v) const { return v; }
  nlohmann::ordered_json operator()(bool v) const { return v; }
  nlohmann::ordered_json operator()(const SeedRange& r) const { return {r.first, r.last}; }
};

}  // namespace

void Table::write(std::ostream& out, Format format) const {
  if (format == Format::Csv) {
    for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
    out << '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        out << (i ? "," : "") << std::visit(CsvCell{}, row[i]);
      }
      out << '\n';
    }
    return;
  }
  for (const auto& row : rows_) {
    // ordered_json keeps the column order of the table.
    nlohmann::ordered_json rec;
    for (std::size_t i = 0; i < row.size(); ++i) rec[columns_[i]] = std::visit(JsonCell{}, row[i]);
    out << rec.dump() << '\n';
  }
}

}  // namespace qrem::cli
