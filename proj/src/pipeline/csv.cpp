#include "idt/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "idt/error.hpp"

namespace idt::csv {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string where(const std::filesystem::path& path, int line) {
  return path.string() + ":" + std::to_string(line);
}

}  // namespace

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    const std::string_view field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    out.emplace_back(trim(field));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Table read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IngestionError, "cannot open " + path.string());
  Table table;
  std::string line;
  int number = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    auto fields = split_line(line);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    table.rows.push_back(std::move(fields));
    table.line_numbers.push_back(number);
  }
  if (!have_header) fail(ErrorKind::IngestionError, path.string() + " is empty");
  return table;
}

void require_header(const Table& table, const std::vector<std::string>& expected,
                    const std::filesystem::path& path) {
  if (table.header != expected) {
    std::string want;
    for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
    fail(ErrorKind::IngestionError, path.string() + ":1: header must be '" + want + "'");
  }
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (table.rows[i].size() != expected.size()) {
      fail(ErrorKind::IngestionError, where(path, table.line_numbers[i]) + ": expected " +
                                          std::to_string(expected.size()) + " fields, found " +
                                          std::to_string(table.rows[i].size()));
    }
  }
}

std::optional<double> parse_optional(std::string_view field, const std::filesystem::path& path, int line) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    fail(ErrorKind::IngestionError, where(path, line) + ": not a number: '" + std::string(field) + "'");
  }
  return value;
}

double parse_number(std::string_view field, const std::filesystem::path& path, int line) {
  const auto v = parse_optional(field, path, line);
  if (!v) fail(ErrorKind::IngestionError, where(path, line) + ": missing value");
  return *v;
}

std::string format(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

Writer::Writer(std::vector<std::string> header) : columns_(header.size()) {
  add_row(header);
}

void Writer::add_row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) fail(ErrorKind::InvalidArgument, "CSV row width mismatch");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += fields[i];
  }
  buffer_ += '\n';
}

void Writer::add_numeric_row(const std::vector<double>& values) {
  std::vector<std::string> fields;
  fields.reserve(values.size());
  for (double v : values) fields.push_back(format(v));
  add_row(fields);
}

std::string Writer::str() const { return buffer_; }

void Writer::save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::IngestionError, "cannot write " + path.string());
  out << buffer_;
}

}  // namespace idt::csv
