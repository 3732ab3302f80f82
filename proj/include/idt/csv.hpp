#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace idt::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;  // 1-based source line of each row
};

/// Reads a comma-separated file.  Blank lines are skipped; the first non-blank
/// line is the header.  Throws IngestionError on I/O failure.
Table read(const std::filesystem::path& path);

/// Throws IngestionError unless the header matches `expected` exactly.
void require_header(const Table& table, const std::vector<std::string>& expected,
                    const std::filesystem::path& path);

/// Parses a finite double; nullopt for an empty field, IngestionError otherwise.
std::optional<double> parse_optional(std::string_view field, const std::filesystem::path& path, int line);
double parse_number(std::string_view field, const std::filesystem::path& path, int line);

/// Numbers in output CSVs are written with 6 significant digits.
std::string format(double value);

class Writer {
 public:
  explicit Writer(std::vector<std::string> header);
  void add_row(const std::vector<std::string>& fields);
  void add_numeric_row(const std::vector<double>& values);
  std::string str() const;
  void save(const std::filesystem::path& path) const;

 private:
  std::string buffer_;
  std::size_t columns_;
};

std::vector<std::string> split_line(std::string_view line);

}  // namespace idt::csv
