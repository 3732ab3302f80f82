#include "idt/csv.hpp"
#include "idt/error.hpp"
#include "idt/signal.hpp"

namespace idt::signal {

TimeSeries read_series_csv(const std::filesystem::path& path, Unit unit) {
  const csv::Table table = csv::read(path);
  csv::require_header(table, {"time_s", "value"}, path);
  if (table.rows.empty()) fail(ErrorKind::IngestionError, path.string() + " has no samples");
  std::vector<Sample> samples;
  samples.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const int line = table.line_numbers[i];
    samples.push_back({csv::parse_number(table.rows[i][0], path, line), csv::parse_number(table.rows[i][1], path, line)});
    if (i > 0 && samples[i].time <= samples[i - 1].time) {
      fail(ErrorKind::IngestionError, path.string() + ":" + std::to_string(line) + ": time is not increasing");
    }
  }
  return TimeSeries(std::move(samples), unit);
}

}  // namespace idt::signal
