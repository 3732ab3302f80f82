#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "idt/csv.hpp"
#include "idt/error.hpp"
#include "idt/log.hpp"
#include "idt/pipeline.hpp"

namespace idt::pipeline {
namespace {

// Collects row errors so that one exception reports all of them.
class RowErrors {
 public:
  explicit RowErrors(std::filesystem::path path) : path_(std::move(path)) {}

  template <typename F>
  void guard(int line, F&& f) {
    try {
      f();
    } catch (const Error& e) {
      std::string what = e.what();
      const std::string prefix = path_.string() + ":";
      if (what.rfind(prefix, 0) != 0) what = prefix + std::to_string(line) + ": " + what;
      messages_.push_back(what);
    }
  }

  void throw_if_any() const {
    if (messages_.empty()) return;
    std::string all = std::to_string(messages_.size()) + " bad row(s), file rejected";
    for (const auto& m : messages_) all += "\n  " + m;
    fail(ErrorKind::IngestionError, all);
  }

 private:
  std::filesystem::path path_;
  std::vector<std::string> messages_;
};

void require_rows(const csv::Table& t, const std::filesystem::path& path) {
  if (t.rows.empty()) fail(ErrorKind::IngestionError, path.string() + ": no data rows");
}

std::string opt(const std::optional<double>& v) { return v ? csv::format(*v) : std::string(); }

}  // namespace

void MixtureRecord::validate() const {
  require(!group.empty(), ErrorKind::InvalidArgument, "group id is empty");
  auto pct = [](double v, const char* name) {
    require(v >= 0.0 && v <= 100.0, ErrorKind::InvalidArgument, std::string(name) + " must lie in [0, 100]");
  };
  pct(rap_pct, "rap_pct");
  pct(ac_pct, "ac_pct");
  pct(vbeff_pct, "vbeff_pct");
  pct(vma_pct, "vma_pct");
  pct(vfa_pct, "vfa_pct");
  pct(va_pct, "va_pct");
  for (const auto& [v, name] : {std::pair{passing_half_inch_pct, "passing_half_inch_pct"},
                                {passing_three_eighths_pct, "passing_three_eighths_pct"},
                                {passing_no4_pct, "passing_no4_pct"},
                                {passing_no200_pct, "passing_no200_pct"}}) {
    if (v) pct(*v, name);
  }
  require(gmb > 0.0 && gmm >= gmb, ErrorKind::InvalidArgument, "specific gravities must satisfy Gmm >= Gmb > 0");
}

std::vector<std::string> Project::groups() const {
  std::vector<std::string> g;
  for (const auto& m : mixtures) g.push_back(m.group);
  return g;
}

std::vector<MixtureRecord> read_mixtures(const std::filesystem::path& path) {
  const auto t = csv::read(path);
  csv::require_header(t, kMixtureHeader, path);
  require_rows(t, path);
  RowErrors errors(path);
  std::vector<MixtureRecord> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const int line = t.line_numbers[i];
    errors.guard(line, [&] {
      const auto& r = t.rows[i];
      auto num = [&](std::size_t k) { return csv::parse_number(r[k], path, line); };
      auto optional = [&](std::size_t k) { return csv::parse_optional(r[k], path, line); };
      MixtureRecord m{r[0], num(1), num(2), num(3), num(4), num(5), num(6), num(7), num(8),
                      optional(9), optional(10), optional(11), optional(12)};
      m.validate();
      require(seen.insert(m.group).second, ErrorKind::InvalidArgument, "duplicate group '" + m.group + "'");
      out.push_back(m);
    });
  }
  errors.throw_if_any();
  return out;
}

GroupedModuli read_grouped_moduli(const std::filesystem::path& path, bool require_phase) {
  const auto t = csv::read(path);
  csv::require_header(t, kModulusHeader, path);
  require_rows(t, path);
  RowErrors errors(path);
  GroupedModuli out;
  std::set<std::tuple<std::string, double, double>> seen;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const int line = t.line_numbers[i];
    errors.guard(line, [&] {
      const auto& r = t.rows[i];
      require(!r[0].empty(), ErrorKind::InvalidArgument, "group id is empty");
      material::ComplexModulusRecord rec;
      rec.temperature = csv::parse_number(r[1], path, line);
      rec.frequency = csv::parse_number(r[2], path, line);
      rec.magnitude = csv::parse_number(r[3], path, line);
      rec.phase_deg = csv::parse_optional(r[4], path, line);
      if (require_phase) require(rec.phase_deg.has_value(), ErrorKind::InvalidArgument, "phase_deg is required");
      rec.validate();
      require(seen.emplace(r[0], rec.temperature, rec.frequency).second, ErrorKind::InvalidArgument,
              "duplicate (group, temperature, frequency)");
      out[r[0]].push_back(rec);
    });
  }
  errors.throw_if_any();
  return out;
}

std::vector<SignalSet> read_signal_index(const std::filesystem::path& path) {
  const auto t = csv::read(path);
  csv::require_header(t, kSignalHeader, path);
  require_rows(t, path);
  RowErrors errors(path);
  const auto base = std::filesystem::absolute(path).parent_path();
  std::vector<SignalSet> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const int line = t.line_numbers[i];
    errors.guard(line, [&] {
      const auto& r = t.rows[i];
      SignalSet s;
      s.group = r[0];
      s.temperature = csv::parse_number(r[1], path, line);
      s.frequency = csv::parse_number(r[2], path, line);
      require(s.frequency > 0.0, ErrorKind::InvalidArgument, "frequency must be positive");
      s.load = base / r[3];
      s.vertical = base / r[4];
      s.horizontal = base / r[5];
      for (const auto& p : {s.load, s.vertical, s.horizontal}) {
        require(std::filesystem::is_regular_file(p), ErrorKind::InvalidArgument, "signal file not found: " + p.string());
      }
      out.push_back(s);
    });
  }
  errors.throw_if_any();
  return out;
}

namespace {

std::vector<std::string> feature_header() {
  std::vector<std::string> h(ann::kFeatureNames.begin(), ann::kFeatureNames.end());
  return h;
}

ann::FeatureVector parse_features(const std::vector<std::string>& r, const std::filesystem::path& path, int line) {
  ann::InputVector v;
  for (int k = 0; k < ann::kInputs; ++k) v[k] = csv::parse_number(r[static_cast<std::size_t>(k)], path, line);
  auto f = ann::FeatureVector::from_vector(v);
  f.validate();
  return f;
}

}  // namespace

std::vector<ann::Example> read_training_data(const std::filesystem::path& path) {
  const auto t = csv::read(path);
  auto header = feature_header();
  header.push_back("elastic_modulus_MPa");
  csv::require_header(t, header, path);
  require_rows(t, path);
  RowErrors errors(path);
  std::vector<ann::Example> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const int line = t.line_numbers[i];
    errors.guard(line, [&] {
      ann::Example e{parse_features(t.rows[i], path, line), csv::parse_number(t.rows[i][8], path, line)};
      require(e.target > 0.0, ErrorKind::InvalidArgument, "elastic modulus must be positive");
      out.push_back(e);
    });
  }
  errors.throw_if_any();
  return out;
}

std::vector<ann::FeatureVector> read_features(const std::filesystem::path& path) {
  const auto t = csv::read(path);
  csv::require_header(t, feature_header(), path);
  require_rows(t, path);
  RowErrors errors(path);
  std::vector<ann::FeatureVector> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const int line = t.line_numbers[i];
    errors.guard(line, [&] { out.push_back(parse_features(t.rows[i], path, line)); });
  }
  errors.throw_if_any();
  return out;
}

void write_mixtures(const std::vector<MixtureRecord>& mixtures, const std::filesystem::path& path) {
  csv::Writer w(kMixtureHeader);
  for (const auto& m : mixtures) {
    w.add_row({m.group, csv::format(m.rap_pct), csv::format(m.ac_pct), csv::format(m.vbeff_pct), csv::format(m.vma_pct),
               csv::format(m.vfa_pct), csv::format(m.gmb), csv::format(m.gmm), csv::format(m.va_pct),
               opt(m.passing_half_inch_pct), opt(m.passing_three_eighths_pct), opt(m.passing_no4_pct),
               opt(m.passing_no200_pct)});
  }
  w.save(path);
}

void write_grouped_moduli(const GroupedModuli& moduli, const std::filesystem::path& path) {
  csv::Writer w(kModulusHeader);
  for (const auto& [group, records] : moduli) {
    for (const auto& r : records) {
      w.add_row({group, csv::format(r.temperature), csv::format(r.frequency), csv::format(r.magnitude), opt(r.phase_deg)});
    }
  }
  w.save(path);
}

void write_training_data(const std::vector<ann::Example>& data, const std::filesystem::path& path) {
  auto header = feature_header();
  header.push_back("elastic_modulus_MPa");
  csv::Writer w(header);
  for (const auto& e : data) {
    const auto v = e.features.to_vector();
    std::vector<double> row(v.data(), v.data() + v.size());
    row.push_back(e.target);
    w.add_numeric_row(row);
  }
  w.save(path);
}

Project ingest(const ProjectConfig& config) {
  config.validate(true);
  Project p;
  p.config = config;
  p.mixtures = read_mixtures(config.mixtures);
  p.binder = read_grouped_moduli(config.binder, true);
  p.mixture_moduli = read_grouped_moduli(config.mixture_moduli, false);
  if (config.signals) p.signals = read_signal_index(*config.signals);

  std::set<std::string> groups;
  for (const auto& m : p.mixtures) groups.insert(m.group);
  auto check_groups = [&](const GroupedModuli& g, const std::filesystem::path& path) {
    for (const auto& [name, records] : g) {
      require(groups.count(name) > 0, ErrorKind::IngestionError,
              path.string() + ": group '" + name + "' has no mixture record");
    }
  };
  check_groups(p.binder, config.binder);
  check_groups(p.mixture_moduli, config.mixture_moduli);
  std::size_t n_mix = 0;
  for (const auto& [name, records] : p.mixture_moduli) n_mix += records.size();
  log::get().info("ingested {} mixtures, {} binder groups, {} mixture modulus records, {} signal sets",
                  p.mixtures.size(), p.binder.size(), n_mix, p.signals.size());
  return p;
}

std::string content_hash(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_hash(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IngestionError, "cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return content_hash(s.str());
}

}  // namespace idt::pipeline
