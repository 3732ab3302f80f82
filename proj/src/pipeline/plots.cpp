#include <cmath>
#include <fstream>
#include <string>

#include "idt/csv.hpp"
#include "idt/error.hpp"
#include "idt/log.hpp"
#include "idt/pipeline.hpp"

namespace idt::pipeline {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Axis {
  std::string name;
  std::string unit;
  std::string scale = "linear";
};

json axis_json(const Axis& a) { return {{"name", a.name}, {"unit", a.unit}, {"scale", a.scale}}; }

class Source {
 public:
  explicit Source(const fs::path& path) : path_(path), table_(csv::read(path)) {}

  std::size_t rows() const { return table_.rows.size(); }
  const std::string& text(std::size_t row, const std::string& column) const {
    return table_.rows[row][index(column)];
  }
  double number(std::size_t row, const std::string& column) const {
    return csv::parse_number(text(row, column), path_, table_.line_numbers[row]);
  }

 private:
  std::size_t index(const std::string& column) const {
    for (std::size_t i = 0; i < table_.header.size(); ++i)
      if (table_.header[i] == column) return i;
    fail(ErrorKind::IngestionError, path_.string() + ": no column '" + column + "'");
  }

  fs::path path_;
  csv::Table table_;
};

class PlotWriter {
 public:
  PlotWriter(fs::path root, PlotSummary& summary) : root_(std::move(root)), dir_(root_ / "plots"), summary_(summary) {
    fs::create_directories(dir_);
  }

  // nullopt (with a warning) when the artifact does not exist.
  std::optional<Source> open(const std::string& relative) {
    const auto p = root_ / relative;
    if (!fs::exists(p)) {
      summary_.warnings.push_back("missing artifact " + relative + "; dependent plots skipped");
      log::get().warn("{}", summary_.warnings.back());
      return std::nullopt;
    }
    return Source(p);
  }

  json read_json(const std::string& relative) {
    std::ifstream in(root_ / relative);
    return in ? json::parse(in) : json();
  }

  void emit(const std::string& name, const csv::Writer& w, const Axis& x, const Axis& y, const std::string& source,
            const std::string& series = "", json extra = json::object()) {
    w.save(dir_ / (name + ".csv"));
    json side = {{"x", axis_json(x)}, {"y", axis_json(y)}, {"source", source}};
    if (!series.empty()) side["series"] = series;
    for (auto& [k, v] : extra.items()) side[k] = v;
    std::ofstream out(dir_ / (name + ".json"), std::ios::binary);
    out << side.dump(2) << '\n';
    files_.push_back(name + ".csv");
    files_.push_back(name + ".json");
  }

  void finish() {
    json outputs = json::array();
    for (const auto& f : files_) {
      outputs.push_back({{"file", f}, {"hash", file_hash(dir_ / f)}});
      summary_.files.push_back(dir_ / f);
    }
    std::ofstream out(dir_ / "manifest.json", std::ios::binary);
    out << json{{"stage", "plots"}, {"version", kVersion}, {"outputs", outputs}, {"warnings", summary_.warnings}}.dump(2)
        << '\n';
  }

 private:
  fs::path root_;
  fs::path dir_;
  PlotSummary& summary_;
  std::vector<std::string> files_;
};

const Axis kLogFreq{"log10 reduced frequency", "Hz", "log10"};
const Axis kLogModulus{"log10 |E*|", "MPa", "log10"};

}  // namespace

PlotSummary emit_plots(const fs::path& output_dir) {
  PlotSummary summary;
  PlotWriter pw(output_dir, summary);

  if (auto mc = pw.open("characterize/master_curves.csv")) {
    csv::Writer mix({"log10_reduced_frequency", "log10_modulus", "group"});
    csv::Writer binder({"log10_reduced_frequency", "log10_modulus", "group"});
    for (std::size_t i = 0; i < mc->rows(); ++i) {
      auto& w = mc->text(i, "source") == "mixture" ? mix : binder;
      w.add_row({mc->text(i, "log10_reduced_frequency"), mc->text(i, "log10_modulus"), mc->text(i, "group")});
    }
    pw.emit("master_curves", mix, kLogFreq, kLogModulus, "characterize/master_curves.csv", "group");
    pw.emit("binder_master_curves", binder, kLogFreq, {"log10 |G*|", "MPa", "log10"}, "characterize/master_curves.csv",
            "group");

    if (auto fe = pw.open("simulate/predicted_moduli.csv")) {
      csv::Writer overlay({"log10_reduced_frequency", "log10_modulus", "series"});
      for (std::size_t i = 0; i < mc->rows(); ++i) {
        if (mc->text(i, "source") != "mixture") continue;
        overlay.add_row({mc->text(i, "log10_reduced_frequency"), mc->text(i, "log10_modulus"), mc->text(i, "group") + "/lab"});
      }
      for (std::size_t i = 0; i < fe->rows(); ++i) {
        overlay.add_row({fe->text(i, "log10_reduced_frequency"), csv::format(std::log10(fe->number(i, "magnitude_MPa"))),
                         fe->text(i, "group") + "/fe"});
      }
      pw.emit("fe_vs_lab_master_curves", overlay, kLogFreq, kLogModulus,
              "characterize/master_curves.csv, simulate/predicted_moduli.csv", "series");
    }
  }

  if (fs::exists(output_dir / "simulate" / "manifest.json") && !fs::exists(output_dir / "simulate" / "convergence.csv")) {
    summary.warnings.push_back("no convergence study in simulate; convergence plot skipped");
  } else if (auto conv = pw.open("simulate/convergence.csv")) {
    csv::Writer w({"element_count", "relative_error", "frequency_Hz"});
    for (std::size_t i = 0; i < conv->rows(); ++i) {
      w.add_row({conv->text(i, "element_count"), conv->text(i, "relative_error"), conv->text(i, "frequency_Hz")});
    }
    pw.emit("convergence", w, {"number of elements", "", "log10"}, {"relative error vs finest mesh", "", "log10"},
            "simulate/convergence.csv", "frequency_Hz");
  }

  if (auto acc = pw.open("validate/accuracy_curve.csv")) {
    csv::Writer w({"tolerance_pct", "accuracy_pct"});
    for (std::size_t i = 0; i < acc->rows(); ++i) {
      w.add_numeric_row({100.0 * acc->number(i, "tolerance"), 100.0 * acc->number(i, "accuracy")});
    }
    pw.emit("accuracy_curve", w, {"error tolerance", "%"}, {"points within tolerance", "%"}, "validate/accuracy_curve.csv");
  }

  if (auto pairs = pw.open("validate/pairs.csv")) {
    csv::Writer scatter({"measured_MPa", "predicted_MPa", "group"});
    csv::Writer residual({"predicted_MPa", "residual_MPa", "group"});
    csv::Writer log_residual({"log10_predicted", "log10_abs_residual", "sign"});
    for (std::size_t i = 0; i < pairs->rows(); ++i) {
      const double pred = pairs->number(i, "predicted_MPa");
      const double d = pairs->number(i, "residual_MPa");
      scatter.add_row({pairs->text(i, "measured_MPa"), pairs->text(i, "predicted_MPa"), pairs->text(i, "group")});
      residual.add_row({pairs->text(i, "predicted_MPa"), pairs->text(i, "residual_MPa"), pairs->text(i, "group")});
      if (d != 0.0 && pred > 0.0) {
        log_residual.add_row({csv::format(std::log10(pred)), csv::format(std::log10(std::abs(d))), d > 0 ? "+" : "-"});
      }
    }
    pw.emit("measured_vs_predicted", scatter, {"measured |E*|", "MPa"}, {"predicted |E*|", "MPa"}, "validate/pairs.csv",
            "group");
    pw.emit("residuals", residual, {"predicted |E*|", "MPa"}, {"measured - predicted", "MPa"}, "validate/pairs.csv",
            "group");
    pw.emit("log_residuals", log_residual, {"log10 predicted |E*|", "MPa", "log10"},
            {"log10 |measured - predicted|", "MPa", "log10"}, "validate/pairs.csv", "sign",
            {{"note", "residual sign is carried in the sign column; zero residuals are omitted"}});
  }

  if (auto hist = pw.open("validate/residual_histogram.csv")) {
    csv::Writer w({"bin_centre_MPa", "count", "normal_overlay"});
    for (std::size_t i = 0; i < hist->rows(); ++i) {
      const double c = 0.5 * (hist->number(i, "bin_lower_MPa") + hist->number(i, "bin_upper_MPa"));
      w.add_row({csv::format(c), hist->text(i, "count"), hist->text(i, "normal_overlay")});
    }
    pw.emit("residual_histogram", w, {"measured - predicted", "MPa"}, {"count", ""}, "validate/residual_histogram.csv");
  }

  if (auto mean = pw.open("validate/mean_comparison.csv")) {
    csv::Writer w({"mean_MPa", "difference_MPa"});
    for (std::size_t i = 0; i < mean->rows(); ++i) w.add_row({mean->text(i, "mean_MPa"), mean->text(i, "difference_MPa")});
    const json s = pw.read_json("validate/summary.json");
    json extra = json::object();
    if (s.is_object()) {
      extra["bias_MPa"] = s.value("bias_MPa", json());
      extra["limits_of_agreement_MPa"] = s.value("limits_of_agreement_MPa", json());
    }
    pw.emit("mean_comparison", w, {"(measured + predicted) / 2", "MPa"}, {"measured - predicted", "MPa"},
            "validate/mean_comparison.csv", "", extra);
  }

  pw.finish();
  return summary;
}

}  // namespace idt::pipeline
