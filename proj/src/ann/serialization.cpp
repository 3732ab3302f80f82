#include <fstream>

#include "idt/ann.hpp"
#include "idt/error.hpp"

namespace idt::ann {
namespace {

nlohmann::json scaling_json(const Scaling& s) {
  return {{"phys_min", s.phys_min}, {"phys_max", s.phys_max}, {"net_min", s.net_min}, {"net_max", s.net_max}};
}

Scaling scaling_from(const nlohmann::json& j) {
  return {j.at("phys_min").get<double>(), j.at("phys_max").get<double>(), j.at("net_min").get<double>(),
          j.at("net_max").get<double>()};
}

}  // namespace

nlohmann::json to_json(const NetworkParameters& params) {
  params.validate();
  nlohmann::json w = nlohmann::json::array();
  for (int j = 0; j < params.hidden(); ++j) {
    nlohmann::json row = nlohmann::json::array();
    for (int i = 0; i < kInputs; ++i) row.push_back(params.input_weights(j, i));
    w.push_back(row);
  }
  nlohmann::json out_w = nlohmann::json::array();
  nlohmann::json biases = nlohmann::json::array();
  for (int j = 0; j < params.hidden(); ++j) {
    out_w.push_back(params.output_weights(j));
    biases.push_back(params.hidden_biases(j));
  }
  nlohmann::json in_scaling = nlohmann::json::array();
  for (const auto& s : params.input_scaling) in_scaling.push_back(scaling_json(s));
  nlohmann::json names = nlohmann::json::array();
  for (const char* n : kFeatureNames) names.push_back(n);
  return {{"format", "idt-ann-network"},
          {"version", 1},
          {"feature_order", names},
          {"inputs", kInputs},
          {"hidden", params.hidden()},
          {"input_weights", w},
          {"output_weights", out_w},
          {"hidden_biases", biases},
          {"output_bias", params.output_bias},
          {"input_scaling", in_scaling},
          {"output_scaling", scaling_json(params.output_scaling)}};
}

NetworkParameters network_from_json(const nlohmann::json& j) {
  try {
    require(j.at("format").get<std::string>() == "idt-ann-network", ErrorKind::InvalidArgument,
            "not a network document");
    require(j.at("inputs").get<int>() == kInputs, ErrorKind::InvalidArgument, "network must have 8 inputs");
    const int hidden = j.at("hidden").get<int>();
    NetworkParameters p = NetworkParameters::zeros(hidden);
    const auto& w = j.at("input_weights");
    require(static_cast<int>(w.size()) == hidden, ErrorKind::InvalidArgument, "input_weights needs one row per hidden unit");
    for (int r = 0; r < hidden; ++r) {
      require(w[static_cast<std::size_t>(r)].size() == static_cast<std::size_t>(kInputs), ErrorKind::InvalidArgument,
              "input_weights rows need 8 entries");
      for (int i = 0; i < kInputs; ++i) p.input_weights(r, i) = w[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)].get<double>();
    }
    const auto& ow = j.at("output_weights");
    const auto& hb = j.at("hidden_biases");
    require(static_cast<int>(ow.size()) == hidden && static_cast<int>(hb.size()) == hidden, ErrorKind::InvalidArgument,
            "output_weights and hidden_biases need one entry per hidden unit");
    for (int r = 0; r < hidden; ++r) {
      p.output_weights(r) = ow[static_cast<std::size_t>(r)].get<double>();
      p.hidden_biases(r) = hb[static_cast<std::size_t>(r)].get<double>();
    }
    p.output_bias = j.at("output_bias").get<double>();
    const auto& in = j.at("input_scaling");
    require(in.size() == static_cast<std::size_t>(kInputs), ErrorKind::InvalidArgument, "input_scaling needs 8 entries");
    for (std::size_t i = 0; i < in.size(); ++i) p.input_scaling[i] = scaling_from(in[i]);
    p.output_scaling = scaling_from(j.at("output_scaling"));
    p.validate();
    return p;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("malformed network document: ") + e.what());
  }
}

NetworkParameters load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IngestionError, "cannot open " + path.string());
  try {
    return network_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::IngestionError, path.string() + ": " + e.what());
  }
}

void save_network(const NetworkParameters& params, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) fail(ErrorKind::IngestionError, "cannot write " + path.string());
  out << to_json(params).dump(2) << '\n';
}

}  // namespace idt::ann
