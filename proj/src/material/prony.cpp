#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "idt/error.hpp"
#include "idt/material.hpp"
#include "idt/numeric/nnls.hpp"

namespace idt::material {

PronySeries PronySeries::elastic(double modulus) {
  PronySeries s;
  s.instantaneous_modulus = modulus;
  s.long_term_modulus = modulus;
  s.validate();
  return s;
}

PronySeries PronySeries::from_moduli(double long_term, const std::vector<double>& moduli,
                                     const std::vector<double>& taus) {
  require(moduli.size() == taus.size(), ErrorKind::InvalidArgument, "moduli and relaxation times differ in length");
  double g0 = long_term;
  for (double m : moduli) g0 += m;
  require(g0 > 0.0, ErrorKind::InvalidArgument, "instantaneous modulus must be positive");
  PronySeries s;
  s.instantaneous_modulus = g0;
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    if (moduli[i] > 0.0) s.terms.push_back({moduli[i] / g0, taus[i]});
  }
  std::sort(s.terms.begin(), s.terms.end(), [](const PronyTerm& a, const PronyTerm& b) { return a.tau < b.tau; });
  s.long_term_modulus = g0 * (1.0 - s.sum_g());
  s.validate();
  return s;
}

double PronySeries::sum_g() const {
  double total = 0.0;
  for (const auto& t : terms) total += t.g;
  return total;
}

void PronySeries::validate() const {
  require(instantaneous_modulus > 0.0 && std::isfinite(instantaneous_modulus), ErrorKind::InvalidArgument,
          "instantaneous modulus must be positive");
  require(long_term_modulus >= 0.0, ErrorKind::InvalidArgument, "long-term modulus must be non-negative");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    require(terms[i].g > 0.0 && terms[i].g <= 1.0, ErrorKind::InvalidArgument, "Prony coefficients must lie in (0, 1]");
    require(terms[i].tau > 0.0 && std::isfinite(terms[i].tau), ErrorKind::InvalidArgument,
            "relaxation times must be positive");
    if (i > 0) {
      require(terms[i].tau > terms[i - 1].tau, ErrorKind::InvalidArgument, "relaxation times must increase strictly");
    }
  }
  const double g = sum_g();
  require(g <= 1.0 + 1e-12, ErrorKind::InvalidArgument, "Prony coefficients sum above 1");
  const double expected = instantaneous_modulus * (1.0 - g);
  require(std::abs(long_term_modulus - expected) <= 1e-9 * instantaneous_modulus, ErrorKind::InvalidArgument,
          "long-term modulus is inconsistent with the coefficients");
}

double PronySeries::relaxation(double t) const {
  double r = 1.0;
  for (const auto& term : terms) r -= term.g * (1.0 - std::exp(-t / term.tau));
  return instantaneous_modulus * r;
}

double PronySeries::storage(double omega) const {
  double s = long_term_modulus;
  for (const auto& term : terms) {
    const double wt2 = omega * omega * term.tau * term.tau;
    s += instantaneous_modulus * term.g * wt2 / (1.0 + wt2);
  }
  return s;
}

double PronySeries::loss(double omega) const {
  double l = 0.0;
  for (const auto& term : terms) {
    const double wt = omega * term.tau;
    l += instantaneous_modulus * term.g * wt / (1.0 + wt * wt);
  }
  return l;
}

double PronySeries::magnitude(double omega) const { return std::hypot(storage(omega), loss(omega)); }

double PronySeries::phase(double omega) const { return std::atan2(loss(omega), storage(omega)); }

PronySeries fit_prony(const std::vector<ComplexModulusRecord>& records, int n_terms, const PronyFitOptions& options) {
  require(n_terms >= 1, ErrorKind::InvalidArgument, "n_terms must be at least 1");
  require(!records.empty(), ErrorKind::InsufficientData, "Prony fit needs at least one record");
  double fmin = records.front().frequency;
  double fmax = fmin;
  for (const auto& r : records) {
    r.validate();
    require(r.phase_deg.has_value(), ErrorKind::InvalidArgument, "Prony fit needs phase angles");
    fmin = std::min(fmin, r.frequency);
    fmax = std::max(fmax, r.frequency);
  }
  const double two_pi = 2.0 * std::numbers::pi;
  const double log_lo = std::log10(1.0 / (two_pi * fmax)) - options.decade_padding;
  const double log_hi = std::log10(1.0 / (two_pi * fmin)) + options.decade_padding;
  std::vector<double> taus(static_cast<std::size_t>(n_terms));
  for (int i = 0; i < n_terms; ++i) {
    const double frac = n_terms == 1 ? 0.5 : static_cast<double>(i) / (n_terms - 1);
    taus[static_cast<std::size_t>(i)] = std::pow(10.0, log_lo + frac * (log_hi - log_lo));
  }

  // Unknowns: [G_inf, G_1 .. G_n]; rows: G' then G'' per record.
  const auto m = static_cast<Eigen::Index>(records.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * m, n_terms + 1);
  Eigen::VectorXd b(2 * m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto& r = records[static_cast<std::size_t>(k)];
    const double storage = storage_modulus(r);
    const double loss = loss_modulus(r);
    // Relative weighting per component; the floor keeps elastic (zero-loss) rows finite.
    const double floor = 1e-6 * r.magnitude;
    const double ws = 1.0 / std::max(storage, floor);
    const double wl = 1.0 / std::max(loss, floor);
    const double omega = two_pi * r.frequency;
    a(2 * k, 0) = ws;
    for (int i = 0; i < n_terms; ++i) {
      const double wt = omega * taus[static_cast<std::size_t>(i)];
      a(2 * k, i + 1) = ws * wt * wt / (1.0 + wt * wt);
      a(2 * k + 1, i + 1) = wl * wt / (1.0 + wt * wt);
    }
    b(2 * k) = ws * storage;
    b(2 * k + 1) = wl * loss;
  }
  const auto solution = numeric::nnls(a, b);
  if (!solution.converged) fail(ErrorKind::FitFailure, "NNLS did not converge");
  if (!(solution.x.maxCoeff() > 0.0)) fail(ErrorKind::FitFailure, "all Prony coefficients are zero");

  const double scale = solution.x.maxCoeff();
  std::vector<double> moduli;
  std::vector<double> kept_taus;
  for (int i = 0; i < n_terms; ++i) {
    const double gi = solution.x(i + 1);
    if (gi > 1e-12 * scale) {
      moduli.push_back(gi);
      kept_taus.push_back(taus[static_cast<std::size_t>(i)]);
    }
  }
  const double g_inf = solution.x(0) > 1e-12 * scale ? solution.x(0) : 0.0;
  return PronySeries::from_moduli(g_inf, moduli, kept_taus);
}

nlohmann::json to_json(const PronySeries& series) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : series.terms) terms.push_back({{"g", t.g}, {"tau_s", t.tau}});
  return {{"instantaneous_modulus_MPa", series.instantaneous_modulus},
          {"long_term_modulus_MPa", series.long_term_modulus},
          {"terms", terms}};
}

PronySeries prony_from_json(const nlohmann::json& j) {
  PronySeries s;
  s.instantaneous_modulus = j.at("instantaneous_modulus_MPa").get<double>();
  s.long_term_modulus = j.at("long_term_modulus_MPa").get<double>();
  for (const auto& t : j.at("terms")) s.terms.push_back({t.at("g").get<double>(), t.at("tau_s").get<double>()});
  s.validate();
  return s;
}

}  // namespace idt::material
