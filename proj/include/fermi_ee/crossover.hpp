#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "fermi_ee/analysis.hpp"
#include "fermi_ee/boundary_coefficient.hpp"
#include "fermi_ee/dispersion.hpp"
#include "fermi_ee/domain.hpp"
#include "fermi_ee/errors.hpp"
#include "fermi_ee/thermodynamics.hpp"

namespace fermi_ee {

/// ln sinh x for x > 0, finite for large x.
inline double log_sinh(double x) {
  if (!(x > 0.0)) throw DomainError("crossover", "ln sinh needs a positive argument");
  if (x >= 1.0) return x - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * x));
  return std::log(std::sinh(x));
}

struct CrossoverParams {
  double A_alpha = 0.0;
  double L0 = 1.0;
  double T0 = 1.0;
  int d = 1;

  void validate() const {
    if (!(A_alpha >= 0.0) || !(L0 > 0.0) || !(T0 > 0.0) || d < 1) {
      throw DomainError("crossover", "crossover parameters need A >= 0, L0 > 0, T0 > 0, d >= 1");
    }
  }
};

/// L^{d-1} A ln[(T0/T) sinh(L T / (L0 T0))].
inline double crossover_entropy(const CrossoverParams& p, double L, double T) {
  p.validate();
  if (!(L > 0.0) || !(T > 0.0)) throw DomainError("crossover", "L and T must be positive");
  const double x = L * T / (p.L0 * p.T0);
  return std::pow(L, p.d - 1) * p.A_alpha * (std::log(p.T0 / T) + log_sinh(x));
}

/// x -> 0 limit: L^{d-1} A ln(L / L0).
inline double crossover_small_T_limit(const CrossoverParams& p, double L) {
  return std::pow(L, p.d - 1) * p.A_alpha * std::log(L / p.L0);
}

/// Coefficient of L^d as L -> infinity: A T / (L0 T0).
inline double crossover_volume_coefficient(const CrossoverParams& p, double T) {
  return p.A_alpha * T / (p.L0 * p.T0);
}

/// Coefficient of L^{d-1} after subtracting the volume term: A ln(T0 / 2T).
inline double crossover_boundary_coefficient(const CrossoverParams& p, double T) {
  return p.A_alpha * std::log(p.T0 / (2.0 * T));
}

/// The parameter choice that matches the exact low-temperature results:
/// A_alpha = (1+alpha)/(24 alpha) J, T0 = 1/(N'(mu)|Omega|), L0 = 3 A_1 / pi^2.
inline CrossoverParams matched_crossover_params(const Dispersion& disp, const Domain& dom, RenyiIndex alpha,
                                              double mu) {
  const double J = fermi_surface_factor_J(disp, dom, mu);
  CrossoverParams p;
  p.d = disp.dimension();
  p.A_alpha = alpha.low_temperature_factor() / 12.0 * J;
  const double A1 = J / 12.0;
  p.L0 = 3.0 * A1 / (std::numbers::pi * std::numbers::pi);
  p.T0 = 1.0 / (disp.dos(mu) * dom.unit_volume());
  return p;
}

struct CrossoverReport {
  CrossoverParams params;
  double alpha = 1.0;
  double mu = 0.0;
  double J = 0.0;

  // volume term at low temperature
  double T_low = 0.0;
  double volume_model = 0.0;  // A T / (L0 T0)
  double volume_exact = 0.0;  // s_alpha(T) |Omega|
  double volume_ratio = 0.0;

  // ln(1/T) coefficient of the boundary term
  std::vector<double> eta_temperatures;
  std::vector<double> eta_values;
  double log_slope_model = 0.0;  // A_alpha
  double log_slope_exact = 0.0;  // fitted from eta_alpha(T)
  double log_slope_ratio = 0.0;

  // T = 0 area-law coefficient of ln L
  double zero_T_model = 0.0;  // A_alpha
  double zero_T_exact = 0.0;  // (1+alpha)/(24 alpha) J

  double low_T_tolerance = 0.02;
  bool low_T_consistent = false;

  // high temperature: volume term at T = 10 T0
  double T_high = 0.0;
  double high_T_model = 0.0;
  double high_T_exact = 0.0;
  double high_T_deviation = 0.0;
  double high_T_threshold = 0.10;
  bool high_T_flagged = false;
};

/// Compares the crossover formula, with the parameter choices above, against
/// the exact low-temperature coefficients and the exact high-T entropy.
/// eta_temperatures (relative to mu) may be left empty to skip the eta fit.
inline CrossoverReport crossover_consistency_report(const Dispersion& disp, const Domain& dom,
                                                    RenyiIndex alpha, double mu,
                                                    std::vector<double> eta_temperatures = {1e-2, 3e-3, 1e-3, 3e-4},
                                                    double tol = 1e-7) {
  if (!(mu > 0.0)) throw NoFermiSurface("crossover", "crossover report needs mu > 0");
  CrossoverReport r;
  r.alpha = alpha.value();
  r.mu = mu;
  r.J = fermi_surface_factor_J(disp, dom, mu);
  r.params = matched_crossover_params(disp, dom, alpha, mu);
  const auto& p = r.params;

  r.T_low = 1e-3 * std::min(p.T0, mu);
  r.volume_model = crossover_volume_coefficient(p, r.T_low);
  r.volume_exact = entropy_density(disp, alpha, r.T_low, mu) * dom.unit_volume();
  r.volume_ratio = r.volume_model / r.volume_exact;

  r.zero_T_model = p.A_alpha;
  r.zero_T_exact = alpha.low_temperature_factor() / 12.0 * r.J;

  bool eta_ok = true;
  if (!eta_temperatures.empty()) {
    std::sort(eta_temperatures.begin(), eta_temperatures.end());
    SampleSeries series;
    series.tag = "eta";
    for (double t : eta_temperatures) {
      const double T = t * mu;
      series.x.push_back(T);
      series.y.push_back(eta_coefficient(disp, dom, alpha, ThermoPoint::fixed_mu(T, mu), tol).value);
    }
    r.eta_temperatures = series.x;
    r.eta_values = series.y;
    r.log_slope_model = p.A_alpha;
    r.log_slope_exact = fit_log_law(series, mu).a;
    r.log_slope_ratio = r.log_slope_model / r.log_slope_exact;
    eta_ok = std::abs(r.log_slope_ratio - 1.0) <= r.low_T_tolerance;
  }
  r.low_T_consistent = std::abs(r.volume_ratio - 1.0) <= r.low_T_tolerance && eta_ok &&
                       std::abs(r.zero_T_model / r.zero_T_exact - 1.0) <= r.low_T_tolerance;

  r.T_high = 10.0 * p.T0;
  r.high_T_model = crossover_volume_coefficient(p, r.T_high);
  r.high_T_exact = entropy_density(disp, alpha, r.T_high, mu) * dom.unit_volume();
  r.high_T_deviation = std::abs(r.high_T_model - r.high_T_exact) / r.high_T_exact;
  r.high_T_flagged = r.high_T_deviation > r.high_T_threshold;
  return r;
}

}  // namespace fermi_ee
