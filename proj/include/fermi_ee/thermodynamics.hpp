#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "fermi_ee/dispersion.hpp"
#include "fermi_ee/entropy_kernels.hpp"
#include "fermi_ee/errors.hpp"
#include "fermi_ee/quadrature.hpp"

namespace fermi_ee {

/// Thermodynamic constraint held fixed in a sweep.
struct ChemicalPotential {
  double mu;
};
struct ParticleDensity {
  double rho;
};
using ThermoConstraint = std::variant<ChemicalPotential, ParticleDensity>;

/// Energy integrals are truncated at max(mu, 0) + kEnergyWindow * T, beyond
/// which f_T underflows in double precision.
inline constexpr double kEnergyWindow = 745.0;

/// Default relative accuracy of the thermodynamic energy integrals.
inline constexpr double kThermoTolerance = 1e-13;

namespace detail {

/// int_0^{Emax} F(E) dE with Emax = max(mu, 0) + window T, in the variable
/// u = sqrt(E) so that algebraic band-bottom behaviour of N and N' stays smooth.
template <class F>
Estimate energy_integral(double T, double mu, double window, F&& integrand, double rel_tol) {
  if (!(T > 0.0)) throw DomainError("thermodynamics", "temperature must be positive");
  const double top = std::max(mu, 0.0) + window * T;
  std::vector<double> energies;
  for (double k : {0.0, 1.0, 4.0, 16.0, 64.0, 256.0}) {
    energies.push_back(mu + k * T);
    energies.push_back(mu - k * T);
    energies.push_back(k * T);
  }
  std::vector<double> breaks;
  for (double e : energies) {
    if (e > 0.0 && e < top) breaks.push_back(std::sqrt(e));
  }
  breaks = quadrature::normalize_breaks(std::move(breaks), 0.0, std::sqrt(top));
  auto in_u = [&](double u) { return 2.0 * u * integrand(u * u); };
  return quadrature::integrate(in_u, std::span<const double>(breaks), Tolerance{0.0, rel_tol},
                               "thermodynamics");
}

}  // namespace detail

/// Grand-canonical pressure p(T, mu) = int dE N(E) f_T(E - mu).
inline double pressure(const Dispersion& disp, double T, double mu, double tol = kThermoTolerance) {
  return detail::energy_integral(
             T, mu, kEnergyWindow,
             [&](double E) { return disp.integrated_dos(E) * fermi_function(T, E - mu); }, tol)
      .value;
}

/// Particle density rho(T, mu) = int dE N'(E) f_T(E - mu) = dp/dmu.
inline double density(const Dispersion& disp, double T, double mu, double tol = kThermoTolerance) {
  return detail::energy_integral(
             T, mu, kEnergyWindow, [&](double E) { return disp.dos(E) * fermi_function(T, E - mu); },
             tol)
      .value;
}

/// Fermi energy: the root of N(eps_F) = rho.
inline double fermi_energy(const Dispersion& disp, double rho) {
  if (!(rho > 0.0)) throw DomainError("thermodynamics", "density must be positive");
  double hi = 1.0;
  for (int i = 0; disp.integrated_dos(hi) < rho; ++i) {
    if (i > 2000) throw BracketError("thermodynamics", "density exceeds representable range");
    hi *= 2.0;
  }
  double lo = 0.0;
  for (int it = 0; it < 300 && hi - lo > 4e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (disp.integrated_dos(mid) < rho ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Chemical potential mu(T, rho): inverts the strictly increasing map
/// mu -> rho(T, mu) by bracket expansion followed by TOMS 748.
inline double chemical_potential_from_density(const Dispersion& disp, double T, double rho,
                                              double tol = kThermoTolerance) {
  if (!(T > 0.0)) throw DomainError("thermodynamics", "temperature must be positive");
  if (!(rho > 0.0)) throw DomainError("thermodynamics", "density must be positive");
  const double eF = fermi_energy(disp, rho);
  auto excess = [&](double mu) { return density(disp, T, mu, tol) / rho - 1.0; };

  double lo = eF - T;
  double hi = eF + T;
  double f_lo = excess(lo);
  double f_hi = excess(hi);
  for (int k = 0; f_lo > 0.0; ++k) {
    if (k > 1100) throw BracketError("thermodynamics", "could not bracket mu from below");
    hi = lo;
    f_hi = f_lo;
    lo = eF - T * std::ldexp(1.0, k + 1);
    f_lo = excess(lo);
  }
  for (int k = 0; f_hi < 0.0; ++k) {
    if (k > 1100 || !std::isfinite(hi)) {
      throw BracketError("thermodynamics", "density exceeds representable densities");
    }
    lo = hi;
    f_lo = f_hi;
    hi = eF + T * std::ldexp(1.0, k + 1);
    f_hi = excess(hi);
  }
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  const double floor = 1e-15 * T;
  auto done = [floor](double a, double b) {
    return std::abs(b - a) <= 4e-16 * std::max(std::abs(a), std::abs(b)) + floor;
  };
  boost::uintmax_t iterations = 200;
  const auto root = boost::math::tools::toms748_solve(excess, lo, hi, f_lo, f_hi, done, iterations);
  return 0.5 * (root.first + root.second);
}

/// Resolved thermodynamic state: temperature plus the constraint and the
/// chemical potential it implies.
class ThermoPoint {
 public:
  static ThermoPoint fixed_mu(double T, double mu) {
    if (!(T > 0.0)) throw DomainError("thermodynamics", "temperature must be positive");
    return ThermoPoint(T, ChemicalPotential{mu}, mu, std::nullopt);
  }

  static ThermoPoint fixed_rho(const Dispersion& disp, double T, double rho,
                               double tol = kThermoTolerance) {
    const double mu = chemical_potential_from_density(disp, T, rho, tol);
    return ThermoPoint(T, ParticleDensity{rho}, mu, ::fermi_ee::fermi_energy(disp, rho));
  }

  static ThermoPoint resolve(const Dispersion& disp, double T, const ThermoConstraint& c,
                             double tol = kThermoTolerance) {
    if (const auto* m = std::get_if<ChemicalPotential>(&c)) return fixed_mu(T, m->mu);
    return fixed_rho(disp, T, std::get<ParticleDensity>(c).rho, tol);
  }

  double temperature() const { return T_; }
  double mu() const { return mu_; }
  const ThermoConstraint& constraint() const { return constraint_; }
  bool is_fixed_density() const { return std::holds_alternative<ParticleDensity>(constraint_); }
  std::optional<double> fermi_energy() const { return fermi_energy_; }

 private:
  ThermoPoint(double T, ThermoConstraint c, double mu, std::optional<double> eF)
      : T_(T), constraint_(c), mu_(mu), fermi_energy_(eF) {}

  double T_;
  ThermoConstraint constraint_;
  double mu_;
  std::optional<double> fermi_energy_;
};

/// Thermal Renyi entropy density s_alpha(T) = int dE N'(E) h_alpha(f_T(E - mu)),
/// with the quadrature error estimate.
inline Estimate entropy_density_estimate(const Dispersion& disp, RenyiIndex alpha, const ThermoPoint& point,
                                         double tol = kThermoTolerance) {
  const double T = point.temperature();
  const double mu = point.mu();
  // h_alpha(f) ~ f^min(alpha,1) in the tail, so the window widens for alpha < 1
  const double window = kEnergyWindow / std::min(alpha.value(), 1.0);
  return detail::energy_integral(
      T, mu, window, [&](double E) { return disp.dos(E) * fermi_entropy(alpha, T, E - mu); }, tol);
}

inline double entropy_density(const Dispersion& disp, RenyiIndex alpha, const ThermoPoint& point,
                              double tol = kThermoTolerance) {
  return entropy_density_estimate(disp, alpha, point, tol).value;
}

inline double entropy_density(const Dispersion& disp, RenyiIndex alpha, double T, double mu,
                              double tol = kThermoTolerance) {
  return entropy_density(disp, alpha, ThermoPoint::fixed_mu(T, mu), tol);
}

/// Sommerfeld slope (pi^2/3) N'(mu) (1 + alpha)/(2 alpha) of s_alpha(T)/T as T -> 0.
inline double sommerfeld_slope(const Dispersion& disp, RenyiIndex alpha, double mu) {
  return std::numbers::pi * std::numbers::pi / 3.0 * disp.dos(mu) * alpha.low_temperature_factor();
}

/// Low-temperature shift coefficient c in mu(T, rho) = eps_F + c T^2 + ...:
/// c = -(pi^2/6) N''(eps_F) / N'(eps_F).
inline double sommerfeld_mu_shift(const Dispersion& disp, double fermi_energy) {
  const auto n = disp.dos_derivatives(fermi_energy);
  return -std::numbers::pi * std::numbers::pi / 6.0 * n[2] / n[1];
}

/// Extrapolated T -> 0 limit of s_alpha(T)/T compared with the Sommerfeld slope.
struct LowTemperatureReport {
  double alpha = 1.0;
  std::vector<double> temperatures;
  std::vector<double> chemical_potentials;
  std::vector<double> slopes;  // s_alpha(T) / T
  double extrapolated = 0.0;   // a in a + b T^2 fitted on the three coldest points
  double curvature = 0.0;      // b
  double predicted = 0.0;
  double relative_deviation = 0.0;
  bool activated = false;  // mu < 0: no Fermi surface, s vanishes faster than any power
};

inline std::vector<double> default_low_temperature_grid(double energy_scale) {
  const double s = std::abs(energy_scale) > 0.0 ? std::abs(energy_scale) : 1.0;
  return {0.08 * s, 0.04 * s, 0.02 * s, 0.01 * s, 0.005 * s};
}

inline LowTemperatureReport low_temperature_report(const Dispersion& disp, RenyiIndex alpha,
                                                   const ThermoConstraint& constraint,
                                                   std::vector<double> temperatures = {},
                                                   double tol = kThermoTolerance) {
  double reference = 0.0;  // mu, or eps_F at fixed density
  if (const auto* m = std::get_if<ChemicalPotential>(&constraint)) {
    reference = m->mu;
  } else {
    reference = fermi_energy(disp, std::get<ParticleDensity>(constraint).rho);
  }
  if (temperatures.empty()) temperatures = default_low_temperature_grid(reference);
  std::sort(temperatures.begin(), temperatures.end(), std::greater<>());
  if (temperatures.size() < 3) {
    throw DomainError("thermodynamics", "low-temperature report needs at least three temperatures");
  }

  LowTemperatureReport rep;
  rep.alpha = alpha.value();
  rep.temperatures = temperatures;
  for (double T : temperatures) {
    const auto point = ThermoPoint::resolve(disp, T, constraint, tol);
    rep.chemical_potentials.push_back(point.mu());
    rep.slopes.push_back(entropy_density(disp, alpha, point, tol) / T);
  }

  // a + b T^2 through the three coldest points (least squares, 2 parameters)
  const std::size_t n = temperatures.size();
  double s0 = 0, s1 = 0, s2 = 0, r0 = 0, r1 = 0;
  for (std::size_t i = n - 3; i < n; ++i) {
    const double x = temperatures[i] * temperatures[i];
    s0 += 1;
    s1 += x;
    s2 += x * x;
    r0 += rep.slopes[i];
    r1 += rep.slopes[i] * x;
  }
  const double det = s0 * s2 - s1 * s1;
  rep.extrapolated = (s2 * r0 - s1 * r1) / det;
  rep.curvature = (s0 * r1 - s1 * r0) / det;

  rep.activated = reference <= 0.0;
  rep.predicted = rep.activated ? 0.0 : sommerfeld_slope(disp, alpha, reference);
  rep.relative_deviation = rep.activated
                               ? std::abs(rep.extrapolated)
                               : std::abs(rep.extrapolated - rep.predicted) / rep.predicted;
  return rep;
}

/// Leading high-temperature exponent of s_alpha: T^nu at fixed mu, and
/// T^{nu max(0, 1 - alpha)} at fixed density (alpha != 1; alpha = 1 grows
/// like ln T), with N(E) ~ E^nu (nu = d/2 for the ideal gas).
inline double entropy_density_high_temperature_exponent(const Dispersion& disp, RenyiIndex alpha,
                                                        bool fixed_density) {
  const double nu = disp.counting_exponent();
  if (!fixed_density) return nu;
  return nu * std::max(0.0, 1.0 - alpha.value());
}

}  // namespace fermi_ee
