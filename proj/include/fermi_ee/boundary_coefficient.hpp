#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "fermi_ee/dispersion.hpp"
#include "fermi_ee/domain.hpp"
#include "fermi_ee/entropy_kernels.hpp"
#include "fermi_ee/errors.hpp"
#include "fermi_ee/quadrature.hpp"
#include "fermi_ee/thermodynamics.hpp"

namespace fermi_ee {

/// A profile v -> g(v) in [0, 1] together with the geometry the U
/// functional needs: transition centres, a transition width, and an interval
/// [lo, hi] outside of which g is within `tail_defect` of `tail`.
struct SymbolProfile {
  std::function<double(double)> g;
  std::vector<double> knots;
  double scale = 1.0;
  double lo = 0.0;
  double hi = 0.0;
  double tail = 0.0;
  double tail_defect = 0.0;

  double operator()(double v) const { return g(v); }

  static SymbolProfile constant(double c) {
    SymbolProfile p;
    p.g = [c](double) { return c; };
    p.tail = c;
    return p;
  }

  /// g(v - c).
  SymbolProfile shifted(double c) const {
    SymbolProfile p = *this;
    p.g = [f = g, c](double v) { return f(v - c); };
    for (double& k : p.knots) k += c;
    p.lo += c;
    p.hi += c;
    return p;
  }

  /// v -> f_T(epsilon(sqrt(k^2 + v^2)) - mu) for an isotropic dispersion.
  /// The support ends where epsilon - mu exceeds tail_cut * T.
  static SymbolProfile fermi(const Dispersion& disp, double T, double mu, double k = 0.0,
                             double tail_cut = 40.0) {
    if (!(T > 0.0)) throw DomainError("boundary-coefficient", "temperature must be positive");
    SymbolProfile p;
    p.g = [disp, T, mu, k](double v) { return fermi_function(T, disp.energy(std::hypot(k, v)) - mu); };
    p.tail = 0.0;
    p.tail_defect = std::exp(-tail_cut);
    const double eps_k = disp.energy(k);
    const double top = mu + tail_cut * T;
    if (!(top > eps_k)) {
      p.tail_defect = fermi_function(T, eps_k - mu);
      p.lo = p.hi = 0.0;
      return p;
    }
    auto transverse = [&](double E) {
      const double q = disp.momentum_at(E);
      return std::sqrt(std::max(0.0, (q - k) * (q + k)));
    };
    p.hi = transverse(top);
    p.lo = -p.hi;
    double centre = 0.0;
    if (mu > eps_k) {
      centre = transverse(mu);
      p.knots = {-centre, centre};
    }
    p.scale = transverse(std::max(mu, eps_k) + T) - centre;
    if (!(p.scale > 0.0)) p.scale = p.hi;
    return p;
  }
};

struct UFunctionalResult {
  double value = 0.0;
  double error = 0.0;
  double tail_bound = 0.0;
  bool tail_warning = false;
};

namespace detail {

inline void graded_breaks(std::vector<double>& out, double centre, double scale) {
  out.push_back(centre);
  for (double m = 1.0; m <= 4096.0; m *= 8.0) {
    out.push_back(centre - m * scale);
    out.push_back(centre + m * scale);
  }
}

}  // namespace detail

/// The integrand U_alpha(g(u), g(v)) / (u - v)^2 of the U functional, set to
/// zero on the diagonal.
inline double u_functional_integrand(RenyiIndex alpha, const SymbolProfile& g, double u, double v) {
  if (u == v) return 0.0;
  const double w = u - v;
  return detail::u_alpha_impl(alpha, std::clamp(g(u), 0.0, 1.0), std::clamp(g(v), 0.0, 1.0),
                              Tolerance{1e-300, 1e-12}) /
         (w * w);
}

/// U functional
///   (1 / 8 pi^2) int du dv U_alpha(g(u), g(v)) / (u - v)^2
/// to relative accuracy tol. With w = u - v the double integral becomes
/// (1/4 pi^2) int_0^inf F(w) / w^2 dw, F(w) = int da U(g(a + w), g(a)).
/// F is even in w and O(w^2), and equals the constant
/// F_inf = 2 int U(g(s), tail) ds once w exceeds the support width W.
/// `abs_tol` optionally caps the work spent on results far below a known scale.
inline UFunctionalResult u_functional(RenyiIndex alpha, const SymbolProfile& g, double tol = 1e-8,
                                      double abs_tol = 0.0) {
  if (!(tol > 0.0) || !(abs_tol >= 0.0)) {
    throw DomainError("boundary-coefficient", "tolerance must be positive");
  }
  UFunctionalResult res;
  const double tail = g.tail;
  const double defect = std::min(g.tail_defect, 0.5);
  const double W = g.hi - g.lo;
  if (!(W > 0.0)) {
    if (defect > 0.0) res.tail_bound = renyi_entropy_function(alpha, defect);
    res.tail_warning = res.tail_bound > tol / 10.0;
    return res;
  }
  const double sigma = std::min(g.scale, W);
  const Tolerance u_tol{1e-18, std::max(tol * 1e-2, 1e-13)};
  const std::string module = "boundary-coefficient";
  const double norm = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);
  const double abs_total = abs_tol / norm;
  const double w_min = 1e-3 * sigma;
  const double per_w = abs_total / (8.0 * (1.0 + std::log(std::max(W / w_min, 1.0))));

  auto U = [&](double r, double t) {
    return detail::u_alpha_impl(alpha, std::clamp(r, 0.0, 1.0), std::clamp(t, 0.0, 1.0), u_tol);
  };

  // F(w) only matters through F(w) / w, so its absolute accuracy is tied to
  // w times the size of the whole integral (set once `reference` is known).
  double reference = 0.0;
  auto F = [&](double w) {
    // U itself is only good to u_tol.abs, which bounds what F can resolve
    const double noise = 2.0 * u_tol.abs * (W + w);
    const Tolerance ftol{std::max({tol / 8.0 * reference * w, per_w * w, noise}), tol / 4.0};
    std::vector<double> breaks = {g.lo - w, g.hi - w, g.lo, g.hi};
    for (double c : g.knots) {
      detail::graded_breaks(breaks, c, sigma);
      detail::graded_breaks(breaks, c - w, sigma);
    }
    breaks = quadrature::normalize_breaks(std::move(breaks), g.lo - w, g.hi);
    auto f = [&](double a) { return U(g(a + w), g(a)); };
    return quadrature::integrate(f, std::span<const double>(breaks), ftol, module, 20000).value;
  };

  // w > W
  std::vector<double> sbreaks = {g.lo, g.hi};
  for (double c : g.knots) detail::graded_breaks(sbreaks, c, sigma);
  sbreaks = quadrature::normalize_breaks(std::move(sbreaks), g.lo, g.hi);
  const double f_inf =
      2.0 * quadrature::integrate([&](double s) { return U(g(s), tail); },
                                  std::span<const double>(sbreaks), Tolerance{std::max(abs_total / 4.0, 2.0 * u_tol.abs) * W, tol / 4.0},
                                  module, 20000)
                .value;

  reference = std::max(f_inf / W, F(sigma) / sigma);

  // 0 < w < w_min: F(w) = c w^2 (1 + O(w^2 / sigma^2))
  const double f_min = F(w_min);

  std::vector<double> wbreaks = {w_min, W};
  for (double m = 1.0; m * sigma < W; m *= 4.0) wbreaks.push_back(m * sigma);
  for (std::size_t i = 0; i < g.knots.size(); ++i) {
    for (std::size_t j = i + 1; j < g.knots.size(); ++j) {
      const double gap = std::abs(g.knots[j] - g.knots[i]);
      for (double m : {0.0, 1.0, 4.0, 16.0}) {
        wbreaks.push_back(gap - m * sigma);
        wbreaks.push_back(gap + m * sigma);
      }
    }
  }
  wbreaks = quadrature::normalize_breaks(std::move(wbreaks), w_min, W);
  for (double& b : wbreaks) b = std::log(b);
  const auto outer = quadrature::integrate(
      [&](double s) {
        const double w = std::exp(s);
        return F(w) / w;
      },
      std::span<const double>(wbreaks), Tolerance{abs_total / 4.0, tol / 2.0}, module, 4000);

  const double total = f_min / w_min + outer.value + f_inf / W;
  res.value = norm * total;
  res.error = norm * (outer.error + tol / 4.0 * std::abs(total)) + abs_tol / 2.0;
  if (defect > 0.0) {
    // profile replaced by its tail value outside [lo, hi]
    res.tail_bound = norm * renyi_entropy_function(alpha, defect) *
                     (2.0 + 2.0 * std::log(std::max(W / w_min, 1.0)));
  }
  res.tail_warning = res.tail_bound > tol / 10.0 * std::max(res.value, 1e-300);
  return res;
}

/// Fermi-surface factor J: 2 N_{d-1}(mu) |dOmega| for isotropic dispersions;
/// for d = 1 this is (two Fermi points) x (number of endpoints).
inline double fermi_surface_factor_J(const Dispersion& disp, const Domain& dom, double mu) {
  if (disp.dimension() != dom.dimension()) {
    throw DomainError("boundary-coefficient", "dispersion and domain dimensions differ");
  }
  disp.require_isotropic("the Fermi-surface factor J");
  if (!(disp.integrated_dos(mu) > 0.0)) {
    throw NoFermiSurface("boundary-coefficient", "no Fermi surface: N(mu) = 0 for mu = " +
                                                      std::to_string(mu));
  }
  const int d = disp.dimension();
  if (d == 1) return 2.0 * dom.unit_boundary_area();
  return 2.0 * disp.with_dimension(d - 1).integrated_dos(mu) * dom.unit_boundary_area();
}

/// Leading low-temperature law (1/12) ((1 + alpha)/(2 alpha)) J ln(mu / T).
/// Empty when mu <= 0, where eta instead vanishes as T -> 0.
inline std::optional<double> eta_low_T_prediction(const Dispersion& disp, const Domain& dom,
                                                  RenyiIndex alpha, double mu, double T) {
  if (!(T > 0.0)) throw DomainError("boundary-coefficient", "temperature must be positive");
  if (!(mu > 0.0)) return std::nullopt;
  return alpha.low_temperature_factor() / 12.0 * fermi_surface_factor_J(disp, dom, mu) *
         std::log(mu / T);
}

/// Leading high-temperature exponent of eta_alpha for N(E) ~ E^nu.
/// Transverse momenta grow like T^{nu/d}, so eta ~ T^{nu (d-1)/d} at fixed mu.
/// At fixed density the fugacity z ~ T^{-nu} enters as U_alpha(z r, z t) ~ z^kappa
/// with kappa = min(alpha, 2), except kappa = 3 at alpha = 2, where the
/// quadratic term of h_2(x) = 2x - 4x^3/3 + ... vanishes.
inline double eta_high_temperature_exponent(const Dispersion& disp, RenyiIndex alpha, bool fixed_density) {
  const int d = disp.dimension();
  const double nu = disp.counting_exponent();
  const double transverse = nu * (d - 1) / d;
  if (!fixed_density) return transverse;
  const double a = alpha.value();
  const double kappa = a == 2.0 ? 3.0 : std::min(a, 2.0);
  return transverse - nu * kappa;
}

/// The same exponent with kappa = min(alpha, 2) throughout.
inline double eta_high_temperature_exponent_generic(const Dispersion& disp, RenyiIndex alpha, bool fixed_density) {
  const int d = disp.dimension();
  const double nu = disp.counting_exponent();
  const double transverse = nu * (d - 1) / d;
  return fixed_density ? transverse - nu * std::min(alpha.value(), 2.0) : transverse;
}

struct EtaResult {
  double value = 0.0;
  double error = 0.0;
  double tail_bound = 0.0;
  bool tail_warning = false;
};

/// Tail cut (in units of T) such that the neglected profile tail e^{-cut}
/// contributes below double precision through h_alpha ~ f^{min(alpha, 1)}.
inline double profile_tail_cut(RenyiIndex alpha) {
  return 38.0 / std::min(alpha.value(), 1.0);
}

/// Boundary coefficient eta_alpha(T, dOmega) at unit scale.
inline EtaResult eta_coefficient(const Dispersion& disp, const Domain& dom, RenyiIndex alpha,
                                 const ThermoPoint& point, double tol = 1e-7) {
  if (disp.dimension() != dom.dimension()) {
    throw DomainError("boundary-coefficient", "dispersion and domain dimensions differ");
  }
  disp.require_isotropic("eta");
  const double T = point.temperature();
  const double mu = point.mu();
  const double cut = profile_tail_cut(alpha);
  const int d = disp.dimension();
  const double area = dom.unit_boundary_area();
  EtaResult out;

  if (d == 1) {
    const auto r = u_functional(alpha, SymbolProfile::fermi(disp, T, mu, 0.0, cut), tol);
    out.value = area * r.value;
    out.error = area * r.error;
    out.tail_bound = area * r.tail_bound;
    out.tail_warning = r.tail_warning;
    return out;
  }

  // |dOmega| (2 pi hbar)^{1-d} omega_{d-2} int_0^inf k^{d-2} U[profile_k] dk
  const double prefactor = area * std::pow(2.0 * std::numbers::pi * disp.hbar(), 1 - d) *
                           unit_sphere_area(d - 2);
  const double k_max = disp.momentum_cutoff(mu, T, cut);
  std::vector<double> kbreaks = {0.0, k_max};
  if (mu > 0.0) {
    const double kF = disp.momentum_at(mu);
    const double dk = disp.momentum_at(mu + T) - kF;
    detail::graded_breaks(kbreaks, kF, dk);
  } else {
    const double k0 = disp.momentum_at(T);
    for (double m : {0.25, 1.0, 4.0, 16.0}) kbreaks.push_back(m * k0);
  }
  kbreaks = quadrature::normalize_breaks(std::move(kbreaks), 0.0, k_max);
  // U[profile_k] far out in k is tiny and only known to rounding level, so it
  // gets an absolute tolerance relative to the value near the thermal shell
  const double k_ref = mu > 0.0 ? disp.momentum_at(mu) : 0.0;
  const double k_shell = disp.momentum_at(std::max(mu, 0.0) + T);
  const double u_ref =
      u_functional(alpha, SymbolProfile::fermi(disp, T, mu, k_ref, cut), tol / 4.0).value;
  const double u_abs = tol / 8.0 * u_ref * std::pow(std::min(k_shell / k_max, 1.0), d - 1);
  double tail_bound = 0.0;
  auto integrand = [&](double k) {
    const auto r = u_functional(alpha, SymbolProfile::fermi(disp, T, mu, k, cut), tol / 4.0, u_abs);
    tail_bound = std::max(tail_bound, r.tail_bound);
    return std::pow(k, d - 2) * r.value;
  };
  const auto radial = quadrature::integrate(integrand, std::span<const double>(kbreaks),
                                            Tolerance{0.0, tol / 2.0}, "boundary-coefficient", 2000);
  out.value = prefactor * radial.value;
  out.error = prefactor * (radial.error + tol / 4.0 * std::abs(radial.value));
  out.tail_bound = prefactor * tail_bound * std::pow(k_max, d - 1);
  out.tail_warning = out.tail_bound > tol / 10.0 * std::max(out.value, 1e-300);
  return out;
}

}  // namespace fermi_ee
