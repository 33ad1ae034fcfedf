#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fermi_ee/errors.hpp"
#include "fermi_ee/quadrature.hpp"

namespace fermi_ee {

/// Order of a Renyi entropy. alpha = 1 selects the von Neumann forms.
class RenyiIndex {
 public:
  explicit RenyiIndex(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
      throw DomainError("entropy-kernels",
                        "Renyi index must be positive and finite, got " + std::to_string(alpha));
    }
  }

  double value() const noexcept { return alpha_; }
  bool is_von_neumann() const noexcept { return alpha_ == 1.0; }

  /// Low-temperature Renyi prefactor (1 + alpha) / (2 alpha).
  double low_temperature_factor() const noexcept { return (1.0 + alpha_) / (2.0 * alpha_); }

  friend bool operator==(RenyiIndex a, RenyiIndex b) { return a.alpha_ == b.alpha_; }

 private:
  double alpha_;
};

/// Eigenvalues this close outside [0, 1] are clamped instead of rejected.
inline constexpr double kDefaultClampTolerance = 1e-9;

namespace detail {

// h_alpha on (0, 1/2]; callers fold t > 1/2 onto 1 - t.
inline double renyi_entropy_half(double alpha, double t) {
  const double lt = std::log(t);
  const double lc = std::log1p(-t);
  if (alpha == 1.0) return -t * lt - (1.0 - t) * lc;
  // t^alpha + (1-t)^alpha - 1 = t (t^d - 1) + (1-t) ((1-t)^d - 1) with d = alpha - 1
  const double d = alpha - 1.0;
  const double a = (d * lt < 700.0) ? t * std::expm1(d * lt) : std::exp(alpha * lt) - t;
  const double b = (1.0 - t) * std::expm1(d * lc);
  return std::log1p(a + b) / (1.0 - alpha);
}

}  // namespace detail

/// Renyi entropy function h_alpha(t) = ln[t^alpha + (1-t)^alpha] / (1 - alpha),
/// with the binary Shannon entropy at alpha = 1. Values of t within
/// `clamp_tol` of [0, 1] are clamped; anything further out is a DomainError.
inline double renyi_entropy_function(RenyiIndex alpha, double t,
                                     double clamp_tol = kDefaultClampTolerance) {
  if (!(t >= -clamp_tol && t <= 1.0 + clamp_tol)) {
    throw DomainError("entropy-kernels",
                      "occupation " + std::to_string(t) + " outside [0,1] beyond clamp tolerance");
  }
  t = std::clamp(t, 0.0, 1.0);
  if (t > 0.5) t = 1.0 - t;  // exact for t in [1/2, 1]
  if (t == 0.0) return 0.0;
  return std::max(0.0, detail::renyi_entropy_half(alpha.value(), t));
}

/// Fermi function f_T(E) = 1 / (1 + exp(E/T)).
inline double fermi_function(double T, double E) {
  const double x = E / T;
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

/// h_alpha(f_T(E)) evaluated without forming 1 - f: uses the symmetry
/// h(f) = h(1 - f) and 1 - f_T(E) = f_T(-E).
inline double fermi_entropy(RenyiIndex alpha, double T, double E) {
  const double f = fermi_function(T, std::abs(E));
  if (f == 0.0) return 0.0;
  return std::max(0.0, detail::renyi_entropy_half(alpha.value(), f));
}

namespace detail {

inline double checked_occupation(double t) {
  if (!(t >= -kDefaultClampTolerance && t <= 1.0 + kDefaultClampTolerance)) {
    throw DomainError("entropy-kernels",
                      "occupation " + std::to_string(t) + " outside [0,1] beyond clamp tolerance");
  }
  return std::clamp(t, 0.0, 1.0);
}

// -h_alpha''(x), given x and 1 - x both to full relative accuracy.
inline double renyi_entropy_curvature(double alpha, double x, double xc) {
  if (alpha == 1.0) return 1.0 / (x * xc);
  const double lx = std::log(x);
  const double lxc = std::log(xc);
  const double d = alpha - 1.0;
  const double s = std::exp(alpha * lx) + std::exp(alpha * lxc);
  const double a = std::exp((alpha - 2.0) * lx) + std::exp((alpha - 2.0) * lxc);
  const double b = std::expm1(d * lx) - std::expm1(d * lxc);
  return alpha * a / s - alpha * alpha * b * b / (d * s * s);
}

// Away from the diagonal: the defining lambda-integral.
inline double u_alpha_chord(RenyiIndex alpha, double r, double t, Tolerance tol) {
  const double hr = renyi_entropy_function(alpha, r);
  const double ht = renyi_entropy_function(alpha, t);
  // the chord defect cancels against values of size h, which caps the
  // attainable absolute accuracy near 64 eps max h
  const double hmid = renyi_entropy_function(alpha, 0.5 * (r + t));
  tol.abs = std::max(tol.abs, 64.0 * std::numeric_limits<double>::epsilon() * std::max({hr, ht, hmid}));
  const double span = t - r;
  const double rc = 1.0 - r;
  const double tc = 1.0 - t;
  auto integrand = [&](double lam, double lamc) {
    // m = (1-lam) r + lam t and 1 - m, each formed from the side that keeps
    // it accurate; h is evaluated on the smaller of the two.
    const double m = (lam <= 0.5) ? r + lam * span : t - lamc * span;
    const double mc = (lam <= 0.5) ? rc - lam * span : tc + lamc * span;
    const double low = std::clamp(std::min(m, mc), 0.0, 0.5);
    const double hm = (low == 0.0) ? 0.0 : renyi_entropy_half(alpha.value(), low);
    const double chord = lamc * hr + lam * ht;
    return (hm - chord) / (lam * lamc);
  };
  return quadrature::TanhSinhUnit::instance().integrate(integrand, tol, "entropy-kernels").value;
}

// Near the diagonal. Integrating the chord defect against 1/(l(1-l)) in
// closed form leaves
//   U(r, t) = (t - r)^2 int_0^1 h_1(s) (-h''((1-s) r + s t)) ds,
// which has no cancellation as t -> r.
inline double u_alpha_curvature(RenyiIndex alpha, double r, double t, Tolerance tol) {
  const double span = t - r;
  const double rc = 1.0 - r;
  const double tc = 1.0 - t;
  const double scale = span * span;
  auto integrand = [&](double s, double sc) {
    const double m = (s <= 0.5) ? r + s * span : t - sc * span;
    const double mc = (s <= 0.5) ? rc - s * span : tc + sc * span;
    const double h1 = -s * std::log(s) - sc * std::log(sc);
    return h1 * renyi_entropy_curvature(alpha.value(), m, mc);
  };
  Tolerance scaled{tol.abs / scale, tol.rel};
  return scale *
         quadrature::TanhSinhUnit::instance().integrate(integrand, scaled, "entropy-kernels").value;
}

inline double u_alpha_impl(RenyiIndex alpha, double r, double t, Tolerance tol) {
  if (r == t) return 0.0;
  if (r > t) std::swap(r, t);  // U is symmetric; canonical order makes it exactly so
  const double margin = std::min(r, 1.0 - t);
  const double value = (t - r <= 0.5 * margin && margin > 1e-100)
                           ? u_alpha_curvature(alpha, r, t, tol)
                           : u_alpha_chord(alpha, r, t, tol);
  // h_alpha is concave only for alpha <= 2; beyond that U is genuinely signed
  return alpha.value() <= 2.0 ? std::max(0.0, value) : value;
}

}  // namespace detail

/// Two-point concavity integrand
///   U_alpha(r, t) = int_0^1 [h((1-l) r + l t) - (1-l) h(r) - l h(t)] / (l (1-l)) dl
/// to absolute accuracy `tol`. Exactly zero on the diagonal and exactly
/// symmetric in (r, t). Non-negative for alpha <= 2; for alpha > 2 the
/// binary Renyi function is convex near 0 and 1 and U can be negative.
inline double u_alpha(RenyiIndex alpha, double r, double t, double tol = 1e-12) {
  if (!(tol > 0.0)) throw DomainError("entropy-kernels", "u_alpha tolerance must be positive");
  return detail::u_alpha_impl(alpha, detail::checked_occupation(r), detail::checked_occupation(t),
                              Tolerance{tol, 0.0});
}

/// Variant with a mixed absolute/relative tolerance, used inside the double
/// integrals where U is needed to relative accuracy close to the diagonal.
inline double u_alpha(RenyiIndex alpha, double r, double t, Tolerance tol) {
  return detail::u_alpha_impl(alpha, detail::checked_occupation(r), detail::checked_occupation(t),
                              tol);
}

}  // namespace fermi_ee
