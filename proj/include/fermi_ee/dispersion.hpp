#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "fermi_ee/errors.hpp"

namespace fermi_ee {

/// Volume of the unit ball in R^d.
inline double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

/// Surface measure of the unit (n)-sphere S^n in R^{n+1}; S^0 is two points.
inline double unit_sphere_area(int n) {
  const double m = n + 1.0;
  return 2.0 * std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m);
}

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Butland slopes).
/// Preserves monotonicity of the data, so a tabulated counting function
/// keeps a nonnegative derivative.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) {
      throw DomainError("thermodynamics", "monotone interpolation needs >= 2 matching samples");
    }
    std::vector<double> secant(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!(x_[i + 1] > x_[i])) {
        throw DomainError("thermodynamics", "interpolation abscissae must be strictly increasing");
      }
      secant[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    }
    slope_.assign(n, 0.0);
    slope_[0] = secant[0];
    slope_[n - 1] = secant[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double a = secant[i - 1];
      const double b = secant[i];
      if (a * b <= 0.0) continue;
      const double h0 = x_[i] - x_[i - 1];
      const double h1 = x_[i + 1] - x_[i];
      const double w0 = 2.0 * h1 + h0;
      const double w1 = h1 + 2.0 * h0;
      slope_[i] = (w0 + w1) / (w0 / a + w1 / b);
    }
  }

  double front() const { return x_.front(); }
  double back() const { return x_.back(); }

  /// Value and first two derivatives at x, for x inside the table.
  void eval(double x, double& value, double& d1, double& d2) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - x_.begin() - 1, 0));
    i = std::min(i, x_.size() - 2);
    const double h = x_[i + 1] - x_[i];
    const double s = (x - x_[i]) / h;
    const double y0 = y_[i], y1 = y_[i + 1];
    const double m0 = slope_[i] * h, m1 = slope_[i + 1] * h;
    const double s2 = s * s, s3 = s2 * s;
    value = (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * y1 +
            (s3 - s2) * m1;
    d1 = ((6 * s2 - 6 * s) * y0 + (3 * s2 - 4 * s + 1) * m0 + (-6 * s2 + 6 * s) * y1 +
          (3 * s2 - 2 * s) * m1) /
         h;
    d2 = ((12 * s - 6) * y0 + (6 * s - 4) * m0 + (-12 * s + 6) * y1 + (6 * s - 2) * m1) / (h * h);
  }

 private:
  std::vector<double> x_, y_, slope_;
};

/// epsilon(p) = |p|^2 / (2 m).
struct IdealGas {
  double mass = 1.0;
};

/// epsilon(p) = c |p|^gamma.
struct IsotropicPowerLaw {
  double coefficient = 1.0;
  double exponent = 2.0;
};

/// Radial samples of epsilon(|p|), strictly increasing, starting at p = 0
/// with epsilon = 0. Beyond the last sample the dispersion is continued as a
/// power law through the last two samples.
struct TabulatedIsotropic {
  std::vector<double> momenta;
  std::vector<double> energies;
};

/// epsilon(p) = sum_i p_i^2 / (2 m_i). Thermodynamics only depends on the
/// geometric-mean mass; the boundary coefficient rejects it for d >= 2
/// unless all masses coincide.
struct AnisotropicIdealGas {
  std::vector<double> masses;
};

using DispersionKind = std::variant<IdealGas, IsotropicPowerLaw, TabulatedIsotropic, AnisotropicIdealGas>;

inline std::string kind_name(const DispersionKind& kind) {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, IdealGas>) return "ideal-gas";
        if constexpr (std::is_same_v<K, IsotropicPowerLaw>) return "power-law";
        if constexpr (std::is_same_v<K, TabulatedIsotropic>) return "tabulated";
        if constexpr (std::is_same_v<K, AnisotropicIdealGas>) return "anisotropic-ideal-gas";
      },
      kind);
}

/// One-particle dispersion in d dimensions together with its integrated
/// density of states
///   N(E) = (2 pi hbar)^{-d} |{p : epsilon(p) <= E}|.
/// For the isotropic kinds this is N(E) = V_d p(E)^d / (2 pi hbar)^d with
/// p(E) the radial inverse of epsilon. Immutable after construction.
class Dispersion {
 public:
  Dispersion(DispersionKind kind, int dimension, double hbar = 1.0)
      : kind_(std::move(kind)), d_(dimension), hbar_(hbar) {
    if (d_ < 1) throw DomainError("thermodynamics", "dimension must be >= 1");
    if (!(hbar_ > 0.0)) throw DomainError("thermodynamics", "hbar must be positive");
    validate();
    phase_space_ = unit_ball_volume(d_) / std::pow(2.0 * std::numbers::pi * hbar_, d_);
  }

  static Dispersion ideal_gas(int d, double mass = 1.0, double hbar = 1.0) {
    return Dispersion(IdealGas{mass}, d, hbar);
  }

  const DispersionKind& kind() const { return kind_; }
  int dimension() const { return d_; }
  double hbar() const { return hbar_; }

  /// Same epsilon, different dimension (used for N_{d-1} in the Fermi-surface factor).
  Dispersion with_dimension(int d) const { return Dispersion(kind_, d, hbar_); }

  bool is_isotropic() const {
    if (const auto* a = std::get_if<AnisotropicIdealGas>(&kind_)) {
      return std::all_of(a->masses.begin(), a->masses.end(),
                         [&](double m) { return m == a->masses.front(); });
    }
    return true;
  }

  /// Radial dispersion epsilon(|p|). Requires an isotropic kind.
  double energy(double p) const {
    p = std::abs(p);
    return std::visit(
        [&](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, IdealGas>) {
            return p * p / (2.0 * k.mass);
          } else if constexpr (std::is_same_v<K, IsotropicPowerLaw>) {
            return k.coefficient * std::pow(p, k.exponent);
          } else if constexpr (std::is_same_v<K, TabulatedIsotropic>) {
            if (p >= k.momenta.back()) {
              return k.energies.back() * std::pow(p / k.momenta.back(), tail_exponent_);
            }
            double v, d1, d2;
            radial_.eval(p, v, d1, d2);
            return std::max(v, 0.0);
          } else {
            require_isotropic("energy");
            return p * p / (2.0 * k.masses.front());
          }
        },
        kind_);
  }

  /// Radial inverse p(E) >= 0 of epsilon; zero for E <= 0.
  double momentum_at(double E) const {
    if (!(E > 0.0)) return 0.0;
    return std::visit(
        [&](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, IdealGas>) {
            return std::sqrt(2.0 * k.mass * E);
          } else if constexpr (std::is_same_v<K, IsotropicPowerLaw>) {
            return std::pow(E / k.coefficient, 1.0 / k.exponent);
          } else if constexpr (std::is_same_v<K, TabulatedIsotropic>) {
            if (E >= k.energies.back()) {
              return k.momenta.back() * std::pow(E / k.energies.back(), 1.0 / tail_exponent_);
            }
            // epsilon is monotone on the table: bisect on the interpolant
            double lo = 0.0, hi = k.momenta.back();
            for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
              const double mid = 0.5 * (lo + hi);
              (energy(mid) < E ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
          } else {
            return std::sqrt(2.0 * geometric_mass(k) * E);
          }
        },
        kind_);
  }

  /// N(E), N'(E), N''(E).
  double integrated_dos(double E) const { return dos_derivatives(E)[0]; }
  double dos(double E) const { return dos_derivatives(E)[1]; }
  double dos_derivative(double E) const { return dos_derivatives(E)[2]; }

  std::array<double, 3> dos_derivatives(double E) const {
    if (!(E > 0.0)) return {0.0, 0.0, 0.0};
    if (const auto* t = std::get_if<TabulatedIsotropic>(&kind_)) {
      if (E < t->energies.back()) {
        double v, d1, d2;
        counting_.eval(E, v, d1, d2);
        return {std::max(v, 0.0), std::max(d1, 0.0), d2};
      }
    }
    // Pure power law N(E) = C E^nu, either exactly or on the tabulated tail.
    const double nu = counting_exponent();
    const double n0 = phase_space_ * std::pow(momentum_at(E), d_);
    return {n0, nu * n0 / E, nu * (nu - 1.0) * n0 / (E * E)};
  }

  /// Smallest |p| with f_T(epsilon(p) - mu) below exp(-decades_e), i.e.
  /// epsilon(p) >= mu + decades_e * T.
  double momentum_cutoff(double mu, double T, double decades_e) const {
    return momentum_at(std::max(mu, 0.0) + decades_e * T);
  }

  /// Exponent nu in N(E) ~ E^nu at large E.
  double counting_exponent() const {
    return std::visit(
        [&](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, IsotropicPowerLaw>) return d_ / k.exponent;
          if constexpr (std::is_same_v<K, TabulatedIsotropic>) return d_ / tail_exponent_;
          return 0.5 * d_;
        },
        kind_);
  }

  void require_isotropic(const std::string& what) const {
    if (d_ >= 2 && !is_isotropic()) {
      throw UnsupportedConfiguration(
          "boundary-coefficient",
          "unsupported-configuration: " + what + " requires an isotropic dispersion for d >= 2 (got " +
              kind_name(kind_) + " in d=" + std::to_string(d_) + ")");
    }
  }

 private:
  static double geometric_mass(const AnisotropicIdealGas& a) {
    double log_sum = 0.0;
    for (double m : a.masses) log_sum += std::log(m);
    return std::exp(log_sum / static_cast<double>(a.masses.size()));
  }

  void validate() {
    std::visit(
        [&](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, IdealGas>) {
            if (!(k.mass > 0.0)) throw DomainError("thermodynamics", "mass must be positive");
          } else if constexpr (std::is_same_v<K, IsotropicPowerLaw>) {
            if (!(k.coefficient > 0.0) || !(k.exponent > 0.0)) {
              throw DomainError("thermodynamics", "power-law coefficient and exponent must be positive");
            }
          } else if constexpr (std::is_same_v<K, TabulatedIsotropic>) {
            const auto& p = k.momenta;
            const auto& e = k.energies;
            if (p.size() < 3 || p.size() != e.size()) {
              throw DomainError("thermodynamics", "tabulated dispersion needs >= 3 (p, epsilon) samples");
            }
            if (p.front() != 0.0 || e.front() != 0.0) {
              throw DomainError("thermodynamics", "tabulated dispersion must start at epsilon(0) = 0");
            }
            for (std::size_t i = 1; i < p.size(); ++i) {
              if (!(p[i] > p[i - 1]) || !(e[i] > e[i - 1])) {
                throw DomainError("thermodynamics",
                                  "tabulated dispersion must be strictly increasing in |p|");
              }
            }
            const std::size_t n = p.size();
            tail_exponent_ = std::log(e[n - 1] / e[n - 2]) / std::log(p[n - 1] / p[n - 2]);
            radial_ = MonotoneCubic(p, e);
            std::vector<double> counts(n);
            const double c = unit_ball_volume(d_) / std::pow(2.0 * std::numbers::pi * hbar_, d_);
            for (std::size_t i = 0; i < n; ++i) counts[i] = c * std::pow(p[i], d_);
            counting_ = MonotoneCubic(e, counts);
          } else {
            if (static_cast<int>(k.masses.size()) != d_) {
              throw DomainError("thermodynamics", "anisotropic ideal gas needs one mass per axis");
            }
            for (double m : k.masses) {
              if (!(m > 0.0)) throw DomainError("thermodynamics", "masses must be positive");
            }
          }
        },
        kind_);
  }

  DispersionKind kind_;
  int d_;
  double hbar_;
  double phase_space_ = 1.0;
  double tail_exponent_ = 2.0;
  MonotoneCubic radial_;
  MonotoneCubic counting_;
};

}  // namespace fermi_ee
