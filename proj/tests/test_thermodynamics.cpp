#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fermi_ee/thermodynamics.hpp"

using namespace fermi_ee;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double kPi = std::numbers::pi;

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("ideal-gas integrated density of states", "[thermodynamics]") {
  CHECK_THAT(Dispersion::ideal_gas(1).integrated_dos(1.0), WithinRel(std::sqrt(2.0) / kPi, 1e-14));
  CHECK_THAT(Dispersion::ideal_gas(3).integrated_dos(1.0),
             WithinRel(std::pow(2.0 * kPi, -1.5) / std::tgamma(2.5), 1e-14));
  CHECK_THAT(Dispersion::ideal_gas(3).integrated_dos(1.0), WithinAbs(0.0477633, 1e-7));
  for (int d = 1; d <= 3; ++d) {
    CHECK(Dispersion::ideal_gas(d).integrated_dos(-1.0) == 0.0);
    CHECK(Dispersion::ideal_gas(d).dos(-1.0) == 0.0);
  }
  // N' by central differences
  const auto disp = Dispersion::ideal_gas(3, 1.7, 0.8);
  for (double E : {0.3, 1.0, 4.0}) {
    const double h = 1e-5 * E;
    const double fd = (disp.integrated_dos(E + h) - disp.integrated_dos(E - h)) / (2 * h);
    CHECK_THAT(disp.dos(E), WithinRel(fd, 1e-8));
    const double fd2 = (disp.dos(E + h) - disp.dos(E - h)) / (2 * h);
    CHECK_THAT(disp.dos_derivative(E), WithinRel(fd2, 1e-7));
  }
}

TEST_CASE("d=3 density of states matches a Monte-Carlo ball volume", "[thermodynamics]") {
  // Count momenta with |p|^2 / 2 <= 1 inside the cube [-2, 2]^3.
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const int samples = 400000;
  int inside = 0;
  for (int i = 0; i < samples; ++i) {
    const double x = u(rng), y = u(rng), z = u(rng);
    if (0.5 * (x * x + y * y + z * z) <= 1.0) ++inside;
  }
  const double frac = static_cast<double>(inside) / samples;
  const double volume = 64.0 * frac;
  const double sigma = 64.0 * std::sqrt(frac * (1 - frac) / samples);
  const double mc = volume / std::pow(2.0 * kPi, 3);
  CHECK_THAT(Dispersion::ideal_gas(3).integrated_dos(1.0), WithinAbs(mc, 4.0 * sigma / std::pow(2 * kPi, 3)));
}

TEST_CASE("power-law and tabulated dispersions agree with the ideal gas", "[thermodynamics]") {
  const auto ideal = Dispersion::ideal_gas(2);
  const Dispersion power(IsotropicPowerLaw{0.5, 2.0}, 2);
  std::vector<double> p, e;
  for (int i = 0; i <= 400; ++i) {
    p.push_back(0.02 * i);
    e.push_back(0.5 * p.back() * p.back());
  }
  const Dispersion table(TabulatedIsotropic{p, e}, 2);
  for (double E : {0.1, 1.0, 3.0, 40.0}) {
    CHECK_THAT(power.integrated_dos(E), WithinRel(ideal.integrated_dos(E), 1e-14));
    CHECK_THAT(table.integrated_dos(E), WithinRel(ideal.integrated_dos(E), 1e-6));
    CHECK_THAT(table.dos(E), WithinRel(ideal.dos(E), 1e-3));
  }
  CHECK_THAT(table.energy(1.234), WithinRel(ideal.energy(1.234), 1e-5));
  CHECK_THAT(table.momentum_at(2.0), WithinRel(2.0, 1e-6));
  CHECK_THROWS_AS(Dispersion(TabulatedIsotropic{{0, 1}, {0, 1}}, 1), DomainError);
}

TEST_CASE("pressure limits", "[thermodynamics]") {
  const auto disp = Dispersion::ideal_gas(1);
  // T -> 0: int_0^mu N(E) dE
  CHECK_THAT(pressure(disp, 1e-6, 1.0), WithinAbs(2.0 / 3.0 * std::sqrt(2.0) / kPi, 1e-4));
  // Maxwell-Boltzmann: e^mu int N(E) e^-E dE = e^mu / sqrt(2 pi)
  CHECK_THAT(pressure(disp, 1.0, -12.0), WithinRel(std::exp(-12.0) / std::sqrt(2 * kPi), 1e-4));
  CHECK(pressure(disp, 1.0, -800.0) == 0.0);
}

TEST_CASE("pressure is convex and nondecreasing in mu", "[thermodynamics][property]") {
  for (int d : {1, 2, 3}) {
    const auto disp = Dispersion::ideal_gas(d);
    for (double T : {0.1, 1.0}) {
      const double h = 0.05;
      std::vector<double> p;
      for (double mu = -2.0; mu <= 2.0 + 1e-12; mu += h) p.push_back(pressure(disp, T, mu));
      for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        CHECK(p[i] >= p[i - 1]);
        CHECK(p[i + 1] - 2 * p[i] + p[i - 1] >= -1e-12 * p[i]);
      }
      // dp/dmu = rho
      const double fd = (pressure(disp, T, 0.5 + 1e-4) - pressure(disp, T, 0.5 - 1e-4)) / 2e-4;
      CHECK_THAT(density(disp, T, 0.5), WithinRel(fd, 1e-6));
    }
  }
}

TEST_CASE("entropy density obeys the pressure identity", "[thermodynamics]") {
  for (int d : {1, 3}) {
    const auto disp = Dispersion::ideal_gas(d);
    for (double a : {0.5, 2.0, 3.0}) {
      for (double T : {0.1, 1.0, 10.0}) {
        for (double mu : {-1.0, 0.0, 1.0}) {
          const double s = entropy_density(disp, RenyiIndex(a), T, mu);
          const double identity = a / ((a - 1) * T) * (pressure(disp, T, mu) - pressure(disp, T / a, mu));
          CHECK(s >= 0.0);
          CHECK_THAT(s, WithinRel(identity, 1e-9));
        }
      }
    }
  }
  const auto disp = Dispersion::ideal_gas(1);
  for (double mu : {-1.0, 1.0}) {
    const double s2 = entropy_density(disp, RenyiIndex(2.0), 0.7, mu);
    CHECK_THAT(s2, WithinRel(2.0 / 0.7 * (pressure(disp, 0.7, mu) - pressure(disp, 0.35, mu)), 1e-8));
  }
}

TEST_CASE("von Neumann entropy density equals (p + E - mu rho) / T", "[thermodynamics]") {
  const auto disp = Dispersion::ideal_gas(1);
  const double T = 0.6, mu = 0.4;
  // energy density by its own energy integral
  const double energy = detail::energy_integral(
                            T, mu, kEnergyWindow,
                            [&](double E) { return E * disp.dos(E) * fermi_function(T, E - mu); }, 1e-13)
                            .value;
  const double s = entropy_density(disp, RenyiIndex(1.0), T, mu);
  CHECK_THAT(s, WithinRel((pressure(disp, T, mu) + energy - mu * density(disp, T, mu)) / T, 1e-10));
}

TEST_CASE("Sommerfeld slope of s/T", "[thermodynamics]") {
  const auto disp = Dispersion::ideal_gas(1);
  const double predicted = kPi * kPi / 3.0 / (kPi * std::sqrt(2.0));
  CHECK_THAT(predicted, WithinAbs(0.740480, 5e-7));
  CHECK_THAT(sommerfeld_slope(disp, RenyiIndex(1.0), 1.0), WithinRel(predicted, 1e-14));
  CHECK_THAT(entropy_density(disp, RenyiIndex(1.0), 1e-3, 1.0) / 1e-3, WithinRel(0.740480, 1e-3));

  const auto r1 = low_temperature_report(disp, RenyiIndex(1.0), ChemicalPotential{1.0});
  CHECK_THAT(r1.extrapolated, WithinRel(0.740480, 5e-3));
  CHECK(r1.relative_deviation < 1e-4);
  const auto r2 = low_temperature_report(disp, RenyiIndex(2.0), ChemicalPotential{1.0});
  CHECK_THAT(r2.extrapolated, WithinRel(0.555360, 5e-3));
  CHECK_THAT(r2.extrapolated / r1.extrapolated, WithinRel(0.75, 1e-4));

  const auto activated = low_temperature_report(disp, RenyiIndex(1.0), ChemicalPotential{-1.0});
  CHECK(activated.activated);
  // s(T)/T at T = 0.005 is ~ exp(-200)
  CHECK(activated.slopes.back() < 1e-80);
  CHECK(activated.slopes.back() < activated.slopes.front() * 1e-40);
}

TEST_CASE("Sommerfeld slope at fixed density in d=3", "[thermodynamics]") {
  const auto disp = Dispersion::ideal_gas(3);
  const auto rep = low_temperature_report(disp, RenyiIndex(1.0), ParticleDensity{0.05});
  CHECK(rep.relative_deviation < 5e-3);
}

TEST_CASE("chemical potential inversion", "[thermodynamics]") {
  const auto disp = Dispersion::ideal_gas(1);
  CHECK_THAT(fermi_energy(disp, 1.0), WithinRel(kPi * kPi / 2.0, 1e-14));
  CHECK_THAT(chemical_potential_from_density(disp, 1e-6, 1.0), WithinAbs(kPi * kPi / 2.0, 1e-4));

  for (double T : {0.01, 0.1, 1.0, 10.0, 100.0}) {
    for (double rho : {0.01, 0.1, 1.0, 3.0, 10.0}) {
      const double mu = chemical_potential_from_density(disp, T, rho);
      CHECK_THAT(density(disp, T, mu), WithinRel(rho, 1e-10));
    }
  }
  const auto point = ThermoPoint::fixed_rho(disp, 0.5, 2.0);
  CHECK(point.is_fixed_density());
  CHECK_THAT(density(disp, 0.5, point.mu()), WithinRel(2.0, 1e-10));
  CHECK_THAT(*point.fermi_energy(), WithinRel(2.0 * kPi * kPi, 1e-12));
  CHECK_THROWS_AS(chemical_potential_from_density(disp, 1.0, -1.0), DomainError);
}

TEST_CASE("low-temperature shift of mu at fixed density", "[thermodynamics]") {
  // d = 1, rho = 1: eps_F = pi^2/2, N''/N' = -1/(2 eps_F), c = pi^2/(12 eps_F) = 1/6
  const auto disp = Dispersion::ideal_gas(1);
  const double eF = fermi_energy(disp, 1.0);
  const double c = sommerfeld_mu_shift(disp, eF);
  CHECK_THAT(c, WithinRel(1.0 / 6.0, 1e-12));
  // fit mu - eF = c T^2 + c4 T^4
  std::vector<double> T = {1e-2, 5e-3, 2.5e-3};
  double s22 = 0, s24 = 0, s44 = 0, r2 = 0, r4 = 0;
  for (double t : T) {
    const double y = chemical_potential_from_density(disp, t, 1.0) - eF;
    const double x2 = t * t, x4 = x2 * x2;
    s22 += x2 * x2;
    s24 += x2 * x4;
    s44 += x4 * x4;
    r2 += x2 * y;
    r4 += x4 * y;
  }
  const double fitted = (s44 * r2 - s24 * r4) / (s22 * s44 - s24 * s24);
  CHECK_THAT(fitted, WithinRel(c, 2e-2));
}

TEST_CASE("high-temperature exponents of the entropy density", "[thermodynamics]") {
  const std::vector<double> temps = {1e2, 3e2, 1e3, 3e3, 1e4};
  for (int d : {1, 2, 3}) {
    const auto disp = Dispersion::ideal_gas(d);
    std::vector<double> s;
    for (double T : temps) s.push_back(entropy_density(disp, RenyiIndex(1.0), T, 1.0));
    CHECK_THAT(loglog_slope(temps, s), WithinAbs(0.5 * d, 0.05));
    CHECK(entropy_density_high_temperature_exponent(disp, RenyiIndex(1.0), false) == 0.5 * d);
  }
  for (int d : {1, 3}) {
    const auto disp = Dispersion::ideal_gas(d);
    for (double a : {0.5, 2.0}) {
      std::vector<double> s;
      for (double T : temps) {
        s.push_back(entropy_density(disp, RenyiIndex(a), ThermoPoint::fixed_rho(disp, T, 0.1)));
      }
      const double expected = entropy_density_high_temperature_exponent(disp, RenyiIndex(a), true);
      CHECK_THAT(expected, WithinAbs(0.5 * d * std::max(0.0, 1.0 - a), 1e-15));
      CHECK_THAT(loglog_slope(temps, s), WithinAbs(expected, 0.05));
    }
  }
}

TEST_CASE("von Neumann entropy at fixed density grows like ln T", "[thermodynamics]") {
  for (int d : {1, 3}) {
    const auto disp = Dispersion::ideal_gas(d);
    const double rho = 0.1;
    auto s = [&](double T) {
      return entropy_density(disp, RenyiIndex(1.0), ThermoPoint::fixed_rho(disp, T, rho));
    };
    const double ref = rho * 0.5 * d * std::log(10.0);
    for (double T : {1e2, 1e3}) {
      CHECK_THAT(s(10 * T) - s(T), WithinRel(ref, 2e-2));
    }
  }
}
