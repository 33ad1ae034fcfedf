#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "fermi_ee/analysis.hpp"
#include "fermi_ee/boundary_coefficient.hpp"

using namespace fermi_ee;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const Dispersion gas1 = Dispersion::ideal_gas(1);
const Domain unit_interval = Domain::interval(0.0, 1.0);

double eta1(double alpha, double T, double tol = 1e-7) {
  return eta_coefficient(gas1, unit_interval, RenyiIndex(alpha), ThermoPoint::fixed_mu(T, 1.0), tol).value;
}

}  // namespace

TEST_CASE("U functional vanishes on constant profiles") {
  for (double c : {0.0, 0.3, 1.0}) {
    auto g = SymbolProfile::constant(c);
    g.lo = -5.0;
    g.hi = 5.0;
    CHECK(u_functional(RenyiIndex(1.0), g).value == 0.0);
  }
}

TEST_CASE("U functional is translation invariant") {
  const auto g = SymbolProfile::fermi(gas1, 0.2, 1.0);
  for (double alpha : {0.5, 1.0, 2.0}) {
    const double base = u_functional(RenyiIndex(alpha), g, 1e-8).value;
    const double moved = u_functional(RenyiIndex(alpha), g.shifted(3.7), 1e-8).value;
    CHECK_THAT(moved, WithinRel(base, 1e-7));
  }
}

TEST_CASE("U functional grows like ln(mu/T)/6 at low temperature") {
  std::vector<double> offsets;
  for (double T : {1e-2, 1e-3, 1e-4}) {
    const double u = u_functional(RenyiIndex(1.0), SymbolProfile::fermi(gas1, T, 1.0), 1e-7).value;
    offsets.push_back(u - std::log(1.0 / T) / 6.0);
  }
  CHECK_THAT(offsets[1], WithinAbs(offsets[0], 5e-3));
  CHECK_THAT(offsets[2], WithinAbs(offsets[1], 5e-3));
}

TEST_CASE("diagonal of the U functional integrand is regular") {
  for (double T : {0.1, 1.0}) {
    const auto g = SymbolProfile::fermi(gas1, T, 1.0);
    for (double alpha : {0.5, 1.0, 2.0}) {
      const double cap = 10.0 * u_alpha(RenyiIndex(alpha), 0.0, 1.0);
      for (double u : {-1.5, -1.0, 0.0, 0.7, 1.0, 2.0}) {
        const double v = u_functional_integrand(RenyiIndex(alpha), g, u, u + 1e-6);
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);
        CHECK(v < cap);
      }
    }
  }
}

TEST_CASE("eta in d = 1 is the endpoint count times U") {
  const double T = 0.1;
  const double eta = eta1(1.0, T, 1e-7);
  const double u = u_functional(RenyiIndex(1.0), SymbolProfile::fermi(gas1, T, 1.0, 0.0, profile_tail_cut(RenyiIndex(1.0))),
                                1e-8)
                       .value;
  CHECK_THAT(eta, WithinRel(2.0 * u, 1e-6));
  CHECK_THAT(eta, WithinRel(1.10256934, 1e-7));
}

TEST_CASE("eta is additive over well separated intervals") {
  const Domain two(Intervals{{{0.0, 1.0}, {5.0, 7.0}}}, 1);
  const auto pt = ThermoPoint::fixed_mu(0.3, 1.0);
  const double one = eta_coefficient(gas1, unit_interval, RenyiIndex(1.0), pt, 1e-7).value;
  const double both = eta_coefficient(gas1, two, RenyiIndex(1.0), pt, 1e-7).value;
  CHECK_THAT(both, WithinRel(2.0 * one, 1e-12));
}

TEST_CASE("eta depends on the domain only through its boundary area") {
  const double half_pi = std::numbers::pi / 2.0;
  SECTION("d = 2") {
    const auto disp = Dispersion::ideal_gas(2);
    const Domain ball(Ball{1.0}, 2);
    const Domain box(Box{{half_pi, half_pi}}, 2);
    REQUIRE_THAT(box.unit_boundary_area(), WithinRel(ball.unit_boundary_area(), 1e-15));
    const auto pt = ThermoPoint::fixed_mu(1.0, 1.0);
    const double a = eta_coefficient(disp, ball, RenyiIndex(1.0), pt, 1e-5).value;
    const double b = eta_coefficient(disp, box, RenyiIndex(1.0), pt, 1e-5).value;
    CHECK_THAT(a, WithinRel(b, 1e-5));
    CHECK(a > 0.0);
  }
  SECTION("d = 3") {
    const auto disp = Dispersion::ideal_gas(3);
    const Domain ball(Ball{1.0}, 3);
    // cube with edge e: 6 e^2 = 4 pi
    const double e = std::sqrt(4.0 * std::numbers::pi / 6.0);
    const Domain box(Box{{e, e, e}}, 3);
    const auto pt = ThermoPoint::fixed_mu(2.0, 1.0);
    const double a = eta_coefficient(disp, ball, RenyiIndex(1.0), pt, 1e-5).value;
    const double b = eta_coefficient(disp, box, RenyiIndex(1.0), pt, 1e-5).value;
    CHECK_THAT(a, WithinRel(b, 1e-5));
  }
}

TEST_CASE("eta estimate is stable under tolerance refinement") {
  const auto pt = ThermoPoint::fixed_mu(0.1, 1.0);
  for (double alpha : {0.5, 2.0}) {
    const auto coarse = eta_coefficient(gas1, unit_interval, RenyiIndex(alpha), pt, 1e-6);
    const auto fine = eta_coefficient(gas1, unit_interval, RenyiIndex(alpha), pt, 5e-7);
    CHECK(std::abs(coarse.value - fine.value) <= coarse.error);
    CHECK_FALSE(coarse.tail_warning);
  }
}

TEST_CASE("Fermi surface factor") {
  CHECK_THAT(fermi_surface_factor_J(Dispersion::ideal_gas(3), Domain(Ball{1.0}, 3), 1.0), WithinRel(4.0, 1e-14));
  CHECK(fermi_surface_factor_J(gas1, unit_interval, 1.0) == 4.0);
  CHECK(fermi_surface_factor_J(gas1, Domain(Intervals{{{0.0, 1.0}, {2.0, 3.0}}}, 1), 0.5) == 8.0);
  // d = 2 unit disc: 2 N_1(mu) 2 pi with N_1(1) = sqrt(2) / pi
  CHECK_THAT(fermi_surface_factor_J(Dispersion::ideal_gas(2), Domain(Ball{1.0}, 2), 1.0),
             WithinRel(4.0 * std::sqrt(2.0), 1e-14));
  CHECK_THROWS_AS(fermi_surface_factor_J(gas1, unit_interval, -0.5), NoFermiSurface);
  CHECK_THROWS_AS(fermi_surface_factor_J(gas1, unit_interval, 0.0), NoFermiSurface);
}

TEST_CASE("low temperature prediction") {
  CHECK_THAT(*eta_low_T_prediction(gas1, unit_interval, RenyiIndex(1.0), 1.0, std::exp(-3.0)), WithinRel(1.0, 1e-14));
  const double p1 = *eta_low_T_prediction(gas1, unit_interval, RenyiIndex(1.0), 1.0, 1e-3);
  const double p2 = *eta_low_T_prediction(gas1, unit_interval, RenyiIndex(2.0), 1.0, 1e-3);
  CHECK_THAT(p2 / p1, WithinRel(0.75, 1e-14));
  CHECK_FALSE(eta_low_T_prediction(gas1, unit_interval, RenyiIndex(1.0), -1.0, 1e-3).has_value());
}

TEST_CASE("eta follows the logarithmic law at low temperature") {
  const std::vector<double> Ts = {3e-4, 1e-3, 3e-3, 1e-2};
  SampleSeries s1{Ts, {}, "eta_1"};
  SampleSeries s2{Ts, {}, "eta_2"};
  for (double T : Ts) {
    s1.y.push_back(eta1(1.0, T, 1e-6));
    s2.y.push_back(eta1(2.0, T, 1e-6));
  }
  const auto f1 = fit_log_law(s1, 1.0);
  const auto f2 = fit_log_law(s2, 1.0);
  CHECK_THAT(f1.a, WithinRel(1.0 / 3.0, 0.03));
  CHECK_THAT(f2.a / f1.a, WithinRel(0.75, 0.03));
}

TEST_CASE("eta vanishes at low temperature below the band bottom") {
  const double warm = eta1(1.0, 0.1);
  const double cold = eta_coefficient(gas1, unit_interval, RenyiIndex(1.0), ThermoPoint::fixed_mu(0.05, -0.5), 1e-6).value;
  const double colder =
      eta_coefficient(gas1, unit_interval, RenyiIndex(1.0), ThermoPoint::fixed_mu(0.02, -0.5), 1e-6).value;
  CHECK(cold >= 0.0);
  CHECK(colder < cold);
  CHECK(colder < 1e-6 * warm);
}

TEST_CASE("high temperature exponents of eta") {
  const std::vector<double> Ts = {1e2, 1e3, 1e4};
  auto exponent = [&](double alpha, bool fixed_density) {
    SampleSeries s{Ts, {}, "eta"};
    for (double T : Ts) {
      const auto pt = fixed_density ? ThermoPoint::fixed_rho(gas1, T, 0.1) : ThermoPoint::fixed_mu(T, 1.0);
      s.y.push_back(eta_coefficient(gas1, unit_interval, RenyiIndex(alpha), pt, 1e-6).value);
    }
    return fit_power_law(s).exponent;
  };
  CHECK_THAT(exponent(1.0, false), WithinAbs(0.0, 0.05));
  CHECK_THAT(exponent(1.0, true), WithinAbs(-0.5, 0.05));
  CHECK_THAT(exponent(0.5, true), WithinAbs(-0.25, 0.05));
  // h_2(x) = 2x - 4x^3/3 + ...: no quadratic term, so U_2 ~ z^3 for a dilute gas
  CHECK_THAT(exponent(2.0, true), WithinAbs(-1.5, 0.05));
}

TEST_CASE("anisotropic dispersions are rejected in d >= 2") {
  const Dispersion aniso(AnisotropicIdealGas{{1.0, 2.0}}, 2);
  const Domain disc(Ball{1.0}, 2);
  try {
    (void)eta_coefficient(aniso, disc, RenyiIndex(1.0), ThermoPoint::fixed_mu(1.0, 1.0));
    FAIL("expected UnsupportedConfiguration");
  } catch (const UnsupportedConfiguration& e) {
    CHECK(std::string(e.what()).find("unsupported-configuration") != std::string::npos);
  }
  CHECK_THROWS_AS(fermi_surface_factor_J(aniso, disc, 1.0), UnsupportedConfiguration);
}

TEST_CASE("eta is non-negative across a parameter scan") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (double T : {0.05, 1.0, 20.0}) {
      for (double mu : {-2.0, 0.0, 1.0}) {
        const auto r = eta_coefficient(gas1, unit_interval, RenyiIndex(alpha), ThermoPoint::fixed_mu(T, mu), 1e-5);
        CHECK(r.value >= 0.0);
      }
    }
  }
}
