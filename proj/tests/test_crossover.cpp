#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "fermi_ee/crossover.hpp"

using namespace fermi_ee;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("log sinh") {
  for (double x = 1e-8; x <= 30.0; x *= 1.7) {
    CHECK_THAT(log_sinh(x), WithinRel(std::log(std::sinh(x)), 1e-12) || WithinAbs(std::log(std::sinh(x)), 1e-12));
  }
  CHECK_THAT(log_sinh(1e6), WithinRel(1e6 - std::numbers::ln2, 1e-15));
  CHECK(std::isfinite(log_sinh(1e6)));
  CHECK_THROWS_AS(log_sinh(0.0), DomainError);
}

TEST_CASE("limits of the crossover formula") {
  for (int d : {1, 2, 3}) {
    const CrossoverParams p{0.4, 0.1, 3.0, d};
    SECTION("small argument, d = " + std::to_string(d)) {
      for (double L : {1.0, 7.0, 50.0}) {
        const double T = 1e-9 * p.L0 * p.T0 / L;
        CHECK_THAT(crossover_entropy(p, L, T), WithinRel(crossover_small_T_limit(p, L), 1e-6));
      }
    }
    SECTION("volume term, d = " + std::to_string(d)) {
      const double T = 0.5;
      const double L = 1e7;
      CHECK_THAT(crossover_entropy(p, L, T) / std::pow(L, d), WithinRel(crossover_volume_coefficient(p, T), 1e-6));
    }
    SECTION("boundary term, d = " + std::to_string(d)) {
      const double T = 0.5;
      const double L = 300.0;
      const double rest = crossover_entropy(p, L, T) - std::pow(L, d) * crossover_volume_coefficient(p, T);
      CHECK_THAT(rest / std::pow(L, d - 1), WithinRel(crossover_boundary_coefficient(p, T), 1e-6));
    }
  }
  CHECK_THROWS_AS(crossover_entropy(CrossoverParams{0.1, -1.0, 1.0, 1}, 1.0, 1.0), DomainError);
}

TEST_CASE("stated parameter choices") {
  const auto gas = Dispersion::ideal_gas(1);
  const auto dom = Domain::interval(0.0, 1.0);
  const auto p = matched_crossover_params(gas, dom, RenyiIndex(1.0), 1.0);
  CHECK_THAT(p.A_alpha, WithinRel(1.0 / 3.0, 1e-14));
  CHECK_THAT(p.L0, WithinRel(1.0 / (std::numbers::pi * std::numbers::pi), 1e-14));
  // N'(1) = 1 / (pi sqrt 2) for m = hbar = 1
  CHECK_THAT(p.T0, WithinRel(std::numbers::pi * std::sqrt(2.0), 1e-12));
  CHECK_THAT(matched_crossover_params(gas, dom, RenyiIndex(2.0), 1.0).A_alpha, WithinRel(0.25, 1e-14));
}

TEST_CASE("consistency report") {
  const auto gas = Dispersion::ideal_gas(1);
  const auto dom = Domain::interval(0.0, 1.0);
  const auto r = crossover_consistency_report(gas, dom, RenyiIndex(1.0), 1.0);
  CHECK_THAT(r.volume_ratio, WithinAbs(1.0, 0.02));
  CHECK_THAT(r.log_slope_ratio, WithinAbs(1.0, 0.02));
  CHECK(r.low_T_consistent);
  CHECK(r.high_T_deviation > 0.10);
  CHECK(r.high_T_flagged);
  CHECK_THROWS_AS(crossover_consistency_report(gas, dom, RenyiIndex(1.0), -1.0), NoFermiSurface);
}

TEST_CASE("consistency report in three dimensions") {
  const auto gas = Dispersion::ideal_gas(3);
  const Domain ball(Ball{1.0}, 3);
  const auto r = crossover_consistency_report(gas, ball, RenyiIndex(2.0), 1.0, {});
  CHECK_THAT(r.params.A_alpha, WithinRel(0.75 * 4.0 / 12.0, 1e-12));
  CHECK_THAT(r.volume_ratio, WithinAbs(1.0, 0.02));
  CHECK(r.high_T_flagged);
}
