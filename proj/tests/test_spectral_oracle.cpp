#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "fermi_ee/boundary_coefficient.hpp"
#include "fermi_ee/spectral_oracle.hpp"

using namespace fermi_ee;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const Dispersion gas = Dispersion::ideal_gas(1);
const Domain unit_interval = Domain::interval(0.0, 1.0);
}  // namespace

TEST_CASE("kernel diagonal equals the particle density") {
  for (double T : {0.05, 0.5, 2.0}) {
    for (double mu : {-1.0, 0.0, 1.0}) {
      const double rho = density(gas, T, mu);
      CHECK_THAT(kernel_value(gas, T, mu, 0.0), WithinRel(rho, 1e-10));
      const auto K = build_reduced_kernel(gas, ThermoPoint::fixed_mu(T, mu), unit_interval, 3.0);
      CHECK_THAT(K.kernel(0.4, 0.4), WithinRel(rho, 1e-10));
    }
  }
}

TEST_CASE("quadrature kernel agrees with the direct oscillatory integral") {
  const auto K = build_reduced_kernel(gas, ThermoPoint::fixed_mu(0.1, 1.0), unit_interval, 20.0);
  for (double r : {0.3, 1.7, 5.0, 12.5, 19.0}) {
    CHECK_THAT(K.kernel(r, 0.0), WithinAbs(kernel_value(gas, 0.1, 1.0, r), 1e-11));
  }
}

TEST_CASE("kernel matrix is symmetric") {
  const auto K = build_reduced_kernel(gas, ThermoPoint::fixed_mu(0.5, 1.0), unit_interval, 5.0);
  const auto A = K.matrix();
  const double scale = A.cwiseAbs().maxCoeff();
  CHECK((A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * scale);
  CHECK(K.kernel(0.2, 3.1) == K.kernel(3.1, 0.2));
}

TEST_CASE("kernel decays at T = 1") {
  for (double r : {40.5, 45.0, 60.0, 100.0}) {
    CHECK(std::abs(kernel_value(gas, 1.0, 1.0, r)) < 1e-12);
  }
  CHECK(std::abs(kernel_value(gas, 1.0, 1.0, 2.0)) > 1e-3);
}

TEST_CASE("eigenvalues lie in [0, 1] up to rounding") {
  for (double factor : {1.0, 2.0, 4.0}) {
    const auto pt = ThermoPoint::fixed_mu(0.1, 1.0);
    const double n = factor * default_nodes_per_length(gas, 0.1, 1.0);
    const auto K = build_reduced_kernel(gas, pt, unit_interval, 10.0, n);
    CHECK(K.eigenvalues().front() <= 1.0 + 1e-9);
    CHECK(K.eigenvalues().back() >= -1e-9);
  }
}

TEST_CASE("trace identity") {
  for (double T : {0.05, 0.5}) {
    const auto pt = ThermoPoint::fixed_mu(T, 1.0);
    const auto K = build_reduced_kernel(gas, pt, unit_interval, 20.0);
    double sum = 0.0;
    for (double l : K.eigenvalues()) sum += l;
    const double expected = density(gas, T, 1.0) * 20.0;
    CHECK_THAT(sum, WithinRel(expected, 1e-8));
    CHECK_THAT(K.trace(), WithinRel(expected, 1e-8));
  }
}

TEST_CASE("Nystrom convergence under doubling") {
  for (double T : {0.05, 0.5}) {
    const auto pt = ThermoPoint::fixed_mu(T, 1.0);
    const double n = default_nodes_per_length(gas, T, 1.0);
    const auto K1 = build_reduced_kernel(gas, pt, unit_interval, 10.0, n);
    const auto K2 = build_reduced_kernel(gas, pt, unit_interval, 10.0, 2.0 * n);
    for (double alpha : {0.5, 1.0, 2.0}) {
      CHECK_THAT(local_renyi_entropy(K2, RenyiIndex(alpha)), WithinRel(local_renyi_entropy(K1, RenyiIndex(alpha)), 1e-6));
    }
  }
}

TEST_CASE("Renyi entropies are ordered in alpha") {
  const auto K = build_reduced_kernel(gas, ThermoPoint::fixed_mu(0.2, 1.0), unit_interval, 8.0);
  CHECK(local_renyi_entropy(K, RenyiIndex(2.0)) <= local_renyi_entropy(K, RenyiIndex(1.0)));
  CHECK(local_renyi_entropy(K, RenyiIndex(1.0)) <= local_renyi_entropy(K, RenyiIndex(0.5)));
}

TEST_CASE("local entropy is extensive at high temperature") {
  // at fixed mu the boundary term stays O(1) while s ~ sqrt(T): about 4% of
  // s L at T = 100 and below 1% from T ~ 3000 on
  {
    const auto pt = ThermoPoint::fixed_mu(100.0, 0.0);
    const auto K = build_reduced_kernel(gas, pt, unit_interval, 1.0);
    const double bulk = entropy_density(gas, RenyiIndex(1.0), pt);
    const double eta = eta_coefficient(gas, unit_interval, RenyiIndex(1.0), pt, 1e-7).value;
    CHECK_THAT(local_renyi_entropy(K, RenyiIndex(1.0)), WithinRel(bulk + eta, 1e-5));
  }
  const auto pt = ThermoPoint::fixed_mu(3000.0, 0.0);
  const auto K = build_reduced_kernel(gas, pt, unit_interval, 1.0);
  CHECK_THAT(local_renyi_entropy(K, RenyiIndex(1.0)), WithinRel(entropy_density(gas, RenyiIndex(1.0), pt), 0.01));
}

TEST_CASE("regularized trace is non-negative and additive") {
  const auto pt = ThermoPoint::fixed_mu(0.5, 1.0);
  for (double alpha : {0.5, 1.0, 2.0}) {
    const double s = entropy_density(gas, RenyiIndex(alpha), pt);
    for (double L : {1.0, 2.0, 5.0, 10.0}) {
      const auto K = build_reduced_kernel(gas, pt, unit_interval, L);
      CHECK(regularized_trace(K, RenyiIndex(alpha), s) >= -1e-8);
    }
  }
  // components of length 10 at distance 50, far beyond the correlation length
  const Domain two(Intervals{{{0.0, 1.0}, {6.0, 7.0}}}, 1);
  const double s = entropy_density(gas, RenyiIndex(1.0), pt);
  const double one = regularized_trace(build_reduced_kernel(gas, pt, unit_interval, 10.0), RenyiIndex(1.0), s);
  const double both = regularized_trace(build_reduced_kernel(gas, pt, two, 10.0), RenyiIndex(1.0), s);
  CHECK_THAT(both, WithinRel(2.0 * one, 0.005));
}

TEST_CASE("oracle rejects unresolved grids and d > 1") {
  const auto pt = ThermoPoint::fixed_mu(0.5, 1.0);
  const double p_max = kernel_momentum_cutoff(gas, 0.5, 1.0);
  CHECK_THROWS_AS(build_reduced_kernel(gas, pt, unit_interval, 5.0, 2.0 * p_max), ResolutionError);
  CHECK_NOTHROW(build_reduced_kernel(gas, pt, unit_interval, 5.0, 4.5 * p_max));
  CHECK_THROWS_AS(build_reduced_kernel(Dispersion::ideal_gas(2), pt, Domain(Ball{1.0}, 2), 5.0),
                  UnsupportedConfiguration);
}

TEST_CASE("oracle reproduces the boundary coefficient") {
  const auto pt = ThermoPoint::fixed_mu(0.5, 1.0);
  const std::vector<RenyiIndex> alphas = {RenyiIndex(0.5), RenyiIndex(1.0), RenyiIndex(2.0)};
  const auto study = scaling_study(gas, pt, unit_interval, alphas, {5.0, 10.0, 20.0, 40.0});
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const double eta = eta_coefficient(gas, unit_interval, alphas[i], pt, 1e-7).value;
    const auto& s = study.series[i];
    CHECK_THAT(s.eta_at_largest_L, WithinRel(eta, 0.01));
    CHECK(s.last_increment < 2e-3);
    CHECK_THAT(s.predicted_entanglement, WithinRel(2.0 * eta, 0.01));
    for (double t : s.trace) CHECK(t >= -1e-8);
  }
  for (double e : study.trace_errors) CHECK(e < 1e-8);
}

TEST_CASE("fitted bulk slope matches the entropy density") {
  const auto pt = ThermoPoint::fixed_mu(0.1, 1.0);
  const auto study = scaling_study(gas, pt, unit_interval, {RenyiIndex(1.0)}, {20.0, 40.0, 80.0, 160.0});
  const auto& s = study.series.front();
  CHECK_THAT(s.fit.coefficient("L"), WithinRel(s.bulk_density, 1e-3));
  const double eta = eta_coefficient(gas, unit_interval, RenyiIndex(1.0), pt, 1e-7).value;
  CHECK_THAT(s.measured_eta, WithinRel(eta, 0.01));
}
