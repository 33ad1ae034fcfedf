#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <boost/math/quadrature/gauss.hpp>

#include "fermi_ee/analysis.hpp"
#include "fermi_ee/dispersion.hpp"
#include "fermi_ee/domain.hpp"
#include "fermi_ee/entropy_kernels.hpp"
#include "fermi_ee/errors.hpp"
#include "fermi_ee/quadrature.hpp"
#include "fermi_ee/thermodynamics.hpp"

namespace fermi_ee {

/// Gauss-Legendre order of the spatial and momentum panels.
inline constexpr int kPanelOrder = 20;

/// Momentum cutoff: f_T(epsilon(p_max) - mu) = e^{-kKernelTailCut}, below 1e-16.
inline constexpr double kKernelTailCut = 40.0;

namespace detail {

// Gauss-Legendre nodes and weights mapped to [a, b].
inline void gauss_panel(double a, double b, std::vector<double>& x, std::vector<double>& w) {
  using Rule = boost::math::quadrature::gauss<double, kPanelOrder>;
  const auto& abscissa = Rule::abscissa();
  const auto& weight = Rule::weights();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  for (std::size_t i = 0; i < abscissa.size(); ++i) {
    const double t = abscissa[i];
    if (t == 0.0) {
      x.push_back(c);
      w.push_back(h * weight[i]);
    } else {
      x.push_back(c - h * t);
      w.push_back(h * weight[i]);
      x.push_back(c + h * t);
      w.push_back(h * weight[i]);
    }
  }
}

inline void gauss_panels(double a, double b, int panels, std::vector<double>& x, std::vector<double>& w) {
  for (int k = 0; k < panels; ++k) {
    gauss_panel(a + (b - a) * k / panels, a + (b - a) * (k + 1) / panels, x, w);
  }
}

}  // namespace detail

/// Largest momentum kept in the kernel.
inline double kernel_momentum_cutoff(const Dispersion& disp, double T, double mu) {
  return disp.momentum_cutoff(mu, T, kKernelTailCut);
}

/// Default spatial density: 25% finer than the resolution criterion
/// 1/n < hbar / (4 p_max).
inline double default_nodes_per_length(const Dispersion& disp, double T, double mu) {
  return 5.0 * kernel_momentum_cutoff(disp, T, mu) / disp.hbar();
}

/// K(r) = (2 pi hbar)^{-1} int dp e^{i p r / hbar} f_T(epsilon(p) - mu) by
/// adaptive quadrature, with panels no longer than pi hbar / |r|.
inline double kernel_value(const Dispersion& disp, double T, double mu, double r, double tol = 1e-14) {
  if (disp.dimension() != 1) throw DomainError("spectral-oracle", "the kernel is implemented for d = 1");
  const double hbar = disp.hbar();
  const double p_max = kernel_momentum_cutoff(disp, T, mu);
  std::vector<double> breaks = {0.0, p_max};
  if (mu > 0.0) {
    const double pF = disp.momentum_at(mu);
    const double dp = disp.momentum_at(mu + T) - pF;
    for (double m : {0.0, 1.0, 4.0, 16.0}) {
      breaks.push_back(pF - m * dp);
      breaks.push_back(pF + m * dp);
    }
  }
  if (r != 0.0) {
    const double step = std::numbers::pi * hbar / std::abs(r);
    const auto count = static_cast<long>(std::min(p_max / step, 1e6));
    for (long k = 1; k <= count; ++k) breaks.push_back(k * step);
  }
  breaks = quadrature::normalize_breaks(std::move(breaks), 0.0, p_max);
  auto f = [&](double p) { return std::cos(p * r / hbar) * fermi_function(T, disp.energy(p) - mu); };
  const auto est = quadrature::integrate(f, std::span<const double>(breaks), Tolerance{tol, 0.0},
                                         "spectral-oracle", 200000);
  return est.value / (std::numbers::pi * hbar);
}

/// Nystrom discretization of chi_{L Omega} f_T(epsilon(P) - mu) chi_{L Omega}
/// in d = 1, A_ij = sqrt(w_i) K(x_i, x_j) sqrt(w_j).
///
/// The momentum integral for K is done once with a fixed Gauss-Legendre
/// rule p_j, c_j, giving K(x, y) = sum_j c_j cos(p_j (x - y)/hbar) and hence
/// A = B B^T with B = sqrt(w) [cos(p x) sqrt(c), sin(p x) sqrt(c)]. The
/// eigenvalues are the squared singular values of B, so small eigenvalues
/// keep relative accuracy.
class ReducedKernelMatrix {
 public:
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& momenta() const { return momenta_; }
  const std::vector<double>& momentum_weights() const { return momentum_weights_; }
  const Eigen::MatrixXd& factor() const { return factor_; }
  /// Eigenvalues in decreasing order, before clamping.
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  std::size_t size() const { return nodes_.size(); }

  double temperature() const { return T_; }
  double mu() const { return mu_; }
  double scale() const { return L_; }
  double length() const { return length_; }
  double nodes_per_length() const { return n_; }
  double momentum_cutoff() const { return p_max_; }
  double hbar() const { return hbar_; }

  /// The dense symmetric matrix A = B B^T.
  Eigen::MatrixXd matrix() const { return factor_ * factor_.transpose(); }

  /// Quadrature kernel K(x, y) used to build the matrix.
  double kernel(double x, double y) const {
    double k = 0.0;
    for (std::size_t j = 0; j < momenta_.size(); ++j) {
      k += momentum_weights_[j] * std::cos(momenta_[j] * (x - y) / hbar_);
    }
    return k;
  }

  /// sum of eigenvalues = ||B||_F^2.
  double trace() const { return factor_.squaredNorm(); }

 private:
  friend ReducedKernelMatrix build_reduced_kernel(const Dispersion&, const ThermoPoint&, const Domain&,
                                                  double, double);

  std::vector<double> nodes_, weights_, momenta_, momentum_weights_, eigenvalues_;
  Eigen::MatrixXd factor_;
  double T_ = 0, mu_ = 0, L_ = 1, length_ = 0, n_ = 0, p_max_ = 0, hbar_ = 1;
};

/// Builds and diagonalizes the reduced kernel on L * dom with n nodes per
/// unit length (n <= 0 selects default_nodes_per_length).
inline ReducedKernelMatrix build_reduced_kernel(const Dispersion& disp, const ThermoPoint& point,
                                                const Domain& dom, double L, double n = 0.0) {
  if (disp.dimension() != 1 || dom.dimension() != 1) {
    throw UnsupportedConfiguration("spectral-oracle", "unsupported-configuration: the spectral oracle is d = 1 only");
  }
  const double T = point.temperature();
  const double mu = point.mu();
  const double hbar = disp.hbar();
  ReducedKernelMatrix K;
  K.T_ = T;
  K.mu_ = mu;
  K.L_ = L;
  K.hbar_ = hbar;
  K.p_max_ = kernel_momentum_cutoff(disp, T, mu);
  if (!std::isfinite(K.p_max_) || !(K.p_max_ > 0.0)) {
    throw ResolutionError("spectral-oracle", "momentum cutoff is not finite: dispersion is not confining");
  }
  if (n <= 0.0) n = default_nodes_per_length(disp, T, mu);
  K.n_ = n;
  const double limit = hbar / (4.0 * K.p_max_);
  if (!(1.0 / n < limit)) {
    throw ResolutionError("spectral-oracle", "node spacing " + detail::format_number(1.0 / n) +
                                                 " does not resolve hbar/(4 p_max) = " +
                                                 detail::format_number(limit));
  }

  const auto pieces = dom.scaled(L).scaled_intervals();
  for (const auto& [a, b] : pieces) {
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) * n / kPanelOrder)));
    detail::gauss_panels(a, b, panels, K.nodes_, K.weights_);
    K.length_ += b - a;
  }
  const double extent = pieces.back().second - pieces.front().first;

  // momentum rule: panels short enough for the phase p * extent / hbar and for
  // the Fermi step of width ~ T / v_F
  double dp = 4.0 * std::numbers::pi * hbar / extent;
  std::vector<double> pbreaks = {0.0, K.p_max_};
  const double base = std::max(mu, 0.0);
  const double thermal = disp.momentum_at(base + T) - disp.momentum_at(base);
  if (mu > 0.0) {
    const double pF = disp.momentum_at(mu);
    for (double m = 1.0; m <= 64.0; m *= 2.0) {
      pbreaks.push_back(pF - m * thermal);
      pbreaks.push_back(pF + m * thermal);
    }
    pbreaks.push_back(pF);
  }
  dp = std::min(dp, 4.0 * thermal);
  pbreaks = quadrature::normalize_breaks(std::move(pbreaks), 0.0, K.p_max_);
  for (std::size_t i = 0; i + 1 < pbreaks.size(); ++i) {
    const double len = pbreaks[i + 1] - pbreaks[i];
    if (!(len > 0.0)) continue;
    const int panels = std::max(1, static_cast<int>(std::ceil(len / dp)));
    detail::gauss_panels(pbreaks[i], pbreaks[i + 1], panels, K.momenta_, K.momentum_weights_);
  }
  // even symbol: (2 pi hbar)^{-1} int_R = (pi hbar)^{-1} int_0^inf
  for (std::size_t j = 0; j < K.momenta_.size(); ++j) {
    K.momentum_weights_[j] *= fermi_function(T, disp.energy(K.momenta_[j]) - mu) / (std::numbers::pi * hbar);
  }

  const auto N = static_cast<Eigen::Index>(K.nodes_.size());
  const auto M = static_cast<Eigen::Index>(K.momenta_.size());
  K.factor_.resize(N, 2 * M);
  for (Eigen::Index i = 0; i < N; ++i) {
    const double sw = std::sqrt(K.weights_[static_cast<std::size_t>(i)]);
    const double x = K.nodes_[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < M; ++j) {
      const double sc = sw * std::sqrt(K.momentum_weights_[static_cast<std::size_t>(j)]);
      const double phase = K.momenta_[static_cast<std::size_t>(j)] * x / hbar;
      K.factor_(i, j) = sc * std::cos(phase);
      K.factor_(i, M + j) = sc * std::sin(phase);
    }
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(K.factor_);
  const auto& sv = svd.singularValues();
  K.eigenvalues_.resize(static_cast<std::size_t>(N), 0.0);
  for (Eigen::Index i = 0; i < sv.size() && i < N; ++i) {
    K.eigenvalues_[static_cast<std::size_t>(i)] = sv(i) * sv(i);
  }
  return K;
}

/// S_alpha = sum_i h_alpha(lambda_i) over the clamped eigenvalues.
inline double local_renyi_entropy(const ReducedKernelMatrix& K, RenyiIndex alpha,
                                  double clamp_tol = kDefaultClampTolerance) {
  double sum = 0.0;
  // ascending order of magnitude keeps the summation error small
  for (auto it = K.eigenvalues().rbegin(); it != K.eigenvalues().rend(); ++it) {
    sum += renyi_entropy_function(alpha, *it, clamp_tol);
  }
  return sum;
}

/// Tr Delta_alpha(T, L Omega) = S_alpha - s_alpha |L Omega|.
inline double regularized_trace(const ReducedKernelMatrix& K, RenyiIndex alpha, double s_alpha_bulk) {
  return local_renyi_entropy(K, alpha) - s_alpha_bulk * K.length();
}

/// Oracle results for one Renyi index over an L grid.
struct OracleSeries {
  double alpha = 1.0;
  double bulk_density = 0.0;        // s_alpha(T) from thermodynamics
  std::vector<double> entropy;      // S_alpha(T, L Omega)
  std::vector<double> trace;        // Tr Delta_alpha(T, L Omega)
  ScalingFit fit;                   // S = A L + B (+ C / L)
  double measured_eta = 0.0;        // fitted constant B
  double eta_at_largest_L = 0.0;    // Tr Delta at the largest L
  double last_increment = 0.0;      // relative change of Tr Delta over the last L step
  double predicted_entanglement = 0.0;  // H_alpha = 2 eta
};

struct ScalingStudy {
  std::vector<double> L;
  std::vector<std::size_t> matrix_sizes;
  std::vector<double> trace_errors;  // |sum lambda - rho |L Omega|| / (rho |L Omega|)
  double density = 0.0;
  std::vector<OracleSeries> series;
};

/// Diagonalizes the reduced kernel once per L and evaluates every alpha on
/// the same spectrum.
inline ScalingStudy scaling_study(const Dispersion& disp, const ThermoPoint& point, const Domain& dom,
                                  const std::vector<RenyiIndex>& alphas, const std::vector<double>& L_grid,
                                  double n = 0.0) {
  if (L_grid.size() < 4) throw FitError("spectral-oracle", "scaling study needs at least four L values");
  for (std::size_t i = 1; i < L_grid.size(); ++i) {
    if (!(L_grid[i] > L_grid[i - 1])) throw FitError("spectral-oracle", "L grid must be increasing");
  }
  ScalingStudy study;
  study.L = L_grid;
  study.density = density(disp, point.temperature(), point.mu());
  for (const auto& a : alphas) {
    OracleSeries s;
    s.alpha = a.value();
    s.bulk_density = entropy_density(disp, a, point);
    study.series.push_back(s);
  }
  for (double L : L_grid) {
    const auto K = build_reduced_kernel(disp, point, dom, L, n);
    study.matrix_sizes.push_back(K.size());
    const double expected = study.density * K.length();
    study.trace_errors.push_back(std::abs(K.trace() - expected) / expected);
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      const double S = local_renyi_entropy(K, alphas[i]);
      study.series[i].entropy.push_back(S);
      study.series[i].trace.push_back(S - study.series[i].bulk_density * K.length());
    }
  }
  for (auto& s : study.series) {
    s.fit = fit_two_term(SampleSeries{L_grid, s.entropy, "S_alpha"}, 1);
    s.measured_eta = s.fit.coefficients[1];
    s.eta_at_largest_L = s.trace.back();
    const double prev = s.trace[s.trace.size() - 2];
    s.last_increment = std::abs(s.trace.back() - prev) / std::max(std::abs(s.trace.back()), 1e-300);
    s.predicted_entanglement = 2.0 * s.eta_at_largest_L;
  }
  return study;
}

}  // namespace fermi_ee
