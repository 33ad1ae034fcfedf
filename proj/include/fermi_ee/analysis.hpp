#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fermi_ee/errors.hpp"

namespace fermi_ee {

/// Ordered samples (x, y) with strictly increasing positive x.
struct SampleSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string tag;

  void validate(std::size_t min_points) const {
    if (x.size() != y.size()) throw FitError("analysis", "series '" + tag + "': x and y differ in length");
    if (x.size() < min_points) {
      throw FitError("analysis", "series '" + tag + "': need at least " + std::to_string(min_points) +
                                     " points, got " + std::to_string(x.size()));
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!(x[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) {
        throw FitError("analysis", "series '" + tag + "': abscissae must be positive and data finite");
      }
      if (i > 0 && !(x[i] > x[i - 1])) {
        throw FitError("analysis", "series '" + tag + "': abscissae must be strictly increasing");
      }
    }
  }
};

enum class FitModel { TwoTerm, BoundaryOnly, LogModel, PowerLaw };

inline const char* fit_model_name(FitModel m) {
  switch (m) {
    case FitModel::TwoTerm: return "two-term";
    case FitModel::BoundaryOnly: return "boundary-only";
    case FitModel::LogModel: return "log";
    case FitModel::PowerLaw: return "power-law";
  }
  return "unknown";
}

/// Linear least-squares result. `terms` names the basis functions in the
/// order of `coefficients`.
struct ScalingFit {
  FitModel model = FitModel::TwoTerm;
  std::vector<std::string> terms;
  std::vector<double> coefficients;
  std::vector<double> standard_errors;
  double residual_norm = 0.0;
  double condition_number = 1.0;
  std::vector<double> residuals;

  double coefficient(const std::string& term) const {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (terms[i] == term) return coefficients[i];
    }
    throw FitError("analysis", "fit has no term '" + term + "'");
  }
  double standard_error(const std::string& term) const {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (terms[i] == term) return standard_errors[i];
    }
    throw FitError("analysis", "fit has no term '" + term + "'");
  }
};

inline constexpr double kMaxFitCondition = 1e10;

namespace detail {

inline ScalingFit least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, FitModel model,
                                std::vector<std::string> terms) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  ScalingFit fit;
  fit.model = model;
  fit.terms = std::move(terms);
  fit.condition_number = smin > 0.0 ? smax / smin : INFINITY;
  if (!(fit.condition_number <= kMaxFitCondition)) {
    throw FitError("analysis", "ill-conditioned fit: design condition number " +
                                   detail::format_number(fit.condition_number) + " exceeds 1e10");
  }
  const Eigen::VectorXd beta = svd.solve(y);
  const Eigen::VectorXd r = y - X * beta;
  const auto n = X.rows();
  const auto p = X.cols();
  fit.residual_norm = r.norm();
  fit.residuals.assign(r.data(), r.data() + r.size());
  // cov = s^2 (X^T X)^{-1} = s^2 V S^{-2} V^T
  const double s2 = n > p ? r.squaredNorm() / static_cast<double>(n - p) : 0.0;
  const Eigen::MatrixXd Vs = svd.matrixV() * sv.cwiseInverse().asDiagonal();
  const Eigen::MatrixXd cov = s2 * Vs * Vs.transpose();
  for (Eigen::Index i = 0; i < p; ++i) {
    fit.coefficients.push_back(beta(i));
    fit.standard_errors.push_back(std::sqrt(std::max(cov(i, i), 0.0)));
  }
  return fit;
}

}  // namespace detail

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double standard_error = 0.0;
  double residual_norm = 0.0;
};

/// y = c x^k by least squares on (ln x, ln y).
inline PowerLawFit fit_power_law(const SampleSeries& s) {
  s.validate(3);
  const auto n = static_cast<Eigen::Index>(s.x.size());
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(s.y[i] > 0.0)) {
      throw FitError("analysis", "series '" + s.tag + "': power-law fit needs positive y");
    }
    X(i, 0) = std::log(s.x[i]);
    X(i, 1) = 1.0;
    y(i) = std::log(s.y[i]);
  }
  const auto fit = detail::least_squares(X, y, FitModel::PowerLaw, {"ln x", "1"});
  return {fit.coefficients[0], std::exp(fit.coefficients[1]), fit.standard_errors[0], fit.residual_norm};
}

struct LogLawFit {
  double a = 0.0;
  double b = 0.0;
  double standard_error = 0.0;  // of a
  double standard_error_b = 0.0;
  double residual_norm = 0.0;
};

/// y = a ln(pivot / x) + b.
inline LogLawFit fit_log_law(const SampleSeries& s, double pivot) {
  if (!(pivot > 0.0)) throw FitError("analysis", "log-law pivot must be positive");
  s.validate(3);
  const auto n = static_cast<Eigen::Index>(s.x.size());
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = std::log(pivot / s.x[i]);
    X(i, 1) = 1.0;
    y(i) = s.y[i];
  }
  const auto fit = detail::least_squares(X, y, FitModel::LogModel, {"ln(pivot/x)", "1"});
  return {fit.coefficients[0], fit.coefficients[1], fit.standard_errors[0], fit.standard_errors[1],
          fit.residual_norm};
}

/// Two-term area-law fit y = A L^d + B L^{d-1} (+ C). In d = 1 the boundary
/// term L^0 coincides with the constant, so the basis is {L, 1}, optionally
/// extended by L^{-1} for the leading finite-size correction.
inline ScalingFit fit_two_term(const SampleSeries& s, int d, bool inverse_correction = false) {
  if (d < 1) throw FitError("analysis", "dimension must be >= 1");
  s.validate(4);
  const auto n = static_cast<Eigen::Index>(s.x.size());
  std::vector<std::string> terms;
  if (d == 1) {
    terms = {"L", "1"};
    if (inverse_correction) terms.push_back("1/L");
  } else {
    terms = {"L^" + std::to_string(d), d == 2 ? "L" : "L^" + std::to_string(d - 1), "1"};
  }
  Eigen::MatrixXd X(n, static_cast<Eigen::Index>(terms.size()));
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double L = s.x[i];
    if (d == 1) {
      X(i, 0) = L;
      X(i, 1) = 1.0;
      if (inverse_correction) X(i, 2) = 1.0 / L;
    } else {
      X(i, 0) = std::pow(L, d);
      X(i, 1) = std::pow(L, d - 1);
      X(i, 2) = 1.0;
    }
    y(i) = s.y[i];
  }
  return detail::least_squares(X, y, FitModel::TwoTerm, std::move(terms));
}

/// y = B L^{d-1} + c, used once the bulk term has been subtracted.
inline ScalingFit fit_boundary_only(const SampleSeries& s, int d) {
  if (d < 2) throw FitError("analysis", "boundary-only fit needs d >= 2 (use the constant in d = 1)");
  s.validate(3);
  const auto n = static_cast<Eigen::Index>(s.x.size());
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = std::pow(s.x[i], d - 1);
    X(i, 1) = 1.0;
    y(i) = s.y[i];
  }
  return detail::least_squares(X, y, FitModel::BoundaryOnly, {"L^" + std::to_string(d - 1), "1"});
}

}  // namespace fermi_ee
