#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace fermi_ee {

/// Base class for every error raised by the library. `module()` names the
/// component that raised it so the CLI can report provenance.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

namespace detail {
inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}
}  // namespace detail

/// An adaptive quadrature ran out of budget before meeting its tolerance.
class QuadratureError : public Error {
 public:
  QuadratureError(std::string module, const std::string& what, double estimate, double error)
      : Error(std::move(module), what + " (estimate " + detail::format_number(estimate) +
                                     ", error estimate " + detail::format_number(error) + ")"),
        estimate_(estimate),
        error_(error) {}

  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_; }

 private:
  double estimate_;
  double error_;
};

/// A valid request that the implementation deliberately does not support
/// (anisotropic dispersions in d >= 2).
class UnsupportedConfiguration : public Error {
 public:
  using Error::Error;
};

/// Root bracketing failed in a monotone inversion.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// The Fermi level lies below the band bottom, so there is no Fermi surface.
class NoFermiSurface : public Error {
 public:
  using Error::Error;
};

/// A discretization is too coarse for the requested accuracy.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Least-squares fit cannot be performed (too few points, degenerate or
/// ill-conditioned design).
class FitError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("cli-io", what) {}
};

}  // namespace fermi_ee
