#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fermi_ee/dispersion.hpp"
#include "fermi_ee/errors.hpp"

namespace fermi_ee {

/// Finite union of disjoint bounded intervals (d = 1 only).
struct Intervals {
  std::vector<std::pair<double, double>> pieces;
};

struct Ball {
  double radius = 1.0;
};

/// Axis-aligned box with the given edge lengths (one per dimension).
struct Box {
  std::vector<double> edges;
};

using DomainShape = std::variant<Intervals, Ball, Box>;

/// Bounded region Omega at scale L. Volumes and areas refer to L Omega;
/// the unit_* accessors give |Omega| and |dOmega| at L = 1.
class Domain {
 public:
  Domain(DomainShape shape, int dimension, double scale = 1.0)
      : shape_(std::move(shape)), d_(dimension), L_(scale) {
    if (d_ < 1) throw DomainError("boundary-coefficient", "dimension must be >= 1");
    if (!(L_ > 0.0) || !std::isfinite(L_)) {
      throw DomainError("boundary-coefficient", "scale L must be positive");
    }
    validate();
  }

  static Domain interval(double a, double b, double scale = 1.0) {
    return Domain(Intervals{{{a, b}}}, 1, scale);
  }

  const DomainShape& shape() const { return shape_; }
  int dimension() const { return d_; }
  double scale() const { return L_; }
  Domain scaled(double L) const { return Domain(shape_, d_, L); }

  double unit_volume() const {
    return std::visit(
        [&](const auto& s) -> double {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, Intervals>) {
            double total = 0.0;
            for (const auto& [a, b] : s.pieces) total += b - a;
            return total;
          } else if constexpr (std::is_same_v<S, Ball>) {
            return unit_ball_volume(d_) * std::pow(s.radius, d_);
          } else {
            return std::accumulate(s.edges.begin(), s.edges.end(), 1.0, std::multiplies<>());
          }
        },
        shape_);
  }

  /// |dOmega|; for d = 1 the number of endpoints.
  double unit_boundary_area() const {
    return std::visit(
        [&](const auto& s) -> double {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, Intervals>) {
            return 2.0 * static_cast<double>(s.pieces.size());
          } else if constexpr (std::is_same_v<S, Ball>) {
            if (d_ == 1) return 2.0;
            return unit_sphere_area(d_ - 1) * std::pow(s.radius, d_ - 1);
          } else {
            if (d_ == 1) return 2.0;
            double area = 0.0;
            for (std::size_t i = 0; i < s.edges.size(); ++i) {
              double face = 1.0;
              for (std::size_t j = 0; j < s.edges.size(); ++j) {
                if (j != i) face *= s.edges[j];
              }
              area += 2.0 * face;
            }
            return area;
          }
        },
        shape_);
  }

  double volume() const { return unit_volume() * std::pow(L_, d_); }
  double boundary_area() const { return unit_boundary_area() * std::pow(L_, d_ - 1); }

  /// Number of boundary points of a one-dimensional domain.
  int endpoint_count() const {
    if (d_ != 1) throw DomainError("boundary-coefficient", "endpoint count is defined for d = 1 only");
    return static_cast<int>(unit_boundary_area());
  }

  /// The components of L Omega as intervals (d = 1 only).
  std::vector<std::pair<double, double>> scaled_intervals() const {
    if (d_ != 1) throw DomainError("boundary-coefficient", "interval view requires d = 1");
    std::vector<std::pair<double, double>> out;
    std::visit(
        [&](const auto& s) {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, Intervals>) {
            for (const auto& [a, b] : s.pieces) out.emplace_back(L_ * a, L_ * b);
          } else if constexpr (std::is_same_v<S, Ball>) {
            out.emplace_back(-L_ * s.radius, L_ * s.radius);
          } else {
            out.emplace_back(0.0, L_ * s.edges.front());
          }
        },
        shape_);
    return out;
  }

  std::string shape_name() const {
    return std::visit(
        [](const auto& s) -> std::string {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, Intervals>) return "intervals";
          if constexpr (std::is_same_v<S, Ball>) return "ball";
          return "box";
        },
        shape_);
  }

 private:
  void validate() const {
    std::visit(
        [&](const auto& s) {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, Intervals>) {
            if (d_ != 1) throw DomainError("boundary-coefficient", "interval unions require d = 1");
            if (s.pieces.empty()) throw DomainError("boundary-coefficient", "empty interval list");
            for (std::size_t i = 0; i < s.pieces.size(); ++i) {
              const auto& [a, b] = s.pieces[i];
              if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) {
                throw DomainError("boundary-coefficient", "interval endpoints must be ordered");
              }
              if (i > 0 && !(a > s.pieces[i - 1].second)) {
                throw DomainError("boundary-coefficient",
                                  "intervals must be disjoint and listed left to right");
              }
            }
          } else if constexpr (std::is_same_v<S, Ball>) {
            if (!(s.radius > 0.0)) throw DomainError("boundary-coefficient", "ball radius must be positive");
          } else {
            if (static_cast<int>(s.edges.size()) != d_) {
              throw DomainError("boundary-coefficient", "box needs one edge length per dimension");
            }
            for (double e : s.edges) {
              if (!(e > 0.0)) throw DomainError("boundary-coefficient", "box edges must be positive");
            }
          }
        },
        shape_);
  }

  DomainShape shape_;
  int d_;
  double L_;
};

}  // namespace fermi_ee
