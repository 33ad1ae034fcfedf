#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "fermi_ee/errors.hpp"

namespace fermi_ee {

/// A quadrature value with its error estimate.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

/// Mixed absolute/relative stopping rule: converged when
/// error <= max(abs, rel * |value|).
struct Tolerance {
  double abs = 0.0;
  double rel = 1e-10;

  double bound(double value) const { return std::max(abs, rel * std::abs(value)); }
};

namespace quadrature {

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gauss_kronrod_15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration over the union of the
/// intervals [breaks[i], breaks[i+1]]. The segment with the largest error is
/// bisected until the summed error satisfies `tol`. Breakpoints must be
/// nondecreasing; zero-length pieces are skipped.
template <class F>
Estimate integrate(F&& f, std::span<const double> breaks, Tolerance tol, const std::string& module,
                   int max_segments = 4000) {
  std::priority_queue<detail::Segment> heap;
  double value = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    auto s = detail::gauss_kronrod_15(f, breaks[i], breaks[i + 1]);
    value += s.value;
    error += s.error;
    heap.push(s);
  }
  int segments = static_cast<int>(heap.size());
  while (!heap.empty() && error > tol.bound(value)) {
    if (segments >= max_segments) {
      throw QuadratureError(module, "adaptive quadrature did not converge", value, error);
    }
    auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw QuadratureError(module, "quadrature interval collapsed to machine precision", value,
                            error);
    }
    heap.pop();
    auto left = detail::gauss_kronrod_15(f, worst.a, mid);
    auto right = detail::gauss_kronrod_15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++segments;
  }
  // Recompute the sums to drop accumulated cancellation from the updates.
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  return {value, error};
}

template <class F>
Estimate integrate(F&& f, double a, double b, Tolerance tol, const std::string& module,
                   int max_segments = 4000) {
  const std::array<double, 2> breaks = {a, b};
  return integrate(std::forward<F>(f), std::span<const double>(breaks), tol, module,
                   max_segments);
}

/// Sort, clip to [lo, hi] and deduplicate a list of breakpoints. The result
/// always starts with lo and ends with hi.
inline std::vector<double> normalize_breaks(std::vector<double> pts, double lo, double hi) {
  pts.push_back(lo);
  pts.push_back(hi);
  for (auto& p : pts) p = std::clamp(p, lo, hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

/// Double-exponential (tanh-sinh) rule on [0, 1] with nested levels. Nodes
/// carry both x and 1 - x so that integrands with endpoint singularities can
/// be evaluated without cancellation near x = 1.
class TanhSinhUnit {
 public:
  struct Node {
    double x;   // abscissa in (0, 1/2]
    double xc;  // 1 - x, computed directly
    double w;   // weight for unit step, dx/dt
  };

  static constexpr int kMaxLevel = 8;
  static constexpr double kHalfWidth = 4.0;

  static const TanhSinhUnit& instance() {
    static const TanhSinhUnit rule;
    return rule;
  }

  /// Nodes first introduced at `level` (t >= 0 only; each node with t > 0
  /// stands for the mirrored pair).
  std::span<const Node> level(int k) const { return levels_[static_cast<std::size_t>(k)]; }

  /// Integrates f(x, 1 - x) over [0, 1]. Refines levels until successive
  /// estimates differ by at most tol.bound(value).
  template <class F>
  Estimate integrate(F&& f, Tolerance tol, const std::string& module, int min_level = 3) const {
    double sum = 0.0;
    double previous = 0.0;
    double diff = 0.0;
    for (int k = 0; k <= kMaxLevel; ++k) {
      for (const Node& n : level(k)) {
        if (n.x == 0.5) {
          sum += n.w * f(n.x, n.xc);
        } else {
          sum += n.w * (f(n.x, n.xc) + f(n.xc, n.x));
        }
      }
      const double h = std::ldexp(1.0, -k);
      const double current = h * sum;
      if (k > 0) {
        diff = std::abs(current - previous);
        if (k >= min_level && diff <= tol.bound(current)) return {current, diff};
      }
      previous = current;
    }
    throw QuadratureError(module, "tanh-sinh rule did not converge", previous, diff);
  }

 private:
  TanhSinhUnit() {
    levels_.resize(kMaxLevel + 1);
    for (int k = 0; k <= kMaxLevel; ++k) {
      const double h = std::ldexp(1.0, -k);
      const int count = static_cast<int>(kHalfWidth / h);
      for (int j = 0; j <= count; ++j) {
        if (k > 0 && j % 2 == 0) continue;  // already present at a coarser level
        const double t = j * h;
        const double u = 0.5 * std::numbers::pi * std::sinh(t);
        const double ch = std::cosh(u);
        Node n;
        n.x = 1.0 / (1.0 + std::exp(2.0 * u));
        n.xc = 1.0 / (1.0 + std::exp(-2.0 * u));
        n.w = 0.25 * std::numbers::pi * std::cosh(t) / (ch * ch);
        levels_[static_cast<std::size_t>(k)].push_back(n);
      }
    }
  }

  std::vector<std::vector<Node>> levels_;
};

}  // namespace quadrature
}  // namespace fermi_ee
