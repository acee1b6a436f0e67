#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace hamlab::numeric {

struct QuadratureOptions {
  double abs_tol = 0.0;
  double rel_tol = 1e-10;
  int max_panels = 4000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
  bool converged = false;
};

namespace detail {

// Kronrod 15-point abscissae on [-1, 1]; odd indices are the embedded
// 7-point Gauss nodes.
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

inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel kronrod_panel(F& f, double a, double b) {
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

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on a finite interval.
/// The panel with the largest error estimate is bisected until the summed
/// estimate falls under max(abs_tol, rel_tol * |value|).
template <class F>
QuadratureResult integrate(F&& f, double a, double b,
                           const QuadratureOptions& options = {}) {
  QuadratureResult result;
  if (a == b) {
    result.converged = true;
    return result;
  }
  const double sign = a < b ? 1.0 : -1.0;
  if (a > b) std::swap(a, b);

  std::priority_queue<detail::Panel> panels;
  panels.push(detail::kronrod_panel(f, a, b));
  result.evaluations = 15;
  double value = panels.top().value;
  double error = panels.top().error;

  auto target = [&] {
    return std::max(options.abs_tol, options.rel_tol * std::abs(value));
  };

  while (error > target() &&
         static_cast<int>(panels.size()) < options.max_panels) {
    const detail::Panel worst = panels.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval exhausted
    panels.pop();
    const auto left = detail::kronrod_panel(f, worst.a, mid);
    const auto right = detail::kronrod_panel(f, mid, worst.b);
    result.evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }

  // Re-sum to shed the drift of the running updates.
  value = 0.0;
  error = 0.0;
  while (!panels.empty()) {
    value += panels.top().value;
    error += panels.top().error;
    panels.pop();
  }
  result.value = sign * value;
  result.error = error;
  result.converged = error <= target() && std::isfinite(value);
  return result;
}

/// Iterated two-dimensional quadrature over {a<=x<=b, lo(x)<=y<=hi(x)}.
/// The inner integrals run at a quarter of the outer tolerance; the largest
/// inner error estimate times the outer width is added to the reported error.
template <class F, class Lo, class Hi>
QuadratureResult integrate_2d(F&& f, double a, double b, Lo&& lo, Hi&& hi,
                              const QuadratureOptions& options = {}) {
  QuadratureOptions inner = options;
  inner.rel_tol = options.rel_tol / 4.0;
  inner.abs_tol = options.abs_tol / (4.0 * std::max(1.0, std::abs(b - a)));
  long evaluations = 0;
  double worst_inner = 0.0;
  bool inner_ok = true;
  auto slice = [&](double x) {
    auto fy = [&](double y) { return f(x, y); };
    const auto r = integrate(fy, lo(x), hi(x), inner);
    evaluations += r.evaluations;
    inner_ok = inner_ok && r.converged;
    worst_inner = std::max(worst_inner, r.error);
    return r.value;
  };
  auto outer = integrate(slice, a, b, options);
  outer.error += worst_inner * std::abs(b - a);
  outer.evaluations = evaluations;
  outer.converged = outer.converged && inner_ok;
  return outer;
}

/// Integral over (0, inf) of a function that decays at infinity and has at
/// most an integrable power-law singularity at 0. Works in s = ln x over
/// [ln lower, ln upper]; the caller supplies the window and is responsible for
/// the contributions outside it.
template <class F>
QuadratureResult integrate_log_window(F&& f, double lower, double upper,
                                      const QuadratureOptions& options = {}) {
  auto g = [&](double s) {
    const double x = std::exp(s);
    return f(x) * x;
  };
  return integrate(g, std::log(lower), std::log(upper), options);
}

}  // namespace hamlab::numeric
