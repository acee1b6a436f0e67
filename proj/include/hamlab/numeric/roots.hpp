#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <utility>

namespace hamlab::numeric {

/// Brent's method on a sign-changing bracket [a, b]. Returns nullopt when the
/// bracket does not change sign.
template <class F>
std::optional<double> brent_root(F&& f, double a, double b, double x_tol = 0.0,
                                 int max_iter = 200) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) return std::nullopt;
  if (std::abs(fa) < std::abs(fb)) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  double c = a, fc = fa, d = b - a;
  bool bisected = true;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < max_iter; ++it) {
    const double tol = 2.0 * eps * std::abs(b) + 0.5 * x_tol;
    if (fb == 0.0 || std::abs(b - a) <= 2.0 * tol) return b;
    double s;
    if (fa != fc && fb != fc) {
      s = a * fb * fc / ((fa - fb) * (fa - fc)) +
          b * fa * fc / ((fb - fa) * (fb - fc)) +
          c * fa * fb / ((fc - fa) * (fc - fb));
    } else {
      s = b - fb * (b - a) / (fb - fa);
    }
    const double q = (3.0 * a + b) / 4.0;
    const bool outside = !((s > std::min(q, b) && s < std::max(q, b)));
    const bool slow =
        (bisected && std::abs(s - b) >= std::abs(b - c) / 2.0) ||
        (!bisected && std::abs(s - b) >= std::abs(c - d) / 2.0) ||
        (bisected && std::abs(b - c) < tol) ||
        (!bisected && std::abs(c - d) < tol);
    if (outside || slow) {
      s = 0.5 * (a + b);
      bisected = true;
    } else {
      bisected = false;
    }
    const double fs = f(s);
    d = c;
    c = b;
    fc = fb;
    if ((fa > 0.0) == (fs > 0.0)) {
      a = s;
      fa = fs;
    } else {
      b = s;
      fb = fs;
    }
    if (std::abs(fa) < std::abs(fb)) {
      std::swap(a, b);
      std::swap(fa, fb);
    }
  }
  return b;
}

/// Walks outward from `start` by doubling the step until f changes sign.
/// Returns the bracket, or nullopt if none is found within max_doublings.
template <class F>
std::optional<std::pair<double, double>> bracket_outward(
    F&& f, double start, double step, int max_doublings = 200) {
  double x0 = start;
  double f0 = f(x0);
  for (int i = 0; i < max_doublings; ++i) {
    const double x1 = x0 + step;
    const double f1 = f(x1);
    if (!std::isfinite(f1)) return std::nullopt;
    if ((f0 > 0.0) != (f1 > 0.0) || f1 == 0.0) return std::make_pair(x0, x1);
    x0 = x1;
    f0 = f1;
    step *= 2.0;
  }
  return std::nullopt;
}

}  // namespace hamlab::numeric
