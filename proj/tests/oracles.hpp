#pragma once

// Test-only reference computations. Nothing here calls into the library's
// quadrature, root-finding or integrator code.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <Eigen/Dense>

namespace oracle {

inline double central_difference(const std::function<double(double)>& f,
                                  double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double beta_function(double a, double b) {
  return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
}

/// Period of p^2/2 + q^4/4 at energy E:
/// tau = (4E)^{1/4} B(1/4, 1/2) / sqrt(2E).
inline double quartic_period(double E) {
  return std::pow(4.0 * E, 0.25) * beta_function(0.25, 0.5) /
         std::sqrt(2.0 * E);
}

/// Area enclosed by p^2/2 + q^4/4 = E:
/// A = (4E)^{1/4} sqrt(2E) B(1/4, 3/2).
inline double quartic_area(double E) {
  return std::pow(4.0 * E, 0.25) * std::sqrt(2.0 * E) *
         beta_function(0.25, 1.5);
}

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int n) {
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

/// Brute-force 2-D Simpson on a rectangle.
inline double simpson_2d(const std::function<double(double, double)>& f,
                         double ax, double bx, double ay, double by, int n) {
  return simpson(
      [&](double x) {
        return simpson([&](double y) { return f(x, y); }, ay, by, n);
      },
      ax, bx, n);
}

/// Fixed-step classical RK4 for the 1-D system with the given field.
inline Eigen::Vector2d rk4_flow(
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& field,
    Eigen::Vector2d x, double duration, int steps) {
  const double h = duration / steps;
  for (int i = 0; i < steps; ++i) {
    const Eigen::Vector2d k1 = field(x);
    const Eigen::Vector2d k2 = field(x + 0.5 * h * k1);
    const Eigen::Vector2d k3 = field(x + 0.5 * h * k2);
    const Eigen::Vector2d k4 = field(x + h * k3);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

/// Z of p^2/2 + q^4/4 in closed form:
/// h^{-1} sqrt(2 pi / beta) Gamma(1/4) (4 / beta)^{1/4} / 2.
inline double quartic_z(double beta, double h) {
  return std::sqrt(2.0 * std::numbers::pi / beta) * std::tgamma(0.25) *
         std::pow(4.0 / beta, 0.25) / (2.0 * h);
}

/// Z of the separable p^2/2 + V(q) with the q integral by Simpson on [-L, L].
inline double separable_z(const std::function<double(double)>& potential,
                          double beta, double h, double L, int n) {
  const double q_part = simpson(
      [&](double q) { return std::exp(-beta * potential(q)); }, -L, L, n);
  return std::sqrt(2.0 * std::numbers::pi / beta) * q_part / h;
}

}  // namespace oracle
