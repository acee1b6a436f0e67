#pragma once

#include <array>
#include <cmath>
#include <limits>

namespace hamlab::numeric {

struct DerivativeEstimate {
  double value;
  double error;
};

/// Ridders' polynomial extrapolation of central differences.
template <class F>
DerivativeEstimate ridders_derivative(F&& f, double x, double h) {
  constexpr int kTable = 10;
  constexpr double kShrink = 1.4;
  constexpr double kShrink2 = kShrink * kShrink;
  std::array<std::array<double, kTable>, kTable> a{};
  a[0][0] = (f(x + h) - f(x - h)) / (2.0 * h);
  DerivativeEstimate best{a[0][0], std::numeric_limits<double>::max()};
  for (int i = 1; i < kTable; ++i) {
    h /= kShrink;
    a[0][i] = (f(x + h) - f(x - h)) / (2.0 * h);
    double factor = kShrink2;
    for (int j = 1; j <= i; ++j) {
      a[j][i] = (a[j - 1][i] * factor - a[j - 1][i - 1]) / (factor - 1.0);
      factor *= kShrink2;
      const double err = std::max(std::abs(a[j][i] - a[j - 1][i]),
                                  std::abs(a[j][i] - a[j - 1][i - 1]));
      if (err <= best.error) best = {a[j][i], err};
    }
    if (std::abs(a[i][i] - a[i - 1][i - 1]) >= 2.0 * best.error) break;
  }
  return best;
}

}  // namespace hamlab::numeric
