#pragma once

#include <algorithm>
#include <cmath>

#include "hamlab/error.hpp"

namespace hamlab::numeric {

template <class State>
struct DopriStep {
  State y;
  State error;
};

/// One Dormand-Prince 5(4) step of an autonomous system. `error` is the
/// difference between the embedded 5th and 4th order solutions.
template <class Rhs, class State>
DopriStep<State> dopri_step(Rhs&& rhs, const State& y, double h) {
  const State k1 = rhs(y);
  const State k2 = rhs(State(y + h * (1.0 / 5.0) * k1));
  const State k3 = rhs(State(y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2)));
  const State k4 = rhs(State(
      y + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3)));
  const State k5 = rhs(State(
      y + h * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 +
               64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4)));
  const State k6 = rhs(State(
      y + h * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 +
               46732.0 / 5247.0 * k3 + 49.0 / 176.0 * k4 -
               5103.0 / 18656.0 * k5)));
  const State y5 =
      y + h * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 + 125.0 / 192.0 * k4 -
               2187.0 / 6784.0 * k5 + 11.0 / 84.0 * k6);
  const State k7 = rhs(y5);
  const State err =
      h * ((35.0 / 384.0 - 5179.0 / 57600.0) * k1 +
           (500.0 / 1113.0 - 7571.0 / 16695.0) * k3 +
           (125.0 / 192.0 - 393.0 / 640.0) * k4 +
           (-2187.0 / 6784.0 + 92097.0 / 339200.0) * k5 +
           (11.0 / 84.0 - 187.0 / 2100.0) * k6 + (-1.0 / 40.0) * k7);
  return {y5, err};
}

struct AdaptiveOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double initial_step = 1e-3;
  long max_steps = 5'000'000;
};

/// Adaptive integration from t0 to t1. After every accepted step the
/// observer is called as observer(t_prev, y_prev, h, t, y) and may return
/// false to stop early. Returns the number of accepted steps.
template <class Rhs, class State, class Observer>
long run_adaptive(Rhs&& rhs, State y, double t0, double t1,
                  const AdaptiveOptions& options, Observer&& observer) {
  double t = t0;
  double h = std::min(options.initial_step, t1 - t0);
  long accepted = 0;
  for (long step = 0; step < options.max_steps && t < t1; ++step) {
    h = std::min(h, t1 - t);
    const auto trial = dopri_step(rhs, y, h);
    double norm = 0.0;
    for (int i = 0; i < y.size(); ++i) {
      const double scale =
          options.abs_tol +
          options.rel_tol * std::max(std::abs(y[i]), std::abs(trial.y[i]));
      norm = std::max(norm, std::abs(trial.error[i]) / scale);
    }
    if (!std::isfinite(norm)) norm = 1e10;
    if (norm <= 1.0) {
      const State previous = y;
      const double t_prev = t;
      t = (h == t1 - t) ? t1 : t + h;
      y = trial.y;
      ++accepted;
      if (!observer(t_prev, previous, h, t, y)) return accepted;
    }
    const double factor =
        norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
    h *= norm <= 1.0 ? factor : std::min(factor, 1.0);
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      throw LabError(ErrorKind::Stiffness, "step size underflow at t=" +
                                               std::to_string(t));
    }
  }
  if (t < t1) {
    throw LabError(ErrorKind::Stiffness, "step budget exhausted at t=" +
                                             std::to_string(t));
  }
  return accepted;
}

}  // namespace hamlab::numeric
