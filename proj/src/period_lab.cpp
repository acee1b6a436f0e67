#include "hamlab/period_lab.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

#include "hamlab/numeric/ode.hpp"
#include "hamlab/numeric/quadrature.hpp"
#include "hamlab/numeric/roots.hpp"

namespace hamlab {

const char* to_string(PeriodMethod method) {
  switch (method) {
    case PeriodMethod::ReturnTime: return "return_time";
    case PeriodMethod::TurningPointQuadrature: return "turning_point_quadrature";
    case PeriodMethod::AreaDerivative: return "area_derivative";
  }
  return "?";
}

PeriodMethod period_method_from_string(const std::string& name) {
  if (name == "return_time") return PeriodMethod::ReturnTime;
  if (name == "turning_point_quadrature" || name == "quadrature") {
    return PeriodMethod::TurningPointQuadrature;
  }
  if (name == "area_derivative") return PeriodMethod::AreaDerivative;
  throw LabError(ErrorKind::InvalidArgument,
                 "unknown period method '" + name +
                     "'; available: return_time turning_point_quadrature "
                     "area_derivative");
}

// ---------------------------------------------------------------------------
// PeriodProfile

PeriodProfile::PeriodProfile(std::vector<double> energies,
                             std::vector<double> periods, PeriodMethod method)
    : energies_(std::move(energies)),
      periods_(std::move(periods)),
      method_(method) {
  if (energies_.empty() || energies_.size() != periods_.size()) {
    throw LabError(ErrorKind::InvariantViolation,
                   "profile needs equal-length, nonempty lists");
  }
  for (std::size_t i = 0; i < energies_.size(); ++i) {
    if (!(energies_[i] > 0.0) || (i > 0 && !(energies_[i] > energies_[i - 1]))) {
      throw LabError(ErrorKind::InvariantViolation,
                     "profile energies must be positive and increasing");
    }
    if (!(periods_[i] > 0.0) || !std::isfinite(periods_[i])) {
      throw LabError(ErrorKind::InvariantViolation,
                     "profile periods must be finite and positive");
    }
    log_e_.push_back(std::log(energies_[i]));
    log_tau_.push_back(std::log(periods_[i]));
  }
}

double PeriodProfile::slope_at(std::size_t i) const {
  const std::size_t n = log_e_.size();
  if (n == 1) return 0.0;
  auto secant = [&](std::size_t k) {
    return (log_tau_[k + 1] - log_tau_[k]) / (log_e_[k + 1] - log_e_[k]);
  };
  if (n == 2) return secant(0);
  if (i == 0) {
    const double h0 = log_e_[1] - log_e_[0], h1 = log_e_[2] - log_e_[1];
    return ((2.0 * h0 + h1) * secant(0) - h0 * secant(1)) / (h0 + h1);
  }
  if (i == n - 1) {
    const double h0 = log_e_[n - 2] - log_e_[n - 3];
    const double h1 = log_e_[n - 1] - log_e_[n - 2];
    return ((2.0 * h1 + h0) * secant(n - 2) - h1 * secant(n - 3)) / (h0 + h1);
  }
  const double h0 = log_e_[i] - log_e_[i - 1], h1 = log_e_[i + 1] - log_e_[i];
  return (h0 * secant(i) + h1 * secant(i - 1)) / (h0 + h1);
}

double PeriodProfile::low_exponent() const { return slope_at(0); }
double PeriodProfile::high_exponent() const { return slope_at(size() - 1); }

double PeriodProfile::operator()(double E) const {
  if (!(E > 0.0)) {
    throw LabError(ErrorKind::InvalidArgument, "profile queried at E <= 0");
  }
  const double x = std::log(E);
  const std::size_t n = log_e_.size();
  if (x <= log_e_.front()) {
    return std::exp(log_tau_.front() + low_exponent() * (x - log_e_.front()));
  }
  if (x >= log_e_.back()) {
    return std::exp(log_tau_.back() + high_exponent() * (x - log_e_.back()));
  }
  const auto it = std::upper_bound(log_e_.begin(), log_e_.end(), x);
  const std::size_t i = std::min<std::size_t>(it - log_e_.begin(), n - 1) - 1;
  const double h = log_e_[i + 1] - log_e_[i];
  const double t = (x - log_e_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double y = (2 * t3 - 3 * t2 + 1) * log_tau_[i] +
                   (t3 - 2 * t2 + t) * h * slope_at(i) +
                   (-2 * t3 + 3 * t2) * log_tau_[i + 1] +
                   (t3 - t2) * h * slope_at(i + 1);
  return std::exp(y);
}

// ---------------------------------------------------------------------------
// Periods

TurningPoints turning_points(const HamiltonianSystem1D& system, double E) {
  const auto& parts = system.separable_parts();
  if (!(E > 0.0)) {
    throw LabError(ErrorKind::NonCompactLevelSet,
                   "energy must be above the minimum");
  }
  auto g = [&](double q) { return parts.potential(q) - E; };
  const auto right = numeric::bracket_outward(g, 0.0, 1e-3);
  const auto left = numeric::bracket_outward(g, 0.0, -1e-3);
  if (!right || !left) {
    throw LabError(ErrorKind::NonCompactLevelSet,
                   "no turning points at E=" + std::to_string(E));
  }
  return {*numeric::brent_root(g, left->first, left->second),
          *numeric::brent_root(g, right->first, right->second)};
}

double period_return_time(const HamiltonianSystem1D& system, double E,
                          double tol) {
  const double q0 = system.positive_axis_crossing(E);
  const PhasePoint start(q0, 0.0);
  const auto field = hamiltonian_vector_field(system);
  auto rhs = [&field](const Eigen::Vector2d& y) -> Eigen::Vector2d {
    return field(y);
  };

  numeric::AdaptiveOptions options;
  options.rel_tol = std::max(1e-2 * tol, 1e-15);
  options.abs_tol = options.rel_tol * std::max(q0, 1e-300);
  options.initial_step = 1e-4;
  options.max_steps = 2'000'000;

  double event = -1.0;
  numeric::run_adaptive(
      rhs, Eigen::Vector2d(start), 0.0, 1e9, options,
      [&](double t_prev, const Eigen::Vector2d& y_prev, double h, double,
          const Eigen::Vector2d& y) {
        if (!(y_prev[1] > 0.0 && y[1] <= 0.0 && y[0] > 0.0)) return true;
        double lo = 0.0, hi = h;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (!(mid > lo && mid < hi)) break;
          const auto trial = numeric::dopri_step(rhs, y_prev, mid);
          (trial.y[1] > 0.0 ? lo : hi) = mid;
        }
        event = t_prev + 0.5 * (lo + hi);
        return false;
      });
  if (!(event > 0.0)) {
    throw LabError(ErrorKind::NotConverged,
                   "orbit did not return to the section at E=" +
                       std::to_string(E));
  }
  return event;
}

double period_chebyshev(const HamiltonianSystem1D& system, double E,
                        double tol) {
  const auto& parts = system.separable_parts();
  const auto tp = turning_points(system, E);
  const double center = 0.5 * (tp.upper + tp.lower);
  const double half = 0.5 * (tp.upper - tp.lower);
  const double prefactor = 2.0 * std::sqrt(0.5 * system.mass());
  auto estimate = [&](int nodes) {
    double sum = 0.0;
    for (int k = 1; k <= nodes; ++k) {
      const double x = std::cos((2.0 * k - 1.0) * std::numbers::pi / (2.0 * nodes));
      const double q = center + half * x;
      const double gap = E - parts.potential(q);
      sum += std::sqrt(half * half * (1.0 - x * x) / gap);
    }
    return prefactor * std::numbers::pi / nodes * sum;
  };
  double previous = estimate(16);
  for (int nodes = 32; nodes <= (1 << 20); nodes *= 2) {
    const double current = estimate(nodes);
    if (std::abs(current - previous) <= tol * std::abs(current)) return current;
    previous = current;
  }
  throw LabError(ErrorKind::NotConverged,
                 "Gauss-Chebyshev period did not converge at E=" +
                     std::to_string(E));
}

double period_quadrature(const HamiltonianSystem1D& system, double E,
                         double tol) {
  if (!system.separable()) {
    throw LabError(ErrorKind::MethodUnavailable,
                   system.label() + " is not separable; use return_time");
  }
  const auto& parts = system.separable_parts();
  const auto tp = turning_points(system, E);
  const double root_half_mass = std::sqrt(0.5 * system.mass());

  // On [0, q+]: q = q+ - s^2, dq = 2 s ds, and the integrand stays bounded.
  auto right = [&](double s) {
    const double gap = E - parts.potential(tp.upper - s * s);
    return 2.0 * s * root_half_mass / std::sqrt(gap);
  };
  auto left = [&](double s) {
    const double gap = E - parts.potential(tp.lower + s * s);
    return 2.0 * s * root_half_mass / std::sqrt(gap);
  };
  const numeric::QuadratureOptions options{0.0, tol, 2000};
  const auto r = numeric::integrate(right, 0.0, std::sqrt(tp.upper), options);
  const auto l = numeric::integrate(left, 0.0, std::sqrt(-tp.lower), options);
  if (!r.converged || !l.converged) return period_chebyshev(system, E, tol);
  return 2.0 * (r.value + l.value);
}

double enclosed_area(const HamiltonianSystem1D& system, double E, double tol) {
  if (!(E > 0.0)) {
    throw LabError(ErrorKind::NonCompactLevelSet,
                   "energy must be above the minimum");
  }
  auto radius = [&](double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    auto g = [&](double r) { return system.energy(PhasePoint(r * c, r * s)) - E; };
    const auto bracket = numeric::bracket_outward(g, 0.0, 1e-3);
    if (!bracket) {
      throw LabError(ErrorKind::NonCompactLevelSet,
                     "level set unbounded along theta=" + std::to_string(theta));
    }
    return *numeric::brent_root(g, bracket->first, bracket->second);
  };
  const auto result = numeric::integrate_2d(
      [](double, double r) { return r; }, 0.0, 2.0 * std::numbers::pi,
      [](double) { return 0.0; }, radius,
      numeric::QuadratureOptions{0.0, tol, 2000});
  if (!result.converged) {
    throw LabError(ErrorKind::NotConverged,
                   "area quadrature stalled at E=" + std::to_string(E));
  }
  return result.value;
}

double period_area_derivative(const HamiltonianSystem1D& system, double E,
                              double tol) {
  const double h = 1e-4 * E;
  const double area_tol = std::min(tol, 1e-13);
  return (enclosed_area(system, E + h, area_tol) -
          enclosed_area(system, E - h, area_tol)) /
         (2.0 * h);
}

double period(const HamiltonianSystem1D& system, double E, double tol,
              PeriodMethod method) {
  switch (method) {
    case PeriodMethod::ReturnTime: return period_return_time(system, E, tol);
    case PeriodMethod::TurningPointQuadrature:
      return period_quadrature(system, E, tol);
    case PeriodMethod::AreaDerivative:
      return period_area_derivative(system, E, tol);
  }
  throw LabError(ErrorKind::InvalidArgument, "unknown period method");
}

double time_function_ho(double mass, double omega, const PhasePoint& point) {
  if (point[0] == 0.0 && point[1] == 0.0) {
    throw LabError(ErrorKind::CriticalPoint,
                   "time function undefined at the origin");
  }
  double angle = std::atan2(mass * omega * point[0], point[1]);
  if (angle < 0.0) angle += 2.0 * std::numbers::pi;
  if (angle >= 2.0 * std::numbers::pi) angle = 0.0;
  return angle / omega;
}

TimeFormSample sample_time_form_ho(double mass, double omega,
                                   const PhasePoint& point) {
  return {point, time_function_ho(mass, omega, point)};
}

std::vector<double> log_energy_grid(double emin, double emax, int per_decade) {
  if (!(emin > 0.0) || !(emax > emin) || per_decade < 1) {
    throw LabError(ErrorKind::InvalidArgument,
                   "grid needs 0 < emin < emax and per_decade >= 1");
  }
  const double decades = std::log10(emax / emin);
  const int intervals =
      std::max(1, static_cast<int>(std::ceil(decades * per_decade - 1e-9)));
  std::vector<double> grid(intervals + 1);
  for (int i = 0; i <= intervals; ++i) {
    grid[i] = emin * std::pow(10.0, decades * i / intervals);
  }
  grid.front() = emin;
  grid.back() = emax;
  return grid;
}

PeriodProfile build_period_profile(const HamiltonianSystem1D& system,
                                   const std::vector<double>& energies,
                                   PeriodMethod method, double tol,
                                   int workers) {
  std::vector<double> periods(energies.size());
  std::vector<std::exception_ptr> failures(energies.size());
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < energies.size(); i += stride) {
      try {
        periods[i] = period(system, energies[i], tol, method);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const std::size_t count =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1,
                              std::max<std::size_t>(energies.size(), 1));
  if (count == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < count; ++w) threads.emplace_back(work, w, count);
    for (auto& t : threads) t.join();
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return PeriodProfile(energies, std::move(periods), method);
}

}  // namespace hamlab
