#include "hamlab/phase_flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hamlab/numeric/ode.hpp"
#include "hamlab/numeric/roots.hpp"

namespace hamlab {

HamiltonianSystem1D::HamiltonianSystem1D(
    std::string label, double mass, Energy energy, Gradient gradient,
    std::optional<SeparableParts> separable,
    std::map<std::string, double> params)
    : label_(std::move(label)),
      mass_(mass),
      energy_(std::move(energy)),
      gradient_(std::move(gradient)),
      separable_(std::move(separable)),
      params_(std::move(params)) {
  if (!(mass_ > 0.0) || !std::isfinite(mass_)) {
    throw LabError(ErrorKind::InvalidArgument, "mass must be positive");
  }
  validate();
}

double HamiltonianSystem1D::param(const std::string& key) const {
  auto it = params_.find(key);
  if (it == params_.end()) {
    throw LabError(ErrorKind::InvalidArgument,
                   label_ + " has no parameter '" + key + "'");
  }
  return it->second;
}

const SeparableParts& HamiltonianSystem1D::separable_parts() const {
  if (!separable_) {
    throw LabError(ErrorKind::MethodUnavailable, label_ + " is not separable");
  }
  return *separable_;
}

void HamiltonianSystem1D::validate() const {
  const PhasePoint origin = PhasePoint::Zero();
  if (std::abs(energy_(origin)) > 1e-12) {
    throw LabError(ErrorKind::InvariantViolation,
                   label_ + ": energy minimum is not 0 at the origin");
  }
  if (gradient_(origin).norm() >= kCriticalGradient) {
    throw LabError(ErrorKind::InvariantViolation,
                   label_ + ": origin is not a critical point");
  }
  // Polar sampling away from the origin: no further critical points, H > 0.
  constexpr int kAngles = 24;
  for (double r : {1e-2, 1e-1, 1.0, 10.0, 100.0}) {
    for (int k = 0; k < kAngles; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / kAngles;
      const PhasePoint x(r * std::cos(theta), r * std::sin(theta));
      if (gradient_(x).norm() < kCriticalGradient) {
        throw LabError(ErrorKind::InvariantViolation,
                       label_ + ": extra critical point near r=" +
                           std::to_string(r));
      }
      if (!(energy_(x) > 0.0)) {
        throw LabError(ErrorKind::InvariantViolation,
                       label_ + ": energy not positive off the origin");
      }
    }
  }
  for (double E : {1e-3, 1.0, 1e3}) positive_axis_crossing(E);
}

double HamiltonianSystem1D::positive_axis_crossing(double E) const {
  if (!(E > 0.0)) {
    throw LabError(ErrorKind::NonCompactLevelSet,
                   "energy must be above the minimum");
  }
  auto g = [&](double q) { return energy_(PhasePoint(q, 0.0)) - E; };
  const auto bracket = numeric::bracket_outward(g, 0.0, 1e-3);
  if (!bracket) {
    throw LabError(ErrorKind::NonCompactLevelSet,
                   label_ + ": no turning point at E=" + std::to_string(E));
  }
  return *numeric::brent_root(g, bracket->first, bracket->second);
}

HamiltonianSystem1D make_ho_plus_quartic(double mass, double omega,
                                         double k4) {
  if (!(omega > 0.0) || !(k4 >= 0.0)) {
    throw LabError(ErrorKind::InvalidArgument,
                   "need omega > 0 and k4 >= 0");
  }
  const double spring = mass * omega * omega;
  SeparableParts parts{
      [=](double q) { return 0.5 * spring * q * q + 0.25 * k4 * q * q * q * q; },
      [=](double q) { return spring * q + k4 * q * q * q; }};
  auto energy = [=](const PhasePoint& x) {
    return 0.5 * x[1] * x[1] / mass + 0.5 * spring * x[0] * x[0] +
           0.25 * k4 * x[0] * x[0] * x[0] * x[0];
  };
  auto gradient = [=](const PhasePoint& x) {
    return Eigen::Vector2d(spring * x[0] + k4 * x[0] * x[0] * x[0],
                           x[1] / mass);
  };
  return HamiltonianSystem1D("ho_plus_quartic", mass, energy, gradient, parts,
                             {{"m", mass}, {"omega", omega}, {"k4", k4}});
}

HamiltonianSystem1D make_harmonic_oscillator(double mass, double omega) {
  if (!(omega > 0.0)) {
    throw LabError(ErrorKind::InvalidArgument, "omega must be positive");
  }
  const double spring = mass * omega * omega;
  SeparableParts parts{[=](double q) { return 0.5 * spring * q * q; },
                       [=](double q) { return spring * q; }};
  auto energy = [=](const PhasePoint& x) {
    return 0.5 * (x[1] * x[1] / mass + spring * x[0] * x[0]);
  };
  auto gradient = [=](const PhasePoint& x) {
    return Eigen::Vector2d(spring * x[0], x[1] / mass);
  };
  return HamiltonianSystem1D("ho", mass, energy, gradient, parts,
                             {{"m", mass}, {"omega", omega}});
}

HamiltonianSystem1D make_quartic(double mass, double k4) {
  if (!(k4 > 0.0)) {
    throw LabError(ErrorKind::InvalidArgument, "k4 must be positive");
  }
  SeparableParts parts{[=](double q) { return 0.25 * k4 * q * q * q * q; },
                       [=](double q) { return k4 * q * q * q; }};
  auto energy = [=](const PhasePoint& x) {
    return 0.5 * x[1] * x[1] / mass + 0.25 * k4 * x[0] * x[0] * x[0] * x[0];
  };
  auto gradient = [=](const PhasePoint& x) {
    return Eigen::Vector2d(k4 * x[0] * x[0] * x[0], x[1] / mass);
  };
  return HamiltonianSystem1D("quartic", mass, energy, gradient, parts,
                             {{"m", mass}, {"k4", k4}});
}

HamiltonianSystem1D make_system(const std::string& name,
                                const std::map<std::string, double>& params) {
  auto get = [&](const char* key) {
    auto it = params.find(key);
    return it == params.end() ? 1.0 : it->second;
  };
  if (name == "ho") return make_harmonic_oscillator(get("m"), get("omega"));
  if (name == "quartic") return make_quartic(get("m"), get("k4"));
  if (name == "ho_plus_quartic") {
    return make_ho_plus_quartic(get("m"), get("omega"), get("k4"));
  }
  std::string known;
  for (const auto& entry : system_catalog()) known += " " + entry;
  throw LabError(ErrorKind::InvalidArgument,
                 "unknown system '" + name + "'; available:" + known);
}

std::vector<std::string> system_catalog() {
  return {"ho", "quartic", "ho_plus_quartic"};
}

VectorField2D hamiltonian_vector_field(const HamiltonianSystem1D& system) {
  return {[system](const PhasePoint& x) {
    const Eigen::Vector2d dh = system.gradient(x);
    return Eigen::Vector2d(dh[1], -dh[0]);
  }};
}

Eigen::Vector2d ScalarField2D::differential(const PhasePoint& x) const {
  if (gradient) return gradient(x);
  Eigen::Vector2d d;
  for (int i = 0; i < 2; ++i) {
    auto along = [&](double s) {
      PhasePoint y = x;
      y[i] = s;
      return value(y);
    };
    d[i] = numeric::ridders_derivative(along, x[i],
                                       1e-2 * std::max(1.0, std::abs(x[i])))
               .value;
  }
  return d;
}

double verify_hamiltonian_pair(
    const VectorField2D& field,
    const std::function<double(const PhasePoint&)>& omega_density,
    const ScalarField2D& hamiltonian, std::span<const PhasePoint> samples) {
  if (samples.empty()) {
    throw LabError(ErrorKind::InvalidArgument, "empty sample list");
  }
  double worst = 0.0;
  for (const PhasePoint& x : samples) {
    // Omega = w dp^dq, so i_Gamma Omega = w (Gamma_p dq - Gamma_q dp).
    const double w = omega_density(x);
    const Eigen::Vector2d gamma = field(x);
    const Eigen::Vector2d dh = hamiltonian.differential(x);
    const Eigen::Vector2d residual(w * gamma[1] + dh[0], -w * gamma[0] + dh[1]);
    worst = std::max(worst, residual.norm());
  }
  return worst;
}

namespace {

Trajectory zero_motion(const HamiltonianSystem1D& system,
                       const PhasePoint& start, double duration) {
  (void)system;
  Trajectory trajectory;
  trajectory.times = {0.0, duration};
  trajectory.states = {start, start};
  return trajectory;
}

}  // namespace

Trajectory integrate(const HamiltonianSystem1D& system, const PhasePoint& start,
                     double duration, double tol) {
  if (!(duration > 0.0)) {
    throw LabError(ErrorKind::InvalidArgument, "duration must be positive");
  }
  if (!(tol > 1e-14 && tol < 1e-2)) {
    throw LabError(ErrorKind::InvalidArgument, "tol must lie in (1e-14, 1e-2)");
  }
  if (system.is_critical(start)) return zero_motion(system, start, duration);

  const auto field = hamiltonian_vector_field(system);
  auto rhs = [&field](const Eigen::Vector2d& y) -> Eigen::Vector2d {
    return field(y);
  };
  const double e0 = system.energy(start);
  const double drift_bound = 10.0 * tol * std::max(1.0, e0);
  const double scale = std::max(1.0, start.norm());

  double local = 0.1 * tol;
  for (int attempt = 0;; ++attempt) {
    Trajectory trajectory;
    trajectory.times.push_back(0.0);
    trajectory.states.push_back(start);
    numeric::AdaptiveOptions options;
    options.rel_tol = local;
    options.abs_tol = local * scale;
    options.initial_step = std::min(1e-2, duration);
    numeric::run_adaptive(
        rhs, Eigen::Vector2d(start), 0.0, duration, options,
        [&](double, const Eigen::Vector2d&, double, double t,
            const Eigen::Vector2d& y) {
          trajectory.times.push_back(t);
          trajectory.states.push_back(y);
          trajectory.energy_drift =
              std::max(trajectory.energy_drift, std::abs(system.energy(y) - e0));
          return true;
        });
    if (trajectory.energy_drift <= drift_bound) return trajectory;
    if (attempt == 4 || local < 1e-15) {
      throw LabError(ErrorKind::NotConverged,
                     "energy drift " + std::to_string(trajectory.energy_drift) +
                         " exceeds bound " + std::to_string(drift_bound));
    }
    local /= 10.0;
  }
}

PhasePoint leapfrog_step(const HamiltonianSystem1D& system,
                         const PhasePoint& x, double dt) {
  const auto& parts = system.separable_parts();
  const double p_half = x[1] - 0.5 * dt * parts.potential_slope(x[0]);
  const double q = x[0] + dt * p_half / system.mass();
  const double p = p_half - 0.5 * dt * parts.potential_slope(q);
  return {q, p};
}

Trajectory integrate_leapfrog(const HamiltonianSystem1D& system,
                              const PhasePoint& start, double duration,
                              long steps) {
  if (!(duration > 0.0) || steps < 1) {
    throw LabError(ErrorKind::InvalidArgument,
                   "need duration > 0 and at least one step");
  }
  const double dt = duration / static_cast<double>(steps);
  const double e0 = system.energy(start);
  Trajectory trajectory;
  trajectory.times.reserve(steps + 1);
  trajectory.states.reserve(steps + 1);
  trajectory.times.push_back(0.0);
  trajectory.states.push_back(start);
  PhasePoint x = start;
  for (long i = 1; i <= steps; ++i) {
    x = leapfrog_step(system, x, dt);
    trajectory.times.push_back(dt * static_cast<double>(i));
    trajectory.states.push_back(x);
    trajectory.energy_drift =
        std::max(trajectory.energy_drift, std::abs(system.energy(x) - e0));
  }
  return trajectory;
}

}  // namespace hamlab
