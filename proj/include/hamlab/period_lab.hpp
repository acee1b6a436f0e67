#pragma once

#include <string>
#include <vector>

#include "hamlab/phase_flow.hpp"

namespace hamlab {

enum class PeriodMethod { ReturnTime, TurningPointQuadrature, AreaDerivative };

const char* to_string(PeriodMethod method);
PeriodMethod period_method_from_string(const std::string& name);

/// Sampled period function tau(E) on an increasing energy grid.
class PeriodProfile {
 public:
  PeriodProfile(std::vector<double> energies, std::vector<double> periods,
                PeriodMethod method);

  const std::vector<double>& energies() const { return energies_; }
  const std::vector<double>& periods() const { return periods_; }
  PeriodMethod method() const { return method_; }
  std::size_t size() const { return energies_.size(); }

  /// Cubic Hermite interpolation in (ln E, ln tau); power-law extrapolation
  /// past either end of the grid.
  double operator()(double E) const;

  /// Local exponent d ln tau / d ln E at the ends of the grid.
  double low_exponent() const;
  double high_exponent() const;

 private:
  double slope_at(std::size_t i) const;

  std::vector<double> energies_;
  std::vector<double> periods_;
  std::vector<double> log_e_;
  std::vector<double> log_tau_;
  PeriodMethod method_;
};

struct TurningPoints {
  double lower;
  double upper;
};

/// Roots of V(q) = E on either side of the origin; separable systems only.
TurningPoints turning_points(const HamiltonianSystem1D& system, double E);

/// First return time to the section {p = 0, q > 0} crossed downward, starting
/// from the positive-axis point of the level set. The crossing is located by
/// bisection over single Dormand-Prince steps.
double period_return_time(const HamiltonianSystem1D& system, double E,
                          double tol);

/// tau(E) = 2 int sqrt(m / (2 (E - V))) dq between the turning points, with
/// q = q_+ - s^2 (and its mirror at q_-) removing the endpoint singularities.
/// Falls back to Gauss-Chebyshev weighting if the adaptive rule stalls.
double period_quadrature(const HamiltonianSystem1D& system, double E,
                         double tol);

/// Gauss-Chebyshev evaluation of the same integral with the inverse square
/// root weight absorbed into the rule. Doubles the node count until two
/// successive estimates agree to tol.
double period_chebyshev(const HamiltonianSystem1D& system, double E,
                        double tol);

/// Phase-space area enclosed by the level set H = E, by iterated quadrature
/// in polar coordinates about the critical point.
double enclosed_area(const HamiltonianSystem1D& system, double E, double tol);

/// Central difference of enclosed_area with step 1e-4 E.
double period_area_derivative(const HamiltonianSystem1D& system, double E,
                              double tol);

double period(const HamiltonianSystem1D& system, double E, double tol,
              PeriodMethod method);

struct TimeFormSample {
  PhasePoint point;
  double t_value;
};

/// t = atan2(m w q, p) / w on the branch [0, 2 pi / w), cut along the
/// positive p axis.
double time_function_ho(double mass, double omega, const PhasePoint& point);

TimeFormSample sample_time_form_ho(double mass, double omega,
                                   const PhasePoint& point);

/// Logarithmic grid from emin to emax inclusive, per_decade points per decade.
std::vector<double> log_energy_grid(double emin, double emax,
                                    int per_decade = 33);

/// Evaluates tau on every grid energy. Grid points are independent; `workers`
/// > 1 spreads them over threads without changing the result.
PeriodProfile build_period_profile(const HamiltonianSystem1D& system,
                                   const std::vector<double>& energies,
                                   PeriodMethod method, double tol,
                                   int workers = 1);

}  // namespace hamlab
