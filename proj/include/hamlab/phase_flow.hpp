#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hamlab/error.hpp"
#include "hamlab/numeric/derivative.hpp"

namespace hamlab {

/// (q, p)
using PhasePoint = Eigen::Vector2d;

/// Norm of dH below which a phase point is treated as critical.
inline constexpr double kCriticalGradient = 1e-10;

/// H = p^2/2m + V(q). Present on systems for which turning-point quadrature
/// is available.
struct SeparableParts {
  std::function<double(double)> potential;
  std::function<double(double)> potential_slope;
};

/// A one-degree-of-freedom Hamiltonian with the critical point (the energy
/// minimum, H = 0) at the origin and compact level sets.
class HamiltonianSystem1D {
 public:
  using Energy = std::function<double(const PhasePoint&)>;
  using Gradient = std::function<Eigen::Vector2d(const PhasePoint&)>;

  /// Validates the invariants by sampling and throws
  /// LabError(InvariantViolation) when they fail.
  HamiltonianSystem1D(std::string label, double mass, Energy energy,
                      Gradient gradient,
                      std::optional<SeparableParts> separable = std::nullopt,
                      std::map<std::string, double> params = {});

  double energy(const PhasePoint& x) const { return energy_(x); }
  /// (dH/dq, dH/dp)
  Eigen::Vector2d gradient(const PhasePoint& x) const { return gradient_(x); }
  double mass() const { return mass_; }
  const std::string& label() const { return label_; }
  const std::map<std::string, double>& params() const { return params_; }
  double param(const std::string& key) const;

  bool separable() const { return separable_.has_value(); }
  const SeparableParts& separable_parts() const;

  bool is_critical(const PhasePoint& x) const {
    return gradient_(x).norm() < kCriticalGradient;
  }

  /// The point on the positive q axis with H(q, 0) = E.
  double positive_axis_crossing(double E) const;

 private:
  void validate() const;

  std::string label_;
  double mass_;
  Energy energy_;
  Gradient gradient_;
  std::optional<SeparableParts> separable_;
  std::map<std::string, double> params_;
};

/// Harmonic oscillator p^2/2m + m w^2 q^2/2.
HamiltonianSystem1D make_harmonic_oscillator(double mass, double omega);
/// p^2/2m + k4 q^4/4.
HamiltonianSystem1D make_quartic(double mass, double k4);
/// p^2/2m + m w^2 q^2/2 + k4 q^4/4.
HamiltonianSystem1D make_ho_plus_quartic(double mass, double omega, double k4);

/// Catalog lookup: "ho" (m, omega), "quartic" (m, k4),
/// "ho_plus_quartic" (m, omega, k4). Missing params default to 1.
HamiltonianSystem1D make_system(const std::string& name,
                                const std::map<std::string, double>& params);
std::vector<std::string> system_catalog();

struct VectorField2D {
  std::function<Eigen::Vector2d(const PhasePoint&)> components;

  Eigen::Vector2d operator()(const PhasePoint& x) const {
    return components(x);
  }
};

/// Gamma with i_Gamma (dp ^ dq) = -dH, i.e. (dH/dp, -dH/dq).
VectorField2D hamiltonian_vector_field(const HamiltonianSystem1D& system);

/// A scalar function on phase space. When `gradient` is empty the
/// differential is taken numerically.
struct ScalarField2D {
  std::function<double(const PhasePoint&)> value;
  std::function<Eigen::Vector2d(const PhasePoint&)> gradient;

  Eigen::Vector2d differential(const PhasePoint& x) const;
};

inline ScalarField2D energy_field(const HamiltonianSystem1D& system) {
  return {[system](const PhasePoint& x) { return system.energy(x); },
          [system](const PhasePoint& x) { return system.gradient(x); }};
}

/// max over samples of |i_Gamma Omega + dH| for Omega = w(q,p) dp ^ dq.
double verify_hamiltonian_pair(
    const VectorField2D& field,
    const std::function<double(const PhasePoint&)>& omega_density,
    const ScalarField2D& hamiltonian, std::span<const PhasePoint> samples);

/// Isotropic oscillator family H_B = (p^T B p + q^T B q)/2 with B symmetric
/// positive-definite. Phase points are stacked as (q_1..q_n, p_1..p_n).
template <typename Scalar>
class OscillatorFamilyND {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit OscillatorFamilyND(Matrix coupling) : b_(std::move(coupling)) {
    if (b_.rows() < 1 || b_.rows() != b_.cols()) {
      throw LabError(ErrorKind::InvalidArgument, "B must be square, n >= 1");
    }
    if ((b_ - b_.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12)) {
      throw LabError(ErrorKind::InvariantViolation, "B is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(b_, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0) {
      throw LabError(ErrorKind::InvariantViolation,
                     "B is not positive-definite");
    }
  }

  Eigen::Index dimension() const { return b_.rows(); }
  const Matrix& coupling() const { return b_; }

  Scalar energy(const Vector& x) const {
    const Eigen::Index n = dimension();
    const auto q = x.head(n);
    const auto p = x.tail(n);
    return Scalar(0.5) * (p.dot(b_ * p) + q.dot(b_ * q));
  }

  /// (dH/dq, dH/dp)
  Vector gradient(const Vector& x) const {
    const Eigen::Index n = dimension();
    Vector g(2 * n);
    g.head(n) = b_ * x.head(n);
    g.tail(n) = b_ * x.tail(n);
    return g;
  }

  /// The standard isotropic oscillator field dq/dt = p, dp/dt = -q, shared
  /// by every member of the family.
  static Vector standard_field(const Vector& x) {
    const Eigen::Index n = x.size() / 2;
    Vector v(x.size());
    v.head(n) = x.tail(n);
    v.tail(n) = -x.head(n);
    return v;
  }

  /// Coefficients W of the partner form Omega_B = W_ij dp_i ^ dq_j.
  const Matrix& symplectic_coefficients() const { return b_; }

  static Matrix random_spd(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Scalar(normal(rng));
    Matrix spd = m * m.transpose() + Scalar(0.5) * Matrix::Identity(n, n);
    return Scalar(0.5) * (spd + spd.transpose());
  }

 private:
  Matrix b_;
};

/// n-D version of the Hamiltonian-pair residual for a constant-coefficient
/// form Omega = W_ij dp_i ^ dq_j: max over samples of the norm of
/// (W^T Gamma_p + dH/dq, -W Gamma_q + dH/dp). When `gradient` is empty dH is
/// taken by Ridders-extrapolated central differences.
template <typename Scalar>
Scalar verify_hamiltonian_pair_nd(
    const std::function<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>(
        const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>&)>& field,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& coefficients,
    const std::function<Scalar(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>&)>&
        hamiltonian,
    const std::function<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>(
        const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>&)>& gradient,
    std::span<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> samples) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (samples.empty()) {
    throw LabError(ErrorKind::InvalidArgument, "empty sample list");
  }
  const Eigen::Index n = coefficients.rows();
  Scalar worst = 0;
  for (const Vector& x : samples) {
    if (x.size() != 2 * n) {
      throw LabError(ErrorKind::InvalidArgument, "sample dimension mismatch");
    }
    Vector dh(2 * n);
    if (gradient) {
      dh = gradient(x);
    } else {
      for (Eigen::Index i = 0; i < 2 * n; ++i) {
        auto along = [&](double s) {
          Vector y = x;
          y[i] = s;
          return static_cast<double>(hamiltonian(y));
        };
        const double h = 1e-2 * std::max(1.0, std::abs(double(x[i])));
        dh[i] = Scalar(numeric::ridders_derivative(along, double(x[i]), h).value);
      }
    }
    const Vector gamma = field(x);
    Vector residual(2 * n);
    residual.head(n) = coefficients.transpose() * gamma.tail(n) + dh.head(n);
    residual.tail(n) = -coefficients * gamma.head(n) + dh.tail(n);
    worst = std::max(worst, residual.norm());
  }
  return worst;
}

struct Trajectory {
  std::vector<double> times;
  std::vector<PhasePoint> states;
  double energy_drift = 0.0;

  const PhasePoint& final_state() const { return states.back(); }
};

/// Adaptive Dormand-Prince 5(4) integration of Hamilton's equations.
/// Guarantees energy_drift <= 10 tol max(1, H(start)) by tightening the
/// local tolerance when needed.
Trajectory integrate(const HamiltonianSystem1D& system, const PhasePoint& start,
                     double duration, double tol);

/// One kick-drift-kick leapfrog step; separable systems only.
PhasePoint leapfrog_step(const HamiltonianSystem1D& system,
                         const PhasePoint& x, double dt);

Trajectory integrate_leapfrog(const HamiltonianSystem1D& system,
                              const PhasePoint& start, double duration,
                              long steps);

}  // namespace hamlab
