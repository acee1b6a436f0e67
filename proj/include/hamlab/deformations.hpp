#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hamlab/phase_flow.hpp"

namespace hamlab {

/// Reparametrization of the energy axis: H_phi = f(beta0 H) / beta0.
class Deformation {
 public:
  using Fn = std::function<double(double)>;

  /// An empty `inverse` is replaced by a bracketing root solve (1e-12).
  Deformation(std::string label, Fn f, Fn derivative, Fn inverse = {},
              double beta0 = 1.0);

  const std::string& label() const { return label_; }
  double beta0() const { return beta0_; }
  double f(double x) const { return f_(x); }
  double derivative(double x) const { return derivative_(x); }
  double inverse(double y) const;
  bool has_analytic_inverse() const { return static_cast<bool>(inverse_); }

  Deformation with_beta0(double beta0) const;

 private:
  std::string label_;
  Fn f_;
  Fn derivative_;
  Fn inverse_;
  double beta0_;
};

struct ScreenResult {
  bool passed = true;
  std::vector<std::string> failures;
};

/// The registration screens: f(0) = 0, f' > 0 and f increasing on [0, 1e3],
/// f^{-1}(f(x)) = x to 1e-10, and f unbounded above (otherwise
/// exp(-beta H_phi) does not decay and Z_phi diverges).
ScreenResult screen_deformation(const Deformation& d);

/// Registry of screened deformations, keyed by label.
class DeformationCatalog {
 public:
  /// identity, quadratic (x + x^2), exp_ramp (e^x - 1), log1p (ln(1 + x)),
  /// scaled (2x).
  static DeformationCatalog builtin(double beta0 = 1.0);

  /// Throws LabError(InvariantViolation) listing the failed screens.
  void add(Deformation d);
  const Deformation& at(const std::string& label) const;
  bool contains(const std::string& label) const;
  std::vector<std::string> labels() const;

 private:
  std::map<std::string, Deformation> entries_;
};

/// Builds any known deformation by label, including entries that the screen
/// rejects ("tanh"). Unknown labels throw with the list of known ones.
Deformation make_deformation(const std::string& label, double beta0 = 1.0);
std::vector<std::string> known_deformations();

/// beta0^{-1} f(beta0 H)
double deform_energy(const Deformation& d, double energy);

/// dH_phi/dH = f'(beta0 H): the density of Omega_phi = dH_phi ^ dt against
/// Omega = dH ^ dt.
double deformed_volume_density(const Deformation& d, double energy);

/// (q, p) -> (q (1 + phi), p (1 + phi)) with phi = f(beta0 H),
/// H = (p^2 + q^2)/2 (unit mass and frequency).
class CoordinateChange {
 public:
  explicit CoordinateChange(Deformation base) : base_(std::move(base)) {}

  const Deformation& base() const { return base_; }

  double phi(double energy) const { return base_.f(base_.beta0() * energy); }
  /// d phi / dH
  double phi_prime(double energy) const {
    return base_.beta0() * base_.derivative(base_.beta0() * energy);
  }

  PhasePoint forward(const PhasePoint& x) const;
  /// H' = (1 + phi)^2 H = (P^2 + Q^2)/2
  double transformed_energy(double energy) const;
  /// F(H) = (1 + phi)(1 + phi + 2 H phi') = dH'/dH; Omega' = F(H) dp ^ dq.
  double jacobian(double energy) const;

 private:
  Deformation base_;
};

PhasePoint coordinate_change_apply(const CoordinateChange& change,
                                   const PhasePoint& x);

}  // namespace hamlab
