#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hamlab/deformations.hpp"
#include "hamlab/period_lab.hpp"
#include "hamlab/phase_flow.hpp"

namespace hamlab {

/// Canonical ensemble parameters with k_B = 1: only beta = 1/T appears.
struct EnsembleParams {
  double beta = 1.0;
  /// Phase-space cell; the default 2 pi makes hbar = 1.
  double h = 2.0 * std::numbers::pi;

  double hbar() const { return h / (2.0 * std::numbers::pi); }
  void validate() const;
};

enum class ZMethod {
  Direct2D,
  Shell,
  Deformed,
  Boundary,
  GaussianND,
  CoordinateChange,
};

const char* to_string(ZMethod method);

struct ZEstimate {
  double value = 0.0;
  ZMethod method = ZMethod::Direct2D;
  double error_bound = 0.0;
  std::map<std::string, double> metadata;
  std::vector<std::string> flags;

  bool has_flag(const std::string& flag) const;
};

/// h^{-1} int exp(-beta H) dq dp over a box containing the level set
/// H = E_cut; the exterior is bounded from the radial growth of H.
ZEstimate z_direct(const HamiltonianSystem1D& system,
                   const EnsembleParams& params, double tol);

/// h^{-1} int_0^inf exp(-beta E) tau(E) dE with tau read from the profile.
ZEstimate z_shell(const HamiltonianSystem1D& system,
                  const EnsembleParams& params, const PeriodProfile& profile,
                  double tol);

/// Z_phi in the (E, t) parametrization,
/// h^{-1} int exp(-beta H_phi(E)) (dH_phi/dE) tau(E) dE, cross-checked
/// against the substituted form h^{-1} int exp(-beta u) tau(E(u)) du. The
/// second value is kept in metadata["u_form"]; a mismatch above tol raises
/// the "form_mismatch" flag.
ZEstimate z_deformed(const HamiltonianSystem1D& system,
                     const Deformation& deformation,
                     const EnsembleParams& params,
                     const PeriodProfile& profile, double tol);

/// Both sides of int exp(-beta H') dP ^ dQ = int exp(-beta H) dp ^ dq for the
/// unit oscillator: first = h^{-1} int exp(-beta H'(H)) F(H) dq dp,
/// second = z_direct.
std::pair<ZEstimate, ZEstimate> z_coordinate_change(
    const CoordinateChange& change, const EnsembleParams& params, double tol);

/// -(beta h)^{-1} [exp(-beta E_max) tau(E_max) - exp(-beta eps) tau(eps)],
/// with the lower term Richardson-extrapolated over {100 eps, 10 eps, eps}.
/// When tau diverges at the critical point the raw eps value is reported and
/// the estimate carries the "diverging_period" flag.
ZEstimate z_boundary(const HamiltonianSystem1D& system,
                     const EnsembleParams& params, const PeriodProfile& profile,
                     double eps = 1e-6, std::optional<double> e_max = {});

/// Z_B = h^{-n} int exp(-beta H_B) |det B| d^n p d^n q for the n-D family.
/// The Gaussian factor comes from a Cholesky factorization and the volume
/// factor |det B| from a pivoted LU, so their cancellation is checked
/// numerically rather than assumed.
template <typename Scalar>
ZEstimate z_gaussian_nd(const OscillatorFamilyND<Scalar>& family,
                        const EnsembleParams& params) {
  using Matrix = typename OscillatorFamilyND<Scalar>::Matrix;
  params.validate();
  const Matrix& b = family.coupling();
  const Eigen::LLT<Matrix> llt(b);
  if (llt.info() != Eigen::Success) {
    throw LabError(ErrorKind::InvariantViolation, "B is not positive-definite");
  }
  const auto n = static_cast<double>(family.dimension());
  const double log_det_chol =
      2.0 * static_cast<double>(
                llt.matrixLLT().diagonal().array().log().sum());
  // Each of the q and p integrals contributes (2 pi / beta)^{n/2} det(B)^{-1/2}.
  const double log_gaussian =
      n * std::log(2.0 * std::numbers::pi / params.beta) - log_det_chol;
  const double volume =
      std::abs(static_cast<double>(b.fullPivLu().determinant()));
  const double log_z = log_gaussian + std::log(volume) - n * std::log(params.h);
  ZEstimate estimate;
  estimate.value = std::exp(log_z);
  estimate.method = ZMethod::GaussianND;
  estimate.error_bound =
      estimate.value * 64.0 * n * std::numeric_limits<double>::epsilon();
  estimate.metadata["dimension"] = n;
  estimate.metadata["log_det_cholesky"] = log_det_chol;
  estimate.metadata["abs_det_lu"] = volume;
  return estimate;
}

struct ShiftCheck {
  double ratio = 0.0;           // Z(H + c) / Z(H)
  double expected_ratio = 0.0;  // exp(-beta c)
  double energy_shift = 0.0;    // U(H + c) - U(H), U = -d ln Z / d beta
  double expected_energy_shift = 0.0;
};

ShiftCheck shift_invariance_check(const HamiltonianSystem1D& system,
                                  const EnsembleParams& params, double shift,
                                  double tol = 1e-10);

/// Z(H + c) by direct quadrature of exp(-beta (H + c)).
ZEstimate z_direct_shifted(const HamiltonianSystem1D& system,
                           const EnsembleParams& params, double shift,
                           double tol);

enum class Verdict { InvariantWithinTol, Discrepancy };
const char* to_string(Verdict verdict);

struct InvarianceCell {
  double beta = 0.0;
  std::string method;  // direct_2d, shell, boundary, deformed, ...
  std::string label;   // deformation label or empty
  std::optional<ZEstimate> estimate;
  std::string error;   // set when the estimator failed
};

struct InvarianceReport {
  std::string system_label;
  std::vector<std::string> deformation_labels;
  std::vector<double> betas;
  double tolerance = 0.0;
  std::vector<InvarianceCell> cells;
  std::map<double, double> spread_by_beta;
  double max_spread = 0.0;
  std::size_t failed_cells = 0;
  Verdict verdict = Verdict::Discrepancy;
};

struct InvarianceOptions {
  double h = 2.0 * std::numbers::pi;
  double tol = 1e-7;
  int workers = 1;
  /// Include the coordinate-change cells (unit oscillator only).
  bool coordinate_change = true;
};

/// Energy window that a period profile needs for the estimators at the given
/// inverse temperatures.
std::pair<double, double> profile_window(const std::vector<double>& betas);

/// Period profile for the estimators: turning-point quadrature when the
/// system is separable, return times otherwise.
PeriodProfile estimator_profile(const HamiltonianSystem1D& system,
                                const std::vector<double>& betas, double tol,
                                int workers = 1);

/// Every estimator at every beta: direct, shell, boundary, one deformed cell
/// per deformation and, for the unit oscillator, both coordinate-change
/// sides. The verdict is invariant_within_tol iff no cell failed and the
/// largest relative spread (max - min)/min over a beta column is <= 10 tol.
InvarianceReport run_invariance_experiment(
    const HamiltonianSystem1D& system,
    const std::vector<Deformation>& deformations,
    const std::vector<double>& betas, const InvarianceOptions& options = {});

}  // namespace hamlab
