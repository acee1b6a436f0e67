#pragma once

// Finite-dimensional quantum mechanics with a choice of Hermitian structure
// <x, y>_G = x^dagger G y. Units with hbar = 1.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hamlab/error.hpp"

namespace hamlab::quantum {

template <typename Real>
struct Types {
  using Complex = std::complex<Real>;
  using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
  using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
};

namespace detail {

template <typename Matrix>
double scale_of(const Matrix& m) {
  return std::max(1.0, static_cast<double>(m.cwiseAbs().maxCoeff()));
}

template <typename Matrix>
double hermiticity_defect(const Matrix& m) {
  return static_cast<double>((m - m.adjoint()).cwiseAbs().maxCoeff());
}

}  // namespace detail

template <typename Real>
class HermitianStructure {
 public:
  using Matrix = typename Types<Real>::Matrix;
  using Vector = typename Types<Real>::Vector;
  using Complex = typename Types<Real>::Complex;

  explicit HermitianStructure(Matrix metric) : g_(std::move(metric)) {
    if (g_.rows() == 0 || g_.rows() != g_.cols()) {
      throw LabError(ErrorKind::InvalidArgument, "metric must be square");
    }
    if (detail::hermiticity_defect(g_) > 1e-12 * detail::scale_of(g_)) {
      throw LabError(ErrorKind::InvariantViolation, "metric is not Hermitian");
    }
    g_ = (0.5 * (g_ + g_.adjoint())).eval();
    llt_.compute(g_);
    if (llt_.info() != Eigen::Success) {
      throw LabError(ErrorKind::InvariantViolation,
                     "metric is not positive-definite");
    }
  }

  static HermitianStructure standard(Eigen::Index n) {
    return HermitianStructure(Matrix::Identity(n, n));
  }

  Eigen::Index dimension() const { return g_.rows(); }
  const Matrix& metric() const { return g_; }

  Complex inner(const Vector& x, const Vector& y) const { return x.dot(g_ * y); }
  Real norm(const Vector& x) const { return std::sqrt(std::real(inner(x, x))); }

  /// G = L L^dagger; S = L^dagger maps the structure to the standard one.
  Matrix lower_factor() const { return llt_.matrixL(); }
  Matrix to_standard() const { return llt_.matrixU(); }
  Matrix from_standard() const {
    return llt_.matrixU().solve(Matrix::Identity(dimension(), dimension()));
  }

  /// Columns form a G-orthonormal basis: B^dagger G B = 1 with B = L^{-dagger}.
  Matrix orthonormal_basis() const { return from_standard(); }

 private:
  Matrix g_;
  Eigen::LLT<Matrix> llt_;
};

/// Real coordinates of a state: psi = (q + i p) / sqrt(2).
template <typename Real>
struct RealizedState {
  typename Types<Real>::RealVector q;
  typename Types<Real>::RealVector p;

  static RealizedState from_complex(const typename Types<Real>::Vector& psi) {
    const Real root2 = std::sqrt(Real(2));
    return {root2 * psi.real(), root2 * psi.imag()};
  }

  typename Types<Real>::Vector to_complex() const {
    using Complex = typename Types<Real>::Complex;
    const Real root2 = std::sqrt(Real(2));
    typename Types<Real>::Vector psi(q.size());
    for (Eigen::Index k = 0; k < q.size(); ++k) {
      psi[k] = Complex(q[k], p[k]) / root2;
    }
    return psi;
  }
};

template <typename Real>
class QuantumSystem {
 public:
  using Matrix = typename Types<Real>::Matrix;
  using Vector = typename Types<Real>::Vector;
  using RealVector = typename Types<Real>::RealVector;
  using Complex = typename Types<Real>::Complex;

  /// Requires G H = H^dagger G (H self-adjoint for the structure).
  QuantumSystem(Matrix hamiltonian, HermitianStructure<Real> structure)
      : h_(std::move(hamiltonian)), structure_(std::move(structure)) {
    if (h_.rows() != structure_.dimension() || h_.cols() != h_.rows()) {
      throw LabError(ErrorKind::InvalidArgument,
                     "Hamiltonian and metric dimensions differ");
    }
    const Matrix& g = structure_.metric();
    const double defect = static_cast<double>(
        (g * h_ - h_.adjoint() * g).cwiseAbs().maxCoeff());
    if (defect > 1e-10 * detail::scale_of(g) * detail::scale_of(h_)) {
      throw LabError(ErrorKind::InvariantViolation,
                     "Hamiltonian is not self-adjoint for this structure");
    }
    // K = S H S^{-1} is Hermitian; diagonalize it.
    s_ = structure_.to_standard();
    s_inv_ = structure_.from_standard();
    Matrix k = s_ * h_ * s_inv_;
    k = (0.5 * (k + k.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(k);
    if (solver.info() != Eigen::Success) {
      throw LabError(ErrorKind::NotConverged, "eigendecomposition failed");
    }
    spectrum_ = solver.eigenvalues();
    eigvecs_ = solver.eigenvectors();
  }

  explicit QuantumSystem(Matrix hamiltonian)
      : QuantumSystem(hamiltonian,
                      HermitianStructure<Real>::standard(hamiltonian.rows())) {}

  Eigen::Index dimension() const { return h_.rows(); }
  const Matrix& hamiltonian() const { return h_; }
  const HermitianStructure<Real>& structure() const { return structure_; }
  const RealVector& spectrum() const { return spectrum_; }

  /// F(H) = S^{-1} U F(Lambda) U^dagger S for F applied to the spectrum.
  template <typename Fn>
  Matrix apply_function(Fn&& fn) const {
    Vector values(spectrum_.size());
    for (Eigen::Index k = 0; k < spectrum_.size(); ++k) {
      values[k] = Complex(fn(spectrum_[k]));
    }
    return s_inv_ * eigvecs_ * values.asDiagonal() * eigvecs_.adjoint() * s_;
  }

  Matrix propagator(Real t) const {
    return apply_function(
        [t](Real e) { return std::exp(Complex(0, -e * t)); });
  }

  Matrix boltzmann(Real beta) const {
    return apply_function([beta](Real e) { return Complex(std::exp(-beta * e)); });
  }

 private:
  Matrix h_;
  HermitianStructure<Real> structure_;
  Matrix s_;
  Matrix s_inv_;
  RealVector spectrum_;
  Matrix eigvecs_;
};

/// <psi, A psi> in the system's structure.
template <typename Real>
typename Types<Real>::Complex expectation(const QuantumSystem<Real>& system,
                                          const typename Types<Real>::Matrix& op,
                                          const typename Types<Real>::Vector& psi) {
  return system.structure().inner(psi, op * psi);
}

/// f_H(psi) = <psi, H psi>, real for a self-adjoint H.
template <typename Real>
Real quadratic_functional(const QuantumSystem<Real>& system,
                          const typename Types<Real>::Vector& psi) {
  return std::real(expectation(system, system.hamiltonian(), psi));
}

template <typename Real>
typename Types<Real>::Vector schrodinger_flow(
    const QuantumSystem<Real>& system, const typename Types<Real>::Vector& psi,
    Real t) {
  if (!std::isfinite(t)) {
    throw LabError(ErrorKind::InvalidArgument, "t must be finite");
  }
  return system.propagator(t) * psi;
}

/// Max over the 2n real components of the difference between the Schrödinger
/// velocity (dq/dt, dp/dt) and the Hamiltonian vector field of
/// f_H(q, p) for the structure's symplectic form, with the gradient of f_H
/// taken by central differences. For G = 1 the field is (df/dp, -df/dq).
template <typename Real>
Real hamilton_form_check(const QuantumSystem<Real>& system,
                         const typename Types<Real>::Vector& psi,
                         Real step = Real(1e-5)) {
  using Vector = typename Types<Real>::Vector;
  using RealVector = typename Types<Real>::RealVector;
  using Complex = typename Types<Real>::Complex;
  if (psi.norm() == Real(0)) {
    throw LabError(ErrorKind::InvalidArgument, "state must be nonzero");
  }
  const auto n = psi.size();
  const Vector velocity = Complex(0, -1) * (system.hamiltonian() * psi);
  const auto flow = RealizedState<Real>::from_complex(velocity);

  const auto base = RealizedState<Real>::from_complex(psi);
  auto f = [&](const RealVector& q, const RealVector& p) {
    return quadratic_functional(system, RealizedState<Real>{q, p}.to_complex());
  };
  RealVector grad_q(n), grad_p(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    RealVector plus = base.q, minus = base.q;
    plus[k] += step;
    minus[k] -= step;
    grad_q[k] = (f(plus, base.p) - f(minus, base.p)) / (2 * step);
    plus = base.p;
    minus = base.p;
    plus[k] += step;
    minus[k] -= step;
    grad_p[k] = (f(base.q, plus) - f(base.q, minus)) / (2 * step);
  }
  // (grad_q + i grad_p)/sqrt(2) = G H psi, so the field is -i G^{-1} of it.
  Vector combined(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    combined[k] = Complex(grad_q[k], grad_p[k]) / std::sqrt(Real(2));
  }
  const Vector field =
      Complex(0, -1) * system.structure().metric().ldlt().solve(combined);
  const auto predicted = RealizedState<Real>::from_complex(field);
  return std::max((flow.q - predicted.q).cwiseAbs().maxCoeff(),
                  (flow.p - predicted.p).cwiseAbs().maxCoeff());
}

/// max over t of | ||psi(t)||_G - ||psi(0)||_G |.
template <typename Real>
Real norm_drift(const QuantumSystem<Real>& system,
                const typename Types<Real>::Vector& psi,
                const std::vector<Real>& times) {
  const Real initial = system.structure().norm(psi);
  Real worst = 0;
  for (Real t : times) {
    worst = std::max(worst, std::abs(system.structure().norm(
                                         schrodinger_flow(system, psi, t)) -
                                     initial));
  }
  return worst;
}

/// || U^dagger G U - G ||_max for the flow U = exp(-i H t).
template <typename Real>
Real flow_preservation_residual(const typename Types<Real>::Matrix& hamiltonian,
                                const HermitianStructure<Real>& structure,
                                Real t = Real(1)) {
  const QuantumSystem<Real> standard(hamiltonian);
  const auto u = standard.propagator(t);
  const auto& g = structure.metric();
  return (u.adjoint() * g * u - g).cwiseAbs().maxCoeff();
}

/// G = V diag(w) V^dagger in the eigenbasis V of H (H Hermitian,
/// nondegenerate). Validated by flow preservation to 1e-10.
template <typename Real>
HermitianStructure<Real> structure_from_weights(
    const typename Types<Real>::Matrix& hamiltonian,
    const typename Types<Real>::RealVector& weights) {
  using Matrix = typename Types<Real>::Matrix;
  if (detail::hermiticity_defect(hamiltonian) >
      1e-12 * detail::scale_of(hamiltonian)) {
    throw LabError(ErrorKind::InvariantViolation,
                   "Hamiltonian is not Hermitian in the standard structure");
  }
  if (weights.size() != hamiltonian.rows() || !(weights.minCoeff() > 0)) {
    throw LabError(ErrorKind::InvalidArgument,
                   "need one positive weight per dimension");
  }
  const Eigen::SelfAdjointEigenSolver<Matrix> solver(hamiltonian);
  const auto& e = solver.eigenvalues();
  const double gap_floor = 1e-8 * detail::scale_of(hamiltonian);
  for (Eigen::Index k = 1; k < e.size(); ++k) {
    if (e[k] - e[k - 1] < gap_floor) {
      throw LabError(ErrorKind::MethodUnavailable,
                     "degenerate spectrum: commutant is not diagonal");
    }
  }
  const Matrix& v = solver.eigenvectors();
  Matrix g = v * weights.template cast<typename Types<Real>::Complex>()
                     .asDiagonal() *
             v.adjoint();
  g = (0.5 * (g + g.adjoint())).eval();
  HermitianStructure<Real> structure(g);
  if (flow_preservation_residual(hamiltonian, structure) >
      1e-10 * weights.maxCoeff()) {
    throw LabError(ErrorKind::InvariantViolation,
                   "structure is not preserved by the flow");
  }
  return structure;
}

/// `count` structures with weights log-uniform in [1/4, 4].
template <typename Real>
std::vector<HermitianStructure<Real>> alternative_structures(
    const typename Types<Real>::Matrix& hamiltonian, int count,
    std::uint64_t seed) {
  if (count < 0) throw LabError(ErrorKind::InvalidArgument, "count < 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_weight(std::log(0.25),
                                                    std::log(4.0));
  std::vector<HermitianStructure<Real>> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    typename Types<Real>::RealVector w(hamiltonian.rows());
    for (Eigen::Index k = 0; k < w.size(); ++k) w[k] = Real(std::exp(log_weight(rng)));
    out.push_back(structure_from_weights<Real>(hamiltonian, w));
  }
  return out;
}

template <typename Real>
struct TraceReport {
  std::vector<Real> values;
  Real max_spread = 0;  // (max - min) / |min|
};

/// sum_n <b_n, exp(-beta H) b_n>_G over a G-orthonormal basis, per structure.
template <typename Real>
TraceReport<Real> trace_invariance(
    const typename Types<Real>::Matrix& hamiltonian,
    const std::vector<HermitianStructure<Real>>& structures, Real beta) {
  if (!std::isfinite(beta)) {
    throw LabError(ErrorKind::InvalidArgument, "beta must be finite");
  }
  TraceReport<Real> report;
  for (const auto& structure : structures) {
    const QuantumSystem<Real> system(hamiltonian, structure);
    const auto op = system.boltzmann(beta);
    const auto basis = structure.orthonormal_basis();
    typename Types<Real>::Complex sum = 0;
    for (Eigen::Index n = 0; n < basis.cols(); ++n) {
      sum += structure.inner(basis.col(n), op * basis.col(n));
    }
    report.values.push_back(std::real(sum));
  }
  if (!report.values.empty()) {
    const auto [lo, hi] =
        std::minmax_element(report.values.begin(), report.values.end());
    report.max_spread = (*hi - *lo) / std::abs(*lo);
  }
  return report;
}

/// Named test Hamiltonians: "diag2" = diag(1, 2), "diag4" = diag(1, 2, 3, 4),
/// "random_hermitian_8" = (M + M^dagger)/2 with Gaussian M from `seed`.
template <typename Real>
typename Types<Real>::Matrix test_hamiltonian(const std::string& name,
                                              std::uint64_t seed = 8) {
  using Matrix = typename Types<Real>::Matrix;
  using Complex = typename Types<Real>::Complex;
  auto diagonal = [](int n) {
    Matrix h = Matrix::Zero(n, n);
    for (int k = 0; k < n; ++k) h(k, k) = Complex(k + 1);
    return h;
  };
  if (name == "diag2") return diagonal(2);
  if (name == "diag4") return diagonal(4);
  if (name == "random_hermitian_8") {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(8, 8);
    for (Eigen::Index i = 0; i < 8; ++i)
      for (Eigen::Index j = 0; j < 8; ++j)
        m(i, j) = Complex(Real(normal(rng)), Real(normal(rng)));
    return (0.5 * (m + m.adjoint())).eval();
  }
  throw LabError(ErrorKind::InvalidArgument,
                 "unknown test system '" + name +
                     "' (known: diag2, diag4, random_hermitian_8)");
}

inline std::vector<std::string> test_hamiltonian_names() {
  return {"diag2", "diag4", "random_hermitian_8"};
}

}  // namespace hamlab::quantum
