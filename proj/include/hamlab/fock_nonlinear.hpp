#pragma once

// Truncated Fock space, nonlinear ladder operators and a second scalar
// product under which A^dagger and its new adjoint satisfy [b, b^+] = 1.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hamlab/error.hpp"

namespace hamlab::fock {

template <typename Real>
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

/// Cutoff N (basis |0>..|N-1>) and guard band g: identities involving
/// products of ladder operators are checked on n <= N - 1 - g only.
struct FockSpace {
  int cutoff = 32;
  int guard = 2;

  FockSpace() = default;
  FockSpace(int n, int g = 2) : cutoff(n), guard(g) {
    if (n < 8) throw LabError(ErrorKind::InvalidArgument, "cutoff N must be >= 8");
    if (g < 0 || g >= n) {
      throw LabError(ErrorKind::InvalidArgument, "guard band outside [0, N)");
    }
  }
  int last_checked() const { return cutoff - 1 - guard; }
};

template <typename Real>
struct LadderOps {
  FockSpace space;
  Matrix<Real> a;
  Matrix<Real> a_dagger;
  Matrix<Real> number;
};

template <typename Real>
LadderOps<Real> build_ladder(const FockSpace& space) {
  const int n = space.cutoff;
  LadderOps<Real> ops{space, Matrix<Real>::Zero(n, n), {}, Matrix<Real>::Zero(n, n)};
  for (int k = 1; k < n; ++k) ops.a(k - 1, k) = std::sqrt(Real(k));
  ops.a_dagger = ops.a.transpose();
  for (int k = 0; k < n; ++k) ops.number(k, k) = Real(k);
  return ops;
}

template <typename Real>
LadderOps<Real> build_ladder(int cutoff) {
  return build_ladder<Real>(FockSpace(cutoff));
}

template <typename Real>
Matrix<Real> commutator(const Matrix<Real>& x, const Matrix<Real>& y) {
  return x * y - y * x;
}

/// Max |entry| of m over rows and columns 0..last.
template <typename Real>
Real block_max(const Matrix<Real>& m, int last) {
  return m.topLeftCorner(last + 1, last + 1).cwiseAbs().maxCoeff();
}

/// max over t of || e^{iHt} A e^{-iHt} - e^{-it} A || on the guarded block,
/// H = n + 1/2. Entry (m, n) of the left side is A_mn e^{i(m-n)t}.
template <typename Real>
Real heisenberg_residual(const Matrix<Real>& lowering, const FockSpace& space,
                         const std::vector<Real>& times) {
  const int last = space.last_checked();
  Real worst = 0;
  for (Real t : times) {
    for (int m = 0; m <= last; ++m) {
      for (int k = 0; k <= last; ++k) {
        const std::complex<Real> evolved =
            lowering(m, k) * std::exp(std::complex<Real>(0, Real(m - k) * t));
        const std::complex<Real> expected =
            lowering(m, k) * std::exp(std::complex<Real>(0, -t));
        worst = std::max(worst, std::abs(evolved - expected));
      }
    }
  }
  return worst;
}

/// f on the nonnegative integers.
template <typename Real>
struct LadderFunction {
  std::string label;
  std::function<Real(Real)> f;
};

inline std::vector<std::string> ladder_function_labels() {
  return {"one", "one_plus_tanh", "one_plus_n", "exp_tenth"};
}

/// one: 1, one_plus_tanh: 1 + tanh n, one_plus_n: 1 + n, exp_tenth: e^{n/10}.
template <typename Real>
LadderFunction<Real> make_ladder_function(const std::string& label) {
  if (label == "one") return {label, [](Real) { return Real(1); }};
  if (label == "one_plus_tanh") {
    return {label, [](Real n) { return Real(1) + std::tanh(n); }};
  }
  if (label == "one_plus_n") return {label, [](Real n) { return Real(1) + n; }};
  if (label == "exp_tenth") {
    return {label, [](Real n) { return std::exp(n / Real(10)); }};
  }
  std::string known;
  for (const auto& l : ladder_function_labels()) known += (known.empty() ? "" : ", ") + l;
  throw LabError(ErrorKind::InvalidArgument,
                 "unknown ladder function '" + label + "' (known: " + known + ")");
}

/// f_first: A = f(n) a, so A|n> = f(n-1) sqrt(n) |n-1>.
/// f_last:  A = a f(n), so A|n> = f(n) sqrt(n) |n-1>.
enum class Ordering { FFirst, FLast };

inline const char* to_string(Ordering o) {
  return o == Ordering::FFirst ? "f_first" : "f_last";
}

inline Ordering ordering_from_string(const std::string& s) {
  if (s == "f_first") return Ordering::FFirst;
  if (s == "f_last") return Ordering::FLast;
  throw LabError(ErrorKind::InvalidArgument,
                 "unknown ordering '" + s + "' (known: f_first, f_last)");
}

template <typename Real>
struct NonlinearOps {
  FockSpace space;
  std::string label;
  Ordering ordering = Ordering::FFirst;
  std::vector<Real> f_values;  // f(0..N)
  Matrix<Real> A;
  Matrix<Real> A_dagger;  // adjoint in the first product

  Real phi(int n) const { return Real(n) * f_values[n] * f_values[n]; }
};

template <typename Real>
NonlinearOps<Real> build_nonlinear(const LadderOps<Real>& ops,
                                   const LadderFunction<Real>& f,
                                   Ordering ordering) {
  const int n = ops.space.cutoff;
  NonlinearOps<Real> out{ops.space, f.label, ordering, {}, {}, {}};
  out.f_values.resize(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    const Real v = f.f(Real(k));
    if (!(v > 0) || !std::isfinite(v)) {
      throw LabError(ErrorKind::InvalidArgument,
                     "f(" + std::to_string(k) + ") must be positive and finite");
    }
    if (k > 0 && v < out.f_values[k - 1]) {
      throw LabError(ErrorKind::InvalidArgument, "f must be nondecreasing");
    }
    out.f_values[k] = v;
  }
  Eigen::Matrix<Real, Eigen::Dynamic, 1> fn(n);
  for (int k = 0; k < n; ++k) fn[k] = out.f_values[k];
  out.A = ordering == Ordering::FFirst ? Matrix<Real>(fn.asDiagonal() * ops.a)
                                       : Matrix<Real>(ops.a * fn.asDiagonal());
  out.A_dagger = out.A.transpose();
  return out;
}

/// max |[A, A^dagger] - (Phi(n+1) - Phi(n))| on the guarded block,
/// Phi(x) = x f(x)^2, divided by max(1, largest |Phi(n+1) - Phi(n)| there).
/// Exact for f_last.
template <typename Real>
Real phi_commutator_residual(const NonlinearOps<Real>& nl) {
  const int n = nl.space.cutoff;
  const int last = nl.space.last_checked();
  Matrix<Real> expected = Matrix<Real>::Zero(n, n);
  for (int k = 0; k < n; ++k) expected(k, k) = nl.phi(k + 1) - nl.phi(k);
  const Real scale = std::max(Real(1), block_max<Real>(expected, last));
  return block_max<Real>(commutator<Real>(nl.A, nl.A_dagger) - expected, last) / scale;
}

/// <n|m>_2 = delta_nm for |n>_2 = c_n |n>_1, c_n = prod_{k<n} f(k). The
/// metric is G_2 = diag(e^{w_n}) with w_n = -2 ln c_n; all quantities are
/// kept as logarithms.
template <typename Real>
struct SecondStructure {
  std::vector<Real> log_norms;    // ln c_n
  std::vector<Real> log_weights;  // w_n

  Matrix<Real> metric() const {
    const auto n = static_cast<Eigen::Index>(log_weights.size());
    Matrix<Real> g = Matrix<Real>::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      if (std::abs(log_weights[k]) > Real(700)) {
        throw LabError(ErrorKind::Overflow,
                       "metric entry exp(" + std::to_string(log_weights[k]) +
                           ") overflows; use a smaller N or slower-growing f");
      }
      g(k, k) = std::exp(log_weights[k]);
    }
    return g;
  }

  /// max c_n / min c_n.
  Real basis_distortion() const {
    const auto [lo, hi] = std::minmax_element(log_norms.begin(), log_norms.end());
    return std::exp(*hi - *lo);
  }
};

template <typename Real>
SecondStructure<Real> second_structure(const NonlinearOps<Real>& nl) {
  const int n = nl.space.cutoff;
  SecondStructure<Real> s;
  s.log_norms.assign(static_cast<std::size_t>(n), Real(0));
  for (int k = 1; k < n; ++k) {
    s.log_norms[k] = s.log_norms[k - 1] + std::log(nl.f_values[k - 1]);
  }
  s.log_weights.resize(s.log_norms.size());
  for (std::size_t k = 0; k < s.log_norms.size(); ++k) {
    s.log_weights[k] = Real(-2) * s.log_norms[k];
  }
  return s;
}

/// Adjoint of A^dagger in the second product: G_2^{-1} A G_2, entry
/// A_mn e^{w_n - w_m}.
template <typename Real>
Matrix<Real> second_adjoint(const NonlinearOps<Real>& nl,
                            const SecondStructure<Real>& s) {
  const int n = nl.space.cutoff;
  Matrix<Real> out = Matrix<Real>::Zero(n, n);
  for (int m = 0; m < n; ++m) {
    for (int k = 0; k < n; ++k) {
      if (nl.A(m, k) == Real(0)) continue;
      const Real exponent = s.log_weights[k] - s.log_weights[m];
      if (exponent > Real(700)) {
        throw LabError(ErrorKind::Overflow,
                       "second adjoint overflows; use a smaller N or "
                       "slower-growing f");
      }
      out(m, k) = nl.A(m, k) * std::exp(exponent);
    }
  }
  return out;
}

/// max |(A^dagger)_2^dagger - f(n)^{-1} a| on the guarded block (f_first).
template <typename Real>
Real second_adjoint_residual(const LadderOps<Real>& ops,
                             const NonlinearOps<Real>& nl,
                             const SecondStructure<Real>& s) {
  const int n = nl.space.cutoff;
  Eigen::Matrix<Real, Eigen::Dynamic, 1> inv(n);
  for (int k = 0; k < n; ++k) inv[k] = Real(1) / nl.f_values[k];
  const Matrix<Real> expected = inv.asDiagonal() * ops.a;
  return block_max<Real>(second_adjoint(nl, s) - expected, nl.space.last_checked());
}

/// max |[(A^dagger)_2^dagger, A^dagger] - 1| on the guarded block.
template <typename Real>
Real heisenberg_algebra_residual(const NonlinearOps<Real>& nl,
                                 const SecondStructure<Real>& s) {
  const int n = nl.space.cutoff;
  const Matrix<Real> c = commutator<Real>(second_adjoint(nl, s), nl.A_dagger);
  return block_max<Real>(c - Matrix<Real>::Identity(n, n), nl.space.last_checked());
}

/// A^dagger (A^dagger)_2^dagger + 1/2
template <typename Real>
Matrix<Real> tilde_hamiltonian(const NonlinearOps<Real>& nl,
                               const SecondStructure<Real>& s) {
  const int n = nl.space.cutoff;
  return nl.A_dagger * second_adjoint(nl, s) +
         Real(0.5) * Matrix<Real>::Identity(n, n);
}

/// exp(-beta (n + 1/2)) on the truncated space.
template <typename Real>
Matrix<Real> boltzmann_operator(int cutoff, Real beta) {
  if (!(beta > 0) || !std::isfinite(beta)) {
    throw LabError(ErrorKind::InvalidArgument, "beta must be finite and > 0");
  }
  Matrix<Real> op = Matrix<Real>::Zero(cutoff, cutoff);
  for (int k = 0; k < cutoff; ++k) op(k, k) = std::exp(-beta * (Real(k) + Real(0.5)));
  return op;
}

/// 1 / (2 sinh(beta/2))
template <typename Real>
Real oscillator_partition(Real beta) {
  return Real(1) / (Real(2) * std::sinh(beta / Real(2)));
}

template <typename Real>
struct TracePair {
  Real first = 0;   // sum_n <n|O|n>_1
  Real second = 0;  // sum_n <n|O|n>_2 over |n>_2 = c_n |n>_1
};

template <typename Real>
TracePair<Real> trace_pair(const Matrix<Real>& op, const SecondStructure<Real>& s,
                           Real beta) {
  if (!(beta > 0)) {
    throw LabError(ErrorKind::InvalidArgument, "beta must be > 0");
  }
  if (op.rows() != static_cast<Eigen::Index>(s.log_weights.size())) {
    throw LabError(ErrorKind::InvalidArgument, "operator and structure sizes differ");
  }
  TracePair<Real> out;
  for (Eigen::Index k = 0; k < op.rows(); ++k) {
    out.first += op(k, k);
    // <n_2| G_2 O |n_2>_1 = c_n^2 e^{w_n} O_nn
    out.second += std::exp(Real(2) * s.log_norms[k] + s.log_weights[k]) * op(k, k);
  }
  return out;
}

}  // namespace hamlab::fock
