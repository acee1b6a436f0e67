// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hamlab/canonical_z.hpp"
#include "hamlab/deformations.hpp"
#include "hamlab/fock_nonlinear.hpp"
#include "hamlab/hilbert_finite.hpp"
#include "hamlab/lab/config.hpp"
#include "hamlab/lab/report.hpp"
#include "hamlab/lab/runner.hpp"
#include "hamlab/period_lab.hpp"
#include "hamlab/phase_flow.hpp"
#include "oracles.hpp"

using namespace hamlab;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

template <class T>
double max_spread(const std::vector<T>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return (*hi - *lo) / std::abs(*lo);
}

std::vector<Deformation> builtin_catalog() {
  const auto catalog = DeformationCatalog::builtin();
  std::vector<Deformation> out;
  for (const auto& label : catalog.labels()) out.push_back(catalog.at(label));
  return out;
}

// 1 ---------------------------------------------------------------------------
Outcome criterion_ho_partition() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> betas{0.1, 1.0, 10.0};
  double worst = 0.0;
  for (double omega : {1.0, 2.0}) {
    const auto ho = make_harmonic_oscillator(1.0, omega);
    const auto profile = estimator_profile(ho, betas, 1e-10);
    for (double beta : betas) {
      const EnsembleParams params{beta, kTwoPi};
      const double expected = 1.0 / (beta * params.hbar() * omega);
      worst = std::max({worst, rel(z_direct(ho, params, 1e-9).value, expected),
                        rel(z_shell(ho, params, profile, 1e-9).value, expected),
                        rel(z_boundary(ho, params, profile).value, expected)});
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-5 && seconds < 10.0,
          fmt("max rel err %.3g (limit 1e-5), runtime %.3g s (limit 10 s)", worst, seconds)};
}

// 2 ---------------------------------------------------------------------------
Outcome criterion_deformation_invariance() {
  const std::vector<double> betas{0.1, 1.0, 10.0};
  double worst = 0.0;
  int cells = 0;
  for (double omega : {1.0, 2.0}) {
    const auto ho = make_harmonic_oscillator(1.0, omega);
    const auto profile = estimator_profile(ho, betas, 1e-10);
    for (const auto& d : builtin_catalog()) {
      for (double beta : betas) {
        const EnsembleParams params{beta, kTwoPi};
        const double expected = 1.0 / (beta * params.hbar() * omega);
        worst = std::max(worst, rel(z_deformed(ho, d, params, profile, 1e-9).value, expected));
        ++cells;
      }
    }
  }
  return {worst <= 1e-5, fmt("%g cells, max rel err %.3g (limit 1e-5)", cells, worst)};
}

// 3 ---------------------------------------------------------------------------
Outcome criterion_coordinate_change() {
  double worst = 0.0;
  for (const char* label : {"identity", "exp_ramp"}) {
    for (double beta : {0.5, 1.0, 2.0}) {
      const auto [lhs, rhs] = z_coordinate_change(CoordinateChange(make_deformation(label)),
                                                  EnsembleParams{beta, kTwoPi}, 1e-9);
      worst = std::max(worst, rel(lhs.value, rhs.value));
    }
  }
  return {worst <= 1e-5, fmt("max rel difference of the two sides %.3g (limit 1e-5)", worst)};
}

// 4 ---------------------------------------------------------------------------
Outcome criterion_period_facts() {
  const auto grid = log_energy_grid(1e-2, 1e2, 11);  // 4 decades
  const auto ho = make_harmonic_oscillator(1.0, 1.0);
  double ho_dev = 0.0;
  for (double e : grid) {
    ho_dev = std::max(ho_dev, rel(period_quadrature(ho, e, 1e-12), kTwoPi));
    ho_dev = std::max(ho_dev, rel(period_return_time(ho, e, 1e-10), kTwoPi));
  }
  const auto quartic = make_quartic(1.0, 1.0);
  std::vector<double> scaled;
  for (double e : grid) scaled.push_back(period_quadrature(quartic, e, 1e-12) * std::pow(e, 0.25));
  const double quartic_spread = max_spread(scaled);
  double agreement = 0.0;
  for (const auto& name : system_catalog()) {
    const auto system = make_system(name, {});
    for (double e : grid) {
      agreement = std::max(agreement, rel(period_return_time(system, e, 1e-10),
                                          period_quadrature(system, e, 1e-12)));
    }
  }
  return {ho_dev <= 1e-8 && quartic_spread <= 1e-5 && agreement <= 1e-6,
          fmt("HO |tau - 2pi| rel %.3g (1e-8); quartic tau E^1/4 spread %.3g (1e-5); "
              "methods agree to %.3g (1e-6)",
              ho_dev, quartic_spread, agreement)};
}

// 5 ---------------------------------------------------------------------------
Outcome criterion_area_derivative() {
  double worst = 0.0;
  for (const auto& name : system_catalog()) {
    const auto system = make_system(name, {});
    for (double e : {0.01, 0.3, 1.0, 7.0, 100.0}) {
      const double derivative = oracle::central_difference(
          [&](double x) { return enclosed_area(system, x, 1e-13); }, e, 1e-3 * e);
      worst = std::max(worst, rel(derivative, period_quadrature(system, e, 1e-12)));
    }
  }
  return {worst <= 1e-5, fmt("max rel |dA/dE - tau| %.3g (limit 1e-5)", worst)};
}

// 6 ---------------------------------------------------------------------------
Outcome criterion_gaussian_nd() {
  using Family = OscillatorFamilyND<double>;
  double spread = 0.0, value_err = 0.0;
  for (int n : {1, 2, 3}) {
    for (double beta : {0.5, 1.0, 2.0}) {
      std::vector<double> values;
      for (int k = 0; k < 20; ++k) {
        values.push_back(
            z_gaussian_nd(Family(Family::random_spd(n, 500 + 31 * n + k)), {beta, kTwoPi}).value);
      }
      spread = std::max(spread, max_spread(values));
      const double expected = std::pow(kTwoPi / (beta * kTwoPi), n);
      for (double v : values) value_err = std::max(value_err, rel(v, expected));
    }
  }
  return {spread <= 1e-9 && value_err <= 1e-9,
          fmt("spread %.3g (limit 1e-9), max rel err vs (2pi/beta h)^n %.3g", spread,
              value_err)};
}

// 7 ---------------------------------------------------------------------------
Outcome criterion_shift_law() {
  double ratio_err = 0.0, energy_err = 0.0;
  struct Case {
    std::string system;
    double beta, shift;
  };
  for (const auto& c : std::vector<Case>{{"ho", 1.0, 1.0},
                                         {"quartic", 2.0, 0.5},
                                         {"ho_plus_quartic", 1.0, -1.0},
                                         {"quartic", 1.0, 1.0}}) {
    const auto check = shift_invariance_check(make_system(c.system, {}), {c.beta}, c.shift);
    ratio_err = std::max(ratio_err, std::abs(check.ratio - std::exp(-c.beta * c.shift)));
    energy_err = std::max(energy_err, std::abs(check.energy_shift - c.shift));
  }
  return {ratio_err <= 1e-6 && energy_err <= 1e-4,
          fmt("ratio err %.3g (1e-6), internal-energy shift err %.3g (1e-4)", ratio_err,
              energy_err)};
}

// 8 ---------------------------------------------------------------------------
Outcome criterion_trace_invariance() {
  double worst = 0.0;
  for (const auto& name : quantum::test_hamiltonian_names()) {
    const auto h = quantum::test_hamiltonian<double>(name);
    auto structures = quantum::alternative_structures<double>(h, 20, 2024);
    for (double beta : {0.5, 1.0, 2.0}) {
      worst = std::max(worst, quantum::trace_invariance<double>(h, structures, beta).max_spread);
    }
  }
  return {worst <= 1e-10, fmt("max trace spread %.3g (limit 1e-10)", worst)};
}

// 9 ---------------------------------------------------------------------------
Outcome criterion_hamilton_form() {
  using T = quantum::Types<double>;
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (const auto& name : quantum::test_hamiltonian_names()) {
    const auto h = quantum::test_hamiltonian<double>(name);
    const quantum::QuantumSystem<double> standard(h);
    const quantum::QuantumSystem<double> alternative(
        h, quantum::alternative_structures<double>(h, 1, 5)[0]);
    for (int i = 0; i < 100; ++i) {
      T::Vector psi(h.rows());
      for (Eigen::Index k = 0; k < psi.size(); ++k) psi[k] = {normal(rng), normal(rng)};
      psi.normalize();
      worst = std::max({worst, quantum::hamilton_form_check(standard, psi),
                        quantum::hamilton_form_check(alternative, psi)});
    }
  }
  return {worst <= 1e-6, fmt("max flow-vs-gradient residual %.3g (limit 1e-6)", worst)};
}

// 10 --------------------------------------------------------------------------
Outcome criterion_fock_identities() {
  using namespace fock;
  const int n = 32;
  const auto ops = build_ladder<double>(n);
  double phi = 0.0, adjoint = 0.0, algebra = 0.0, spectrum = 0.0;
  for (const auto& label : ladder_function_labels()) {
    const auto f = make_ladder_function<double>(label);
    phi = std::max(phi, phi_commutator_residual(build_nonlinear(ops, f, Ordering::FLast)));
    const auto nl = build_nonlinear(ops, f, Ordering::FFirst);
    const auto s = second_structure(nl);
    adjoint = std::max(adjoint, second_adjoint_residual(ops, nl, s));
    algebra = std::max(algebra, heisenberg_algebra_residual(nl, s));
    Eigen::EigenSolver<Matrix<double>> solver(tilde_hamiltonian(nl, s), false);
    std::vector<double> values;
    for (const auto& v : solver.eigenvalues()) values.push_back(v.real());
    std::sort(values.begin(), values.end());
    for (int k = 0; k <= n - 3; ++k) spectrum = std::max(spectrum, std::abs(values[k] - (k + 0.5)));
  }
  const double worst = std::max({phi, adjoint, algebra, spectrum});
  return {worst <= 1e-10,
          fmt("Phi commutator %.3g, second adjoint %.3g, Heisenberg algebra %.3g", phi, adjoint,
              algebra) +
              fmt(", H~ spectrum %.3g (limit 1e-10)", spectrum)};
}

// 11 --------------------------------------------------------------------------
Outcome criterion_quantum_partition() {
  using namespace fock;
  const int n = 64;
  double equality = 0.0, closed = 0.0;
  bool within = true;
  for (const auto& label : ladder_function_labels()) {
    const auto nl = build_nonlinear(build_ladder<double>(n), make_ladder_function<double>(label),
                                    Ordering::FFirst);
    const auto s = second_structure(nl);
    for (double beta : {0.5, 1.0, 2.0}) {
      const auto tr = trace_pair(boltzmann_operator<double>(n, beta), s, beta);
      // Independent closed form: the geometric series.
      const double exact = std::exp(-beta / 2) / (1.0 - std::exp(-beta));
      equality = std::max(equality, std::abs(tr.first - tr.second));
      const double err = std::max(std::abs(tr.first - exact), std::abs(tr.second - exact));
      closed = std::max(closed, err);
      within = within && err <= std::exp(-beta * n) + 1e-10;
    }
  }
  return {equality <= 1e-12 && within,
          fmt("|Tr1 - Tr2| %.3g (1e-12), max |Tr - 1/(2 sinh(beta/2))| %.3g (e^-beta N + 1e-10)",
              equality, closed)};
}

// 12 --------------------------------------------------------------------------
Outcome criterion_boundary_vs_shell() {
  auto run_one = [](const std::string& text) { return lab::run(lab::parse_config(text)); };
  const auto anharmonic = run_one(
      R"({"experiment": "boundary_vs_shell", "system": "ho_plus_quartic",
          "system_params": {"omega": 1, "k4": 1}, "betas": [1.0]})");
  std::optional<double> boundary, shell, discrepancy;
  bool complete = true;
  for (const auto& r : anharmonic.records) {
    complete = complete && r.ok && r.value && r.error_bound;
    if (r.method == "boundary") boundary = r.value;
    if (r.method == "shell") shell = r.value;
    if (r.cell == "relative_discrepancy") discrepancy = r.value;
  }
  complete = complete && boundary && shell && discrepancy;
  const auto ho = run_one(
      R"({"experiment": "boundary_vs_shell", "system": "ho", "betas": [0.1, 1.0, 10.0]})");
  double ho_worst = 0.0;
  for (const auto& r : ho.records) {
    if (r.cell == "relative_discrepancy") ho_worst = std::max(ho_worst, std::abs(*r.value));
  }
  const bool ok = complete && lab::exit_code(anharmonic) == 0 && ho.contract_passed &&
                  ho_worst <= 1e-5;
  return {ok, fmt("anharmonic: boundary %.6g, shell %.6g (recorded, not judged); ",
                  boundary.value_or(NAN), shell.value_or(NAN)) +
                  fmt("HO boundary-vs-shell max rel %.3g (limit 1e-5)", ho_worst)};
}

// 13 --------------------------------------------------------------------------
Outcome criterion_reproducibility() {
  bool identical = true;
  int runs = 0;
  for (const char* text : {
           R"({"experiment": "gaussian_nd", "seed": 17})",
           R"({"experiment": "quantum_finite", "seed": 5, "structures": 8, "states": 20})",
           R"({"experiment": "classical_invariance", "system": "quartic", "betas": [1.0],
               "deformations": ["scaled"], "seed": 3})",
       }) {
    auto first = lab::parse_config(text);
    auto second = lab::parse_config(text);
    second.workers = 2;
    const auto a = lab::run(first);
    const auto b = lab::run(second);
    identical = identical && lab::report_body(a).dump() == lab::report_body(b).dump() &&
                lab::records_csv(a) == lab::records_csv(b) &&
                lab::report_envelope(a, "t0")["body"] == lab::report_envelope(b, "t1")["body"];
    ++runs;
  }
  return {identical, fmt("%g configs run twice (1 and 2 workers); bodies byte-identical: ",
                         runs) +
                         (identical ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"HO partition value", criterion_ho_partition},
      {"deformation invariance on the HO", criterion_deformation_invariance},
      {"coordinate-change equality", criterion_coordinate_change},
      {"period facts", criterion_period_facts},
      {"tau = dA/dE", criterion_area_derivative},
      {"n-D B-independence", criterion_gaussian_nd},
      {"shift law", criterion_shift_law},
      {"finite-dimensional trace invariance", criterion_trace_invariance},
      {"Hamilton-form rewriting", criterion_hamilton_form},
      {"Fock identities", criterion_fock_identities},
      {"quantum partition invariance", criterion_quantum_partition},
      {"boundary vs shell (property substitute)", criterion_boundary_vs_shell},
      {"reproducibility", criterion_reproducibility},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failures += outcome.pass ? 0 : 1;
    std::printf("criterion %2zu: %s  %s | %s\n", i + 1, outcome.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), outcome.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
