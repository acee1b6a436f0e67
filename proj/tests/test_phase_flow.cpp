#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "hamlab/phase_flow.hpp"
#include "oracles.hpp"

using namespace hamlab;

namespace {

std::vector<PhasePoint> annulus_samples(const HamiltonianSystem1D& system,
                                        double e_lo, double e_hi, int count,
                                        unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> energy(e_lo, e_hi);
  std::vector<PhasePoint> points;
  while (static_cast<int>(points.size()) < count) {
    // HO level sets: (q, p) = (sqrt(2E) cos, sqrt(2E) sin) for m = omega = 1
    const double r = std::sqrt(2.0 * energy(rng));
    const double t = angle(rng);
    PhasePoint x(r * std::cos(t), r * std::sin(t));
    const double h = system.energy(x);
    if (h > e_lo && h < e_hi) points.push_back(x);
  }
  return points;
}

}  // namespace

TEST_CASE("harmonic oscillator vector field") {
  const auto ho = make_harmonic_oscillator(1.0, 1.0);
  const auto gamma = hamiltonian_vector_field(ho);
  const Eigen::Vector2d v = gamma(PhasePoint(1.0, 0.0));
  CHECK(v[0] == doctest::Approx(0.0));
  CHECK(v[1] == doctest::Approx(-1.0));
  CHECK(gamma(PhasePoint::Zero()).norm() == 0.0);
}

TEST_CASE("quartic vector field against finite differences") {
  const auto quartic = make_quartic(1.0, 1.0);
  const auto gamma = hamiltonian_vector_field(quartic);
  const PhasePoint x(1.0, 1.0);
  const Eigen::Vector2d v = gamma(x);
  CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(v[1] == doctest::Approx(-1.0).epsilon(1e-14));
  auto hq = [&](double q) { return quartic.energy(PhasePoint(q, x[1])); };
  auto hp = [&](double p) { return quartic.energy(PhasePoint(x[0], p)); };
  CHECK(v[0] == doctest::Approx(oracle::central_difference(hp, x[1], 1e-5)).epsilon(1e-9));
  CHECK(v[1] == doctest::Approx(-oracle::central_difference(hq, x[0], 1e-5)).epsilon(1e-9));
}

TEST_CASE("analytic gradients match central differences on every built-in") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  for (const auto& name : system_catalog()) {
    const auto system = make_system(name, {{"m", 1.3}, {"omega", 0.7}, {"k4", 0.9}});
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const PhasePoint x(coord(rng), coord(rng));
      const Eigen::Vector2d g = system.gradient(x);
      auto hq = [&](double q) { return system.energy(PhasePoint(q, x[1])); };
      auto hp = [&](double p) { return system.energy(PhasePoint(x[0], p)); };
      const Eigen::Vector2d fd(oracle::central_difference(hq, x[0], 1e-5),
                               oracle::central_difference(hp, x[1], 1e-5));
      worst = std::max(worst, (g - fd).cwiseAbs().maxCoeff() / (1.0 + g.norm()));
    }
    CAPTURE(name);
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("system construction rejects extra critical points and bad params") {
  // V = q^2 (q-2)^2 has a local maximum at q = 1.
  auto energy = [](const PhasePoint& x) {
    const double q = x[0];
    return 0.5 * x[1] * x[1] + q * q * (q - 2) * (q - 2);
  };
  auto gradient = [](const PhasePoint& x) {
    const double q = x[0];
    return Eigen::Vector2d(2 * q * (q - 2) * (2 * q - 2), x[1]);
  };
  CHECK_THROWS_AS(HamiltonianSystem1D("double_well", 1.0, energy, gradient),
                  LabError);
  CHECK_THROWS_AS(make_harmonic_oscillator(-1.0, 1.0), LabError);
  CHECK_THROWS_AS(make_system("pendulum", {}), LabError);
}

TEST_CASE("hamiltonian pair residual: standard oscillator") {
  const auto ho = make_harmonic_oscillator(1.0, 1.0);
  const auto samples = annulus_samples(ho, 0.1, 10.0, 100, 3);
  const double residual = verify_hamiltonian_pair(
      hamiltonian_vector_field(ho), [](const PhasePoint&) { return 1.0; },
      energy_field(ho), samples);
  CHECK(residual <= 1e-12);
  CHECK_THROWS_AS(verify_hamiltonian_pair(
                      hamiltonian_vector_field(ho),
                      [](const PhasePoint&) { return 1.0; }, energy_field(ho),
                      std::vector<PhasePoint>{}),
                  LabError);
}

TEST_CASE("hamiltonian pair residual with a numerical differential") {
  const auto quartic = make_quartic(1.0, 1.0);
  ScalarField2D h{[&](const PhasePoint& x) { return quartic.energy(x); }, {}};
  const auto samples = annulus_samples(quartic, 0.1, 10.0, 50, 5);
  CHECK(verify_hamiltonian_pair(hamiltonian_vector_field(quartic),
                                [](const PhasePoint&) { return 1.0; }, h,
                                samples) <= 1e-9);
}

TEST_CASE("deformed pair: Omega_phi = f'(H) dp^dq partners H_phi = f(H)") {
  // Same field as the oscillator; H_phi = H + H^2 with density 1 + 2H.
  const auto ho = make_harmonic_oscillator(1.0, 1.0);
  ScalarField2D h_phi{[&](const PhasePoint& x) {
                        const double e = ho.energy(x);
                        return e + e * e;
                      },
                      {}};
  const auto samples = annulus_samples(ho, 0.1, 10.0, 50, 9);
  const auto density = [&](const PhasePoint& x) {
    return 1.0 + 2.0 * ho.energy(x);
  };
  CHECK(verify_hamiltonian_pair(hamiltonian_vector_field(ho), density, h_phi,
                                samples) <= 1e-8);
  // Keeping the standard form breaks the pairing.
  CHECK(verify_hamiltonian_pair(hamiltonian_vector_field(ho),
                                [](const PhasePoint&) { return 1.0; }, h_phi,
                                samples) > 0.1);
}

namespace {

using Family = OscillatorFamilyND<double>;
using VectorX = Family::Vector;

std::vector<VectorX> nd_samples(Eigen::Index n, int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<VectorX> out;
  for (int i = 0; i < count; ++i) {
    VectorX x(2 * n);
    for (Eigen::Index k = 0; k < 2 * n; ++k) x[k] = normal(rng);
    out.push_back(x);
  }
  return out;
}

}  // namespace

TEST_CASE("n-D family: Omega_B partners H_B for the standard field") {
  const Family family(Family::random_spd(3, 42));
  const auto samples = nd_samples(3, 100, 42);
  const double residual = verify_hamiltonian_pair_nd<double>(
      &Family::standard_field, family.symplectic_coefficients(),
      [&](const VectorX& x) { return family.energy(x); }, {},
      std::span<const VectorX>(samples));
  CHECK(residual <= 1e-9);
  // Analytic differential: the identity is exact up to rounding.
  const double exact = verify_hamiltonian_pair_nd<double>(
      &Family::standard_field, family.symplectic_coefficients(),
      [&](const VectorX& x) { return family.energy(x); },
      [&](const VectorX& x) { return family.gradient(x); },
      std::span<const VectorX>(samples));
  CHECK(exact <= 1e-12);
}

TEST_CASE("n-D family: standard form does not partner H_B for B != I") {
  Family::Matrix b = Family::Matrix::Zero(2, 2);
  b(0, 0) = 1.0;
  b(1, 1) = 2.0;
  const Family family(b);
  const auto samples = nd_samples(2, 100, 17);
  const double residual = verify_hamiltonian_pair_nd<double>(
      &Family::standard_field, Family::Matrix::Identity(2, 2),
      [&](const VectorX& x) { return family.energy(x); }, {},
      std::span<const VectorX>(samples));
  // Oracle: i_Gamma Omega + dH = ((B - I) q, (B - I) p) with central
  // differences for dH.
  double expected = 0.0;
  for (const auto& x : samples) {
    VectorX dh(4);
    for (int i = 0; i < 4; ++i) {
      dh[i] = oracle::central_difference(
          [&](double s) {
            VectorX y = x;
            y[i] = s;
            return family.energy(y);
          },
          x[i], 1e-4);
    }
    VectorX residual_vec(4);
    residual_vec << -x[0] + dh[0], -x[1] + dh[1], -x[2] + dh[2], -x[3] + dh[3];
    expected = std::max(expected, residual_vec.norm());
  }
  CHECK(residual > 0.1);
  CHECK(residual == doctest::Approx(expected).epsilon(1e-7));
}

TEST_CASE("n-D family validates B") {
  Family::Matrix asym(2, 2);
  asym << 1.0, 0.5, 0.0, 1.0;
  CHECK_THROWS_AS(Family{asym}, LabError);
  Family::Matrix indefinite(2, 2);
  indefinite << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(Family{indefinite}, LabError);
}

TEST_CASE("integrate: oscillator returns after one period") {
  const auto ho = make_harmonic_oscillator(1.0, 1.0);
  const auto trajectory =
      integrate(ho, PhasePoint(1.0, 0.0), 2.0 * std::numbers::pi, 1e-10);
  CHECK((trajectory.final_state() - PhasePoint(1.0, 0.0)).norm() <= 1e-8);
  for (std::size_t i = 1; i < trajectory.times.size(); ++i) {
    REQUIRE(trajectory.times[i] > trajectory.times[i - 1]);
  }
  CHECK(trajectory.energy_drift <= 1e-9);
}

TEST_CASE("integrate: critical point is a fixed point") {
  for (const auto& name : system_catalog()) {
    const auto system = make_system(name, {});
    const auto trajectory =
        integrate(system, PhasePoint::Zero(), 2.0 * std::numbers::pi, 1e-10);
    CHECK(trajectory.final_state().norm() == 0.0);
    CHECK(trajectory.energy_drift == 0.0);
  }
}

TEST_CASE("integrate: quartic returns after one closed-form period") {
  const auto quartic = make_quartic(1.0, 1.0);
  const double tau = oracle::quartic_period(0.25);
  const auto trajectory = integrate(quartic, PhasePoint(1.0, 0.0), tau, 1e-10);
  CHECK((trajectory.final_state() - PhasePoint(1.0, 0.0)).norm() <= 1e-6);
}

TEST_CASE("integrate: energy drift over ten periods") {
  const auto ho = make_harmonic_oscillator(1.0, 1.0);
  const auto quartic = make_quartic(1.0, 1.0);
  CHECK(integrate(ho, PhasePoint(1.0, 0.0), 20.0 * std::numbers::pi, 1e-10)
            .energy_drift <= 1e-8);
  CHECK(integrate(quartic, PhasePoint(1.0, 0.0),
                  10.0 * oracle::quartic_period(0.25), 1e-10)
            .energy_drift <= 1e-8);
}

TEST_CASE("integrate: agrees with a fixed-step RK4 reference") {
  const auto system = make_ho_plus_quartic(1.0, 1.0, 1.0);
  const auto gamma = hamiltonian_vector_field(system);
  const PhasePoint start(0.3, 1.1);
  const auto trajectory = integrate(system, start, 5.0, 1e-11);
  const Eigen::Vector2d reference =
      oracle::rk4_flow([&](const Eigen::Vector2d& x) { return gamma(x); },
                       start, 5.0, 20000);
  CHECK((trajectory.final_state() - reference).norm() <= 1e-8);
}

TEST_CASE("integrate: argument errors") {
  const auto ho = make_harmonic_oscillator(1.0, 1.0);
  CHECK_THROWS_AS(integrate(ho, PhasePoint(1, 0), 0.0, 1e-8), LabError);
  CHECK_THROWS_AS(integrate(ho, PhasePoint(1, 0), 1.0, 1e-1), LabError);
  CHECK_THROWS_AS(integrate(ho, PhasePoint(1, 0), 1.0, 1e-15), LabError);
}

TEST_CASE("leapfrog one-step map is area preserving") {
  for (const auto& name : system_catalog()) {
    const auto system = make_system(name, {{"k4", 0.8}});
    for (const PhasePoint x : {PhasePoint(0.4, -0.2), PhasePoint(1.3, 0.9)}) {
      const double dt = 0.05, h = 1e-5;
      Eigen::Matrix2d jac;
      for (int j = 0; j < 2; ++j) {
        PhasePoint plus = x, minus = x;
        plus[j] += h;
        minus[j] -= h;
        jac.col(j) = (leapfrog_step(system, plus, dt) -
                      leapfrog_step(system, minus, dt)) / (2.0 * h);
      }
      CAPTURE(name);
      CHECK(std::abs(jac.determinant() - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("leapfrog keeps energy bounded over many periods") {
  const auto quartic = make_quartic(1.0, 1.0);
  const auto trajectory =
      integrate_leapfrog(quartic, PhasePoint(1.0, 0.0), 100.0, 20000);
  CHECK(trajectory.energy_drift < 1e-4);
}
