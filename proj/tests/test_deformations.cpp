#include <cmath>
#include <random>

#include "doctest.h"
#include "hamlab/deformations.hpp"
#include "oracles.hpp"

using namespace hamlab;

TEST_CASE("deform_energy") {
  const auto identity = make_deformation("identity");
  for (double h : {0.0, 0.3, 7.0}) CHECK(deform_energy(identity, h) == h);
  CHECK(deform_energy(make_deformation("quadratic"), 2.0) == doctest::Approx(6.0));
  // beta0 keeps dimensions: f(x) = x + x^2 with beta0 = 0.5 at H = 2 -> (1 + 1)/0.5
  CHECK(deform_energy(make_deformation("quadratic", 0.5), 2.0) == doctest::Approx(4.0));
  CHECK_THROWS_AS(deform_energy(identity, -1e-3), LabError);
}

TEST_CASE("volume density is f'(beta0 H)") {
  CHECK(deformed_volume_density(make_deformation("identity"), 4.2) == 1.0);
  const auto quadratic = make_deformation("quadratic");
  CHECK(deformed_volume_density(quadratic, 2.0) == doctest::Approx(5.0));
  const double fd = oracle::central_difference(
      [&](double h) { return deform_energy(quadratic, h); }, 2.0, 1e-6);
  CHECK(std::abs(fd - 5.0) <= 1e-5);
}

TEST_CASE("volume density matches the derivative of H_phi for every entry") {
  const auto catalog = DeformationCatalog::builtin(0.7);
  for (const auto& label : catalog.labels()) {
    const auto& d = catalog.at(label);
    for (double h : {0.1, 1.0, 3.0}) {
      const double fd = oracle::central_difference(
          [&](double x) { return deform_energy(d, x); }, h, 1e-6);
      CAPTURE(label);
      CHECK(deformed_volume_density(d, h) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("catalog screen accepts the built-ins and rejects bounded f") {
  const auto catalog = DeformationCatalog::builtin();
  CHECK(catalog.labels().size() == 5);
  for (const auto& label : catalog.labels()) {
    CHECK(screen_deformation(catalog.at(label)).passed);
  }
  // ln(1 + x) is unbounded and passes.
  CHECK(screen_deformation(make_deformation("log1p")).passed);
  const auto tanh_screen = screen_deformation(make_deformation("tanh"));
  CHECK_FALSE(tanh_screen.passed);
  DeformationCatalog registry;
  CHECK_THROWS_AS(registry.add(make_deformation("tanh")), LabError);
  CHECK_THROWS_AS(catalog.at("tanh"), LabError);
}

TEST_CASE("screen flags f(0) != 0 and non-monotone f") {
  const Deformation shifted(
      "shifted", [](double x) { return 1.0 + x; }, [](double) { return 1.0; });
  CHECK_FALSE(screen_deformation(shifted).passed);
  const Deformation wiggle(
      "wiggle", [](double x) { return x + 2.0 * std::sin(x); },
      [](double x) { return 1.0 + 2.0 * std::cos(x); });
  CHECK_FALSE(screen_deformation(wiggle).passed);
}

TEST_CASE("user-supplied deformations get a numerical inverse") {
  const Deformation cubic(
      "cubic", [](double x) { return x + x * x * x; },
      [](double x) { return 1.0 + 3.0 * x * x; });
  CHECK_FALSE(cubic.has_analytic_inverse());
  for (double x : {0.0, 1e-4, 0.5, 3.0, 40.0}) {
    CHECK(std::abs(cubic.inverse(cubic.f(x)) - x) <= 1e-12 * std::max(1.0, x));
  }
  CHECK(screen_deformation(cubic).passed);
}

TEST_CASE("analytic inverses round-trip on [0, 50]") {
  const auto catalog = DeformationCatalog::builtin();
  for (const auto& label : catalog.labels()) {
    const auto& d = catalog.at(label);
    for (double x = 0.0; x <= 50.0; x += 0.37) {
      CHECK(std::abs(d.inverse(d.f(x)) - x) <= 1e-10 * std::max(1.0, x));
    }
  }
}

TEST_CASE("coordinate change") {
  const CoordinateChange none(Deformation(
      "zero", [](double) { return 0.0; }, [](double) { return 0.0; }));
  CHECK(coordinate_change_apply(none, PhasePoint(0.3, -2.0)) == PhasePoint(0.3, -2.0));

  const CoordinateChange linear(make_deformation("identity"));
  const PhasePoint y = coordinate_change_apply(linear, PhasePoint(1.0, 0.0));
  CHECK(y[0] == doctest::Approx(1.5));
  CHECK(y[1] == 0.0);
  CHECK(linear.transformed_energy(0.5) == doctest::Approx(1.125));
  CHECK(0.5 * y.squaredNorm() == doctest::Approx(1.125));
  CHECK(linear.jacobian(0.5) == doctest::Approx(3.75));
  const double fd = oracle::central_difference(
      [&](double h) { return linear.transformed_energy(h); }, 0.5, 1e-6);
  CHECK(std::abs(fd - 3.75) <= 1e-6);
  CHECK(linear.forward(PhasePoint::Zero()) == PhasePoint::Zero());
}

TEST_CASE("Omega' = F(H) dp^dq: Jacobian determinant equals F") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  for (const char* label : {"identity", "quadratic", "exp_ramp", "log1p"}) {
    const CoordinateChange change(make_deformation(label, 0.5));
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const PhasePoint x(coord(rng), coord(rng));
      Eigen::Matrix2d jac;
      const double h = 1e-6;
      for (int j = 0; j < 2; ++j) {
        PhasePoint plus = x, minus = x;
        plus[j] += h;
        minus[j] -= h;
        jac.col(j) = (change.forward(plus) - change.forward(minus)) / (2 * h);
      }
      const double expected = change.jacobian(0.5 * x.squaredNorm());
      worst = std::max(worst, std::abs(jac.determinant() - expected) /
                                  std::max(1.0, expected));
    }
    CAPTURE(label);
    CHECK(worst <= 1e-5);
    CHECK(change.jacobian(1.3) > 0.0);
  }
}

TEST_CASE("the oscillator flow pushed forward conserves H'") {
  const CoordinateChange change(make_deformation("quadratic", 0.8));
  const double energy = 0.5 * (0.7 * 0.7 + 0.2 * 0.2);
  const double expected = change.transformed_energy(energy);
  double worst = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double t = 0.05 * i;
    // exact HO flow from (0.7, 0.2)
    const PhasePoint x(0.7 * std::cos(t) + 0.2 * std::sin(t),
                       -0.7 * std::sin(t) + 0.2 * std::cos(t));
    const PhasePoint y = change.forward(x);
    worst = std::max(worst, std::abs(0.5 * y.squaredNorm() - expected));
  }
  CHECK(worst <= 1e-8);
}
