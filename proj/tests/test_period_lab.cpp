#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hamlab/period_lab.hpp"
#include "oracles.hpp"

using namespace hamlab;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

TEST_CASE("return-time period of the oscillator") {
  CHECK(period_return_time(make_harmonic_oscillator(1.0, 2.0), 0.7, 1e-10) ==
        doctest::Approx(std::numbers::pi).epsilon(1e-8));
  const auto ho = make_harmonic_oscillator(1.0, 1.0);
  CHECK(std::abs(period_return_time(ho, 1.0, 1e-10) - kTwoPi) <= 1e-8);
  CHECK(std::abs(period_return_time(ho, 100.0, 1e-10) - kTwoPi) <= 1e-8);
}

TEST_CASE("return-time period rejects energies at or below the minimum") {
  const auto ho = make_harmonic_oscillator(1.0, 1.0);
  CHECK_THROWS_AS(period_return_time(ho, 0.0, 1e-8), LabError);
  CHECK_THROWS_AS(period_return_time(ho, -1.0, 1e-8), LabError);
}

TEST_CASE("quartic period: return time, quadrature and closed form agree") {
  const auto quartic = make_quartic(1.0, 1.0);
  const double by_return = period_return_time(quartic, 1.0, 1e-10);
  const double by_quadrature = period_quadrature(quartic, 1.0, 1e-12);
  CHECK(std::abs(by_return - by_quadrature) <= 1e-6);
  CHECK(by_quadrature == doctest::Approx(oracle::quartic_period(1.0)).epsilon(1e-11));
  // tau(E) = tau(1) E^{-1/4}
  for (double E : {0.01, 3.0, 250.0}) {
    CHECK(period_return_time(quartic, E, 1e-10) ==
          doctest::Approx(by_quadrature * std::pow(E, -0.25)).epsilon(1e-8));
  }
}

TEST_CASE("quadrature period of the oscillator") {
  CHECK(std::abs(period_quadrature(make_harmonic_oscillator(1.0, 1.0), 3.0,
                                   1e-12) - kTwoPi) <= 1e-9);
  CHECK(period_quadrature(make_harmonic_oscillator(2.5, 3.0), 0.4, 1e-12) ==
        doctest::Approx(kTwoPi / 3.0).epsilon(1e-11));
}

TEST_CASE("small-oscillation limit of the anharmonic well") {
  const auto system = make_ho_plus_quartic(1.0, 1.0, 1.0);
  const double by_quadrature = period_quadrature(system, 1e-6, 1e-12);
  CHECK(std::abs(by_quadrature - kTwoPi) <= 1e-3);
  CHECK(period_return_time(system, 1e-6, 1e-10) ==
        doctest::Approx(by_quadrature).epsilon(1e-8));
}

TEST_CASE("quartic quadrature scaling is exact") {
  const auto quartic = make_quartic(1.0, 1.0);
  const double ratio = period_quadrature(quartic, 16.0, 1e-12) /
                       period_quadrature(quartic, 1.0, 1e-12);
  CHECK(std::abs(ratio - 0.5) <= 1e-6);
  // Brute-force check of the same integral: with q = q+ sin(theta) the
  // integrand becomes q+ / sqrt(2E (1 + sin^2 theta)).
  auto brute = [](double E) {
    const double qp = std::pow(4.0 * E, 0.25);
    return 4.0 * oracle::simpson(
                     [&](double th) {
                       const double s = std::sin(th);
                       return qp / std::sqrt(2.0 * E * (1.0 + s * s));
                     },
                     0.0, std::numbers::pi / 2.0, 2000);
  };
  CHECK(brute(16.0) / brute(1.0) == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("gauss-chebyshev route agrees with the substitution route") {
  for (const auto& name : system_catalog()) {
    const auto system = make_system(name, {{"m", 0.6}, {"omega", 1.7}, {"k4", 2.0}});
    for (double E : {1e-3, 0.5, 40.0}) {
      CAPTURE(name);
      CAPTURE(E);
      CHECK(period_chebyshev(system, E, 1e-12) ==
            doctest::Approx(period_quadrature(system, E, 1e-12)).epsilon(1e-10));
    }
  }
}

TEST_CASE("non-separable systems have no turning-point quadrature") {
  auto energy = [](const PhasePoint& x) {
    return 0.5 * (x[0] * x[0] + x[1] * x[1]) + 0.1 * x[0] * x[0] * x[1] * x[1];
  };
  auto gradient = [](const PhasePoint& x) {
    return Eigen::Vector2d(x[0] + 0.2 * x[0] * x[1] * x[1],
                           x[1] + 0.2 * x[0] * x[0] * x[1]);
  };
  const HamiltonianSystem1D coupled("coupled", 1.0, energy, gradient);
  CHECK_THROWS_AS(period_quadrature(coupled, 1.0, 1e-10), LabError);
  // Return time and area derivative still work.
  const double tau = period_return_time(coupled, 1.0, 1e-10);
  CHECK(period_area_derivative(coupled, 1.0, 1e-12) ==
        doctest::Approx(tau).epsilon(1e-5));
}

TEST_CASE("enclosed area") {
  const auto ho = make_harmonic_oscillator(1.0, 1.0);
  CHECK(std::abs(enclosed_area(ho, 1.0, 1e-12) - kTwoPi) <= 1e-8);
  CHECK(enclosed_area(make_harmonic_oscillator(2.0, 0.5), 3.0, 1e-12) ==
        doctest::Approx(kTwoPi * 3.0 / 0.5).epsilon(1e-11));
  const auto quartic = make_quartic(1.0, 1.0);
  CHECK(enclosed_area(quartic, 2.0, 1e-12) ==
        doctest::Approx(oracle::quartic_area(2.0)).epsilon(1e-11));
  double previous = enclosed_area(quartic, 1.0, 1e-12);
  for (double E : {1e-1, 1e-2, 1e-4, 1e-8}) {
    const double a = enclosed_area(quartic, E, 1e-12);
    CHECK(a < previous);
    previous = a;
  }
  CHECK(previous < 1e-5);
}

TEST_CASE("tau = dA/dE for the quartic") {
  const auto quartic = make_quartic(1.0, 1.0);
  const double h = 1e-4;
  const double derivative = (enclosed_area(quartic, 1.0 + h, 1e-13) -
                             enclosed_area(quartic, 1.0 - h, 1e-13)) /
                            (2.0 * h);
  CHECK(derivative == doctest::Approx(period_quadrature(quartic, 1.0, 1e-12)).epsilon(1e-5));
  CHECK(period_area_derivative(quartic, 1.0, 1e-12) ==
        doctest::Approx(oracle::quartic_period(1.0)).epsilon(1e-5));
}

TEST_CASE("time function of the oscillator") {
  CHECK(time_function_ho(1.0, 1.0, PhasePoint(1.0, 1.0)) ==
        doctest::Approx(std::numbers::pi / 4.0));
  CHECK(time_function_ho(1.0, 1.0, PhasePoint(0.0, 1.0)) == 0.0);
  CHECK_THROWS_AS(time_function_ho(1.0, 1.0, PhasePoint::Zero()), LabError);
  const double t = time_function_ho(1.0, 2.0, PhasePoint(0.0, -1.0));
  CHECK(t == doctest::Approx(std::numbers::pi / 2.0));
  const double just_before_cut = time_function_ho(1.0, 1.0, PhasePoint(-1e-12, 1.0));
  CHECK(just_before_cut < kTwoPi);
  CHECK(just_before_cut > kTwoPi - 1e-9);
}

TEST_CASE("time function advances with the flow") {
  const auto ho = make_harmonic_oscillator(1.0, 1.0);
  const auto trajectory = integrate(ho, PhasePoint(0.0, 1.0), 0.7, 1e-11);
  CHECK(std::abs(time_function_ho(1.0, 1.0, trajectory.final_state()) - 0.7) <= 1e-8);
}

TEST_CASE("i_Gamma xi = 1 along trajectories") {
  for (auto [m, w] : {std::pair{1.0, 1.0}, std::pair{0.5, 2.0}, std::pair{3.0, 0.7}}) {
    const auto ho = make_harmonic_oscillator(m, w);
    const auto trajectory = integrate(ho, PhasePoint(0.4, -1.2), 25.0, 1e-11);
    const double period = kTwoPi / w;
    double worst = 0.0;
    for (std::size_t i = 1; i < trajectory.states.size(); ++i) {
      double dt = time_function_ho(m, w, trajectory.states[i]) -
                  time_function_ho(m, w, trajectory.states[i - 1]);
      dt -= period * std::round(dt / period - 0.5 + 0.5);  // unwrap the cut
      if (dt < 0.0) dt += period;
      worst = std::max(worst, std::abs(dt - (trajectory.times[i] -
                                             trajectory.times[i - 1])));
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("log grid covers the decades inclusively") {
  const auto grid = log_energy_grid(1e-3, 1e3, 33);
  CHECK(grid.size() == 199);
  CHECK(grid.front() == 1e-3);
  CHECK(grid.back() == 1e3);
  CHECK(grid[33] == doctest::Approx(1e-2).epsilon(1e-13));
  CHECK_THROWS_AS(log_energy_grid(1.0, 0.5), LabError);
}

TEST_CASE("profile interpolation is exact for power laws") {
  const auto quartic = make_quartic(1.0, 1.0);
  const auto profile = build_period_profile(
      quartic, log_energy_grid(1e-2, 1e2, 4), PeriodMethod::TurningPointQuadrature,
      1e-12);
  for (double E : {1e-4, 0.0123, 0.7, 55.0, 1e4}) {
    CHECK(profile(E) == doctest::Approx(oracle::quartic_period(E)).epsilon(1e-10));
  }
  CHECK(profile.low_exponent() == doctest::Approx(-0.25).epsilon(1e-9));
  CHECK(profile.high_exponent() == doctest::Approx(-0.25).epsilon(1e-9));
}

TEST_CASE("profile construction is order independent") {
  const auto system = make_ho_plus_quartic(1.0, 1.0, 1.0);
  const auto grid = log_energy_grid(1e-2, 1e2, 5);
  const auto serial = build_period_profile(system, grid, PeriodMethod::ReturnTime, 1e-9, 1);
  const auto parallel = build_period_profile(system, grid, PeriodMethod::ReturnTime, 1e-9, 3);
  CHECK(serial.periods() == parallel.periods());
}

TEST_CASE("profile invariants") {
  CHECK_THROWS_AS(PeriodProfile({1.0, 0.5}, {1.0, 1.0}, PeriodMethod::ReturnTime),
                  LabError);
  CHECK_THROWS_AS(PeriodProfile({1.0}, {-1.0}, PeriodMethod::ReturnTime), LabError);
  CHECK_THROWS_AS(PeriodProfile({1.0, 2.0}, {1.0}, PeriodMethod::ReturnTime), LabError);
  const PeriodProfile single({2.0}, {3.0}, PeriodMethod::ReturnTime);
  CHECK(single(10.0) == doctest::Approx(3.0));
}
