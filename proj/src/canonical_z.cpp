#include "hamlab/canonical_z.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <numbers>

#include "hamlab/numeric/quadrature.hpp"
#include "hamlab/numeric/roots.hpp"
#include "hamlab/parallel.hpp"

namespace hamlab {

void EnsembleParams::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw LabError(ErrorKind::InvalidArgument, "beta must be finite and > 0");
  }
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw LabError(ErrorKind::InvalidArgument, "h must be finite and > 0");
  }
}

const char* to_string(ZMethod method) {
  switch (method) {
    case ZMethod::Direct2D: return "direct_2d";
    case ZMethod::Shell: return "shell";
    case ZMethod::Deformed: return "deformed";
    case ZMethod::Boundary: return "boundary";
    case ZMethod::GaussianND: return "gaussian_nd";
    case ZMethod::CoordinateChange: return "coordinate_change";
  }
  return "?";
}

const char* to_string(Verdict verdict) {
  return verdict == Verdict::InvariantWithinTol ? "invariant_within_tol"
                                                : "discrepancy";
}

bool ZEstimate::has_flag(const std::string& flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

namespace {

void check_tol(double tol) {
  if (!(tol > 1e-14 && tol < 1e-1)) {
    throw LabError(ErrorKind::InvalidArgument, "tol must lie in (1e-14, 1e-1)");
  }
}

// ---------------------------------------------------------------------------
// int_0^inf g(x) dx for g ~ c x^alpha at 0 (alpha > -1) and decaying at
// infinity. The bulk is integrated in s = ln x; below x_lo the power law is
// integrated in closed form; above the upper cutoff the log-space integrand
// is treated as exponentially decaying.

struct HalfLineIntegral {
  double value = 0.0;
  double error = 0.0;
  double lower_tail = 0.0;
  double upper_tail = 0.0;
  double x_hi = 0.0;
  bool analytic_upper_tail = false;
};

constexpr double kMaxLogX = 700.0;

HalfLineIntegral half_line_integral(const std::function<double(double)>& g,
                                    double alpha, double scale, double tol) {
  if (!(alpha > -1.0)) {
    throw LabError(ErrorKind::Divergence,
                   "integrand ~ x^" + std::to_string(alpha) +
                       " is not integrable at 0");
  }
  HalfLineIntegral out;
  const double x_lo = 1e-12 * scale;
  out.lower_tail = g(x_lo) * x_lo / (1.0 + alpha);

  auto log_space = [&](double s) {
    const double x = std::exp(s);
    return g(x) * x;
  };
  constexpr double kStep = 0.5;
  double s = std::log(scale);
  double current = log_space(s);
  double peak = current;
  double s_hi = s;
  if (current > 0.0) {
    for (;;) {
      const double next_s = s + kStep;
      const double next = log_space(next_s);
      if (!std::isfinite(next)) {
        throw LabError(ErrorKind::Divergence, "integrand not finite at x=e^" +
                                                  std::to_string(next_s));
      }
      peak = std::max(peak, next);
      if (next == 0.0) {
        s_hi = next_s;
        break;
      }
      const double decay = (std::log(current) - std::log(next)) / kStep;
      if (decay > 0.0) {
        const double tail = next / decay;
        if (tail <= 1e-4 * tol * peak) {
          s_hi = next_s;
          out.error += tail;
          break;
        }
        if (next_s >= kMaxLogX) {
          s_hi = next_s;
          out.upper_tail = tail;
          out.analytic_upper_tail = true;
          break;
        }
      } else if (next_s >= kMaxLogX) {
        throw LabError(ErrorKind::Divergence,
                       "integrand does not decay; Z diverges");
      }
      s = next_s;
      current = next;
    }
  }
  out.x_hi = std::exp(s_hi);
  const auto bulk = numeric::integrate(
      log_space, std::log(x_lo), s_hi,
      numeric::QuadratureOptions{1e-6 * tol * peak, 0.1 * tol, 8000});
  if (!bulk.converged) {
    throw LabError(ErrorKind::NotConverged, "shell quadrature did not converge");
  }
  out.value = bulk.value + out.lower_tail + out.upper_tail;
  out.error += bulk.error + 1e-6 * std::abs(out.lower_tail) +
               (out.analytic_upper_tail ? 1e-2 * out.upper_tail : 0.0);
  return out;
}

// ---------------------------------------------------------------------------
// Boltzmann-weighted phase-space integrals.

struct PhaseIntegral {
  double value = 0.0;
  double error = 0.0;
  double tail_bound = 0.0;
  double cut_energy = 0.0;
  double half_width_q = 0.0;
  double half_width_p = 0.0;
};

PhaseIntegral boltzmann_integral(
    const std::function<double(const PhasePoint&)>& level_energy,
    const std::function<double(const PhasePoint&)>& integrand, double beta,
    double tol) {
  constexpr int kRays = 64;
  double exponent = std::max(40.0, std::log(1.0 / tol) + 30.0);
  for (int attempt = 0; attempt < 6; ++attempt, exponent += 20.0) {
    const double cut = exponent / beta;
    double rq = 0.0, rp = 0.0, r_max = 0.0, growth = 1e300, edge = 0.0;
    for (int k = 0; k < kRays; ++k) {
      const double theta = 2.0 * std::numbers::pi * (k + 0.5) / kRays;
      const double c = std::cos(theta), s = std::sin(theta);
      auto g = [&](double r) { return level_energy(PhasePoint(r * c, r * s)) - cut; };
      const auto bracket = numeric::bracket_outward(g, 0.0, 1e-3);
      if (!bracket) {
        throw LabError(ErrorKind::NonCompactLevelSet,
                       "Boltzmann weight does not decay along theta=" +
                           std::to_string(theta));
      }
      const double r0 = *numeric::brent_root(g, bracket->first, bracket->second);
      rq = std::max(rq, std::abs(r0 * c));
      rp = std::max(rp, std::abs(r0 * s));
      r_max = std::max(r_max, r0);
      const double outer = level_energy(PhasePoint(2 * r0 * c, 2 * r0 * s));
      growth = std::min(growth, std::log2(outer / cut));
      edge = std::max(edge, std::abs(integrand(PhasePoint(r0 * c, r0 * s))));
    }
    if (!(growth >= 1.0)) {
      throw LabError(ErrorKind::Divergence,
                     "energy grows too slowly to bound the exterior");
    }
    // Exterior of the level set: integrand <= edge exp(-a((r/r0)^k - 1)),
    // integrated over r > r0 with r0 <= r_max.
    const double tail = 2.0 * std::numbers::pi * r_max * r_max * edge /
                        (exponent * growth) * (1.0 + 2.0 / (exponent * growth));
    // The sampled extremes miss the level set between rays.
    rq *= 1.05;
    rp *= 1.05;
    const auto result = numeric::integrate_2d(
        [&](double q, double p) { return integrand(PhasePoint(q, p)); }, -rq,
        rq, [&](double) { return -rp; }, [&](double) { return rp; },
        numeric::QuadratureOptions{0.0, 0.1 * tol, 4000});
    if (!result.converged) {
      throw LabError(ErrorKind::NotConverged,
                     "phase-space quadrature did not converge");
    }
    if (tail <= 1e-2 * tol * std::abs(result.value)) {
      return {result.value, result.error + tail, tail, cut, rq, rp};
    }
  }
  throw LabError(ErrorKind::NotConverged,
                 "tail bound not achievable within the box-growth limit");
}

ZEstimate finish(const PhaseIntegral& integral, ZMethod method, double h) {
  ZEstimate estimate;
  estimate.value = integral.value / h;
  estimate.error_bound = integral.error / h;
  estimate.method = method;
  estimate.metadata["tail_bound"] = integral.tail_bound / h;
  estimate.metadata["cut_energy"] = integral.cut_energy;
  estimate.metadata["box_q"] = integral.half_width_q;
  estimate.metadata["box_p"] = integral.half_width_p;
  return estimate;
}

}  // namespace

ZEstimate z_direct(const HamiltonianSystem1D& system,
                   const EnsembleParams& params, double tol) {
  return z_direct_shifted(system, params, 0.0, tol);
}

ZEstimate z_direct_shifted(const HamiltonianSystem1D& system,
                           const EnsembleParams& params, double shift,
                           double tol) {
  params.validate();
  check_tol(tol);
  const double beta = params.beta;
  const auto integral = boltzmann_integral(
      [&](const PhasePoint& x) { return system.energy(x); },
      [&](const PhasePoint& x) {
        return std::exp(-beta * (system.energy(x) + shift));
      },
      beta, tol);
  auto estimate = finish(integral, ZMethod::Direct2D, params.h);
  if (shift != 0.0) estimate.metadata["shift"] = shift;
  return estimate;
}

ZEstimate z_shell(const HamiltonianSystem1D& system,
                  const EnsembleParams& params, const PeriodProfile& profile,
                  double tol) {
  params.validate();
  check_tol(tol);
  (void)system;
  const double beta = params.beta;
  const auto integral = half_line_integral(
      [&](double e) { return std::exp(-beta * e) * profile(e); },
      profile.low_exponent(), 1.0 / beta, tol);
  ZEstimate estimate;
  estimate.method = ZMethod::Shell;
  estimate.value = integral.value / params.h;
  estimate.error_bound = integral.error / params.h;
  estimate.metadata["e_max"] = integral.x_hi;
  estimate.metadata["lower_tail"] = integral.lower_tail / params.h;
  if (integral.x_hi > profile.energies().back()) {
    estimate.flags.push_back("extrapolated_high");
  }
  if (integral.analytic_upper_tail) estimate.flags.push_back("analytic_upper_tail");
  return estimate;
}

ZEstimate z_deformed(const HamiltonianSystem1D& system,
                     const Deformation& deformation,
                     const EnsembleParams& params,
                     const PeriodProfile& profile, double tol) {
  params.validate();
  check_tol(tol);
  (void)system;
  const double beta = params.beta;
  const double beta0 = deformation.beta0();
  const double slope0 = deformation.derivative(0.0);
  if (!(slope0 > 0.0)) {
    throw LabError(ErrorKind::InvariantViolation, "f'(0) must be positive");
  }

  // Scale of the relevant energies: where beta H_phi(E) ~ 1.
  const double u_scale = 1.0 / beta;
  const double e_scale = deformation.inverse(beta0 * u_scale) / beta0;

  const auto e_form = half_line_integral(
      [&](double e) {
        return std::exp(-beta * deform_energy(deformation, e)) *
               deformed_volume_density(deformation, e) * profile(e);
      },
      profile.low_exponent(), e_scale, tol);
  const auto u_form = half_line_integral(
      [&](double u) {
        const double e = deformation.inverse(beta0 * u) / beta0;
        return std::exp(-beta * u) * profile(e);
      },
      profile.low_exponent(), u_scale, tol);

  ZEstimate estimate;
  estimate.method = ZMethod::Deformed;
  estimate.value = e_form.value / params.h;
  const double other = u_form.value / params.h;
  const double mismatch = std::abs(estimate.value - other);
  estimate.error_bound = std::max(e_form.error / params.h, mismatch);
  estimate.metadata["u_form"] = other;
  estimate.metadata["form_mismatch"] = mismatch / std::abs(estimate.value);
  estimate.metadata["beta0"] = beta0;
  if (mismatch > tol * std::abs(estimate.value)) {
    estimate.flags.push_back("form_mismatch");
  }
  if (e_form.analytic_upper_tail || u_form.analytic_upper_tail) {
    estimate.flags.push_back("analytic_upper_tail");
  }
  return estimate;
}

std::pair<ZEstimate, ZEstimate> z_coordinate_change(
    const CoordinateChange& change, const EnsembleParams& params, double tol) {
  params.validate();
  check_tol(tol);
  const double beta = params.beta;
  auto base_energy = [](const PhasePoint& x) { return 0.5 * x.squaredNorm(); };
  const auto transformed = boltzmann_integral(
      [&](const PhasePoint& x) {
        return change.transformed_energy(base_energy(x));
      },
      [&](const PhasePoint& x) {
        const double e = base_energy(x);
        return std::exp(-beta * change.transformed_energy(e)) * change.jacobian(e);
      },
      beta, tol);
  auto left = finish(transformed, ZMethod::CoordinateChange, params.h);
  left.metadata["beta0"] = change.base().beta0();
  const auto ho = make_harmonic_oscillator(1.0, 1.0);
  return {left, z_direct(ho, params, tol)};
}

ZEstimate z_boundary(const HamiltonianSystem1D& system,
                     const EnsembleParams& params, const PeriodProfile& profile,
                     double eps, std::optional<double> e_max) {
  params.validate();
  (void)system;
  if (!(eps > 0.0)) {
    throw LabError(ErrorKind::InvalidArgument, "eps must be positive");
  }
  const double beta = params.beta;
  const double top = e_max.value_or(60.0 / beta);
  if (!(top > eps)) {
    throw LabError(ErrorKind::InvalidArgument, "need E_max > eps");
  }
  auto term = [&](double e) { return std::exp(-beta * e) * profile(e); };
  const double upper = term(top);
  const double b1 = term(100.0 * eps), b2 = term(10.0 * eps), b3 = term(eps);

  ZEstimate estimate;
  estimate.method = ZMethod::Boundary;
  estimate.metadata["upper_term"] = upper;
  estimate.metadata["lower_term_raw"] = b3;
  estimate.metadata["eps"] = eps;
  estimate.metadata["e_max"] = top;

  double lower = b3;
  double correction = 0.0;
  const bool diverging =
      !std::isfinite(b3) || profile.low_exponent() < -1e-3;
  if (diverging) {
    estimate.flags.push_back("diverging_period");
    correction = std::abs(b3 - b2);
  } else {
    // B(eps) = B0 + c1 eps + c2 eps^2 eliminated on the ratio-10 ladder.
    const double r_fine = (10.0 * b3 - b2) / 9.0;
    const double r_coarse = (10.0 * b2 - b1) / 9.0;
    lower = (100.0 * r_fine - r_coarse) / 99.0;
    correction = std::abs(lower - b3);
  }
  estimate.metadata["lower_term"] = lower;
  estimate.value = -(upper - lower) / (beta * params.h);
  estimate.error_bound =
      (correction + std::abs(upper) +
       64.0 * std::numeric_limits<double>::epsilon() * std::abs(lower)) /
      (beta * params.h);
  return estimate;
}

ShiftCheck shift_invariance_check(const HamiltonianSystem1D& system,
                                  const EnsembleParams& params, double shift,
                                  double tol) {
  params.validate();
  auto log_z = [&](double beta, double c) {
    EnsembleParams p = params;
    p.beta = beta;
    return std::log(z_direct_shifted(system, p, c, tol).value);
  };
  const double beta = params.beta;
  const double delta = 1e-3 * beta;
  auto internal_energy = [&](double c) {
    return -(log_z(beta + delta, c) - log_z(beta - delta, c)) / (2.0 * delta);
  };
  ShiftCheck check;
  check.ratio = std::exp(log_z(beta, shift) - log_z(beta, 0.0));
  check.expected_ratio = std::exp(-beta * shift);
  check.energy_shift = internal_energy(shift) - internal_energy(0.0);
  check.expected_energy_shift = shift;
  return check;
}

std::pair<double, double> profile_window(const std::vector<double>& betas) {
  if (betas.empty()) {
    throw LabError(ErrorKind::InvalidArgument, "empty beta grid");
  }
  const auto [lo, hi] = std::minmax_element(betas.begin(), betas.end());
  return {1e-7 * std::min(1.0, 1.0 / *hi), 60.0 / *lo};
}

PeriodProfile estimator_profile(const HamiltonianSystem1D& system,
                                const std::vector<double>& betas, double tol,
                                int workers) {
  const auto [emin, emax] = profile_window(betas);
  const auto method = system.separable() ? PeriodMethod::TurningPointQuadrature
                                         : PeriodMethod::ReturnTime;
  return build_period_profile(system, log_energy_grid(emin, emax, 33), method,
                              std::min(tol, 1e-10), workers);
}

namespace {

bool is_unit_oscillator(const HamiltonianSystem1D& system) {
  return system.label() == "ho" && system.param("m") == 1.0 &&
         system.param("omega") == 1.0;
}

}  // namespace

InvarianceReport run_invariance_experiment(
    const HamiltonianSystem1D& system,
    const std::vector<Deformation>& deformations,
    const std::vector<double>& betas, const InvarianceOptions& options) {
  check_tol(options.tol);
  InvarianceReport report;
  report.system_label = system.label();
  report.betas = betas;
  report.tolerance = options.tol;
  for (const auto& d : deformations) report.deformation_labels.push_back(d.label());

  const auto profile =
      estimator_profile(system, betas, options.tol, options.workers);
  const bool with_change = options.coordinate_change && is_unit_oscillator(system);

  struct Job {
    double beta;
    std::string method;
    const Deformation* deformation;
  };
  std::vector<Job> jobs;
  for (double beta : betas) {
    jobs.push_back({beta, "direct_2d", nullptr});
    jobs.push_back({beta, "shell", nullptr});
    jobs.push_back({beta, "boundary", nullptr});
    for (const auto& d : deformations) jobs.push_back({beta, "deformed", &d});
    if (with_change) {
      for (const auto& d : deformations) {
        jobs.push_back({beta, "coordinate_change", &d});
      }
    }
  }

  report.cells.resize(jobs.size());
  parallel_for(jobs.size(), options.workers, [&](std::size_t i) {
    const Job& job = jobs[i];
    InvarianceCell& cell = report.cells[i];
    cell.beta = job.beta;
    cell.method = job.method;
    cell.label = job.deformation ? job.deformation->label() : "";
    try {
      const EnsembleParams params{job.beta, options.h};
      if (job.method == "direct_2d") {
        cell.estimate = z_direct(system, params, options.tol);
      } else if (job.method == "shell") {
        cell.estimate = z_shell(system, params, profile, options.tol);
      } else if (job.method == "boundary") {
        cell.estimate = z_boundary(system, params, profile);
      } else if (job.method == "deformed") {
        cell.estimate =
            z_deformed(system, *job.deformation, params, profile, options.tol);
      } else {
        cell.estimate =
            z_coordinate_change(CoordinateChange(*job.deformation), params,
                                options.tol)
                .first;
      }
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  });

  for (double beta : betas) {
    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (const auto& cell : report.cells) {
      if (cell.beta != beta || !cell.estimate) continue;
      const double v = cell.estimate->value;
      lo = any ? std::min(lo, v) : v;
      hi = any ? std::max(hi, v) : v;
      any = true;
    }
    const double spread = any && lo > 0.0 ? (hi - lo) / lo : 0.0;
    report.spread_by_beta[beta] = spread;
    report.max_spread = std::max(report.max_spread, spread);
  }
  for (const auto& cell : report.cells) {
    if (!cell.estimate) ++report.failed_cells;
  }
  report.verdict = report.failed_cells == 0 && report.max_spread <= 10.0 * options.tol
                       ? Verdict::InvariantWithinTol
                       : Verdict::Discrepancy;
  return report;
}

}  // namespace hamlab
