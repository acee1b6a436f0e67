#include "hamlab/deformations.hpp"

#include <cmath>
#include <limits>

#include "hamlab/numeric/roots.hpp"

namespace hamlab {

Deformation::Deformation(std::string label, Fn f, Fn derivative, Fn inverse,
                         double beta0)
    : label_(std::move(label)),
      f_(std::move(f)),
      derivative_(std::move(derivative)),
      inverse_(std::move(inverse)),
      beta0_(beta0) {
  if (!(beta0_ > 0.0) || !std::isfinite(beta0_)) {
    throw LabError(ErrorKind::InvalidArgument, "beta0 must be positive");
  }
  if (!f_ || !derivative_) {
    throw LabError(ErrorKind::InvalidArgument,
                   label_ + ": f and f' are required");
  }
}

double Deformation::inverse(double y) const {
  if (inverse_) return inverse_(y);
  auto g = [&](double x) { return f_(x) - y; };
  const auto bracket = numeric::bracket_outward(g, 0.0, 1e-3);
  if (!bracket) {
    throw LabError(ErrorKind::NotConverged,
                   label_ + ": cannot invert at y=" + std::to_string(y));
  }
  const double scale = std::max(1.0, std::abs(bracket->second));
  return *numeric::brent_root(g, bracket->first, bracket->second,
                              1e-12 * scale);
}

Deformation Deformation::with_beta0(double beta0) const {
  return Deformation(label_, f_, derivative_, inverse_, beta0);
}

ScreenResult screen_deformation(const Deformation& d) {
  ScreenResult result;
  auto fail = [&](std::string why) {
    result.passed = false;
    result.failures.push_back(d.label() + ": " + std::move(why));
  };

  if (std::abs(d.f(0.0)) > 1e-14) fail("f(0) != 0");

  std::vector<double> grid{0.0};
  for (int i = 0; i <= 180; ++i) grid.push_back(std::pow(10.0, -6.0 + i / 20.0));
  double previous = d.f(0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    if (!(d.derivative(x) > 0.0)) {
      fail("f' not positive at x=" + std::to_string(x));
      break;
    }
    const double fx = d.f(x);
    if (i > 0 && std::isfinite(fx) && !(fx > previous)) {
      fail("f not increasing at x=" + std::to_string(x));
      break;
    }
    previous = fx;
    if (std::isfinite(fx)) {
      const double back = d.inverse(fx);
      if (std::abs(back - x) > 1e-10 * std::max(1.0, x)) {
        fail("inverse mismatch at x=" + std::to_string(x));
        break;
      }
    }
  }

  bool unbounded = false;
  for (double x : {1e6, 1e12}) {
    const double a = d.f(x), b = d.f(2.0 * x);
    if (!std::isfinite(a) || !std::isfinite(b) || b - a > 1e-6) {
      unbounded = true;
      break;
    }
  }
  if (!unbounded) {
    fail("f is bounded above; exp(-beta H_phi) does not decay and Z_phi "
         "diverges");
  }
  return result;
}

DeformationCatalog DeformationCatalog::builtin(double beta0) {
  DeformationCatalog catalog;
  for (const char* label :
       {"identity", "quadratic", "exp_ramp", "log1p", "scaled"}) {
    catalog.add(make_deformation(label, beta0));
  }
  return catalog;
}

void DeformationCatalog::add(Deformation d) {
  const auto screen = screen_deformation(d);
  if (!screen.passed) {
    std::string why;
    for (const auto& f : screen.failures) why += (why.empty() ? "" : "; ") + f;
    throw LabError(ErrorKind::InvariantViolation,
                   "deformation rejected by catalog screen: " + why);
  }
  const std::string label = d.label();
  entries_.insert_or_assign(label, std::move(d));
}

const Deformation& DeformationCatalog::at(const std::string& label) const {
  auto it = entries_.find(label);
  if (it == entries_.end()) {
    std::string known;
    for (const auto& [name, _] : entries_) known += " " + name;
    throw LabError(ErrorKind::InvalidArgument,
                   "unknown deformation '" + label + "'; available:" + known);
  }
  return it->second;
}

bool DeformationCatalog::contains(const std::string& label) const {
  return entries_.count(label) > 0;
}

std::vector<std::string> DeformationCatalog::labels() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : entries_) out.push_back(name);
  return out;
}

std::vector<std::string> known_deformations() {
  return {"identity", "quadratic", "exp_ramp", "log1p", "scaled", "tanh"};
}

Deformation make_deformation(const std::string& label, double beta0) {
  if (label == "identity") {
    return Deformation(
        label, [](double x) { return x; }, [](double) { return 1.0; },
        [](double y) { return y; }, beta0);
  }
  if (label == "quadratic") {
    return Deformation(
        label, [](double x) { return x + x * x; },
        [](double x) { return 1.0 + 2.0 * x; },
        // (sqrt(1 + 4y) - 1)/2 without cancellation
        [](double y) { return 2.0 * y / (1.0 + std::sqrt(1.0 + 4.0 * y)); },
        beta0);
  }
  if (label == "exp_ramp") {
    return Deformation(
        label, [](double x) { return std::expm1(x); },
        [](double x) { return std::exp(x); },
        [](double y) { return std::log1p(y); }, beta0);
  }
  if (label == "log1p") {
    return Deformation(
        label, [](double x) { return std::log1p(x); },
        [](double x) { return 1.0 / (1.0 + x); },
        [](double y) { return std::expm1(y); }, beta0);
  }
  if (label == "scaled") {
    return Deformation(
        label, [](double x) { return 2.0 * x; }, [](double) { return 2.0; },
        [](double y) { return 0.5 * y; }, beta0);
  }
  if (label == "tanh") {
    return Deformation(
        label, [](double x) { return std::tanh(x); },
        [](double x) {
          const double c = std::cosh(x);
          return 1.0 / (c * c);
        },
        [](double y) { return std::atanh(y); }, beta0);
  }
  std::string known;
  for (const auto& name : known_deformations()) known += " " + name;
  throw LabError(ErrorKind::InvalidArgument,
                 "unknown deformation '" + label + "'; available:" + known);
}

double deform_energy(const Deformation& d, double energy) {
  if (!(energy >= 0.0)) {
    throw LabError(ErrorKind::InvalidArgument,
                   "deform_energy needs H >= 0, got " + std::to_string(energy));
  }
  return d.f(d.beta0() * energy) / d.beta0();
}

double deformed_volume_density(const Deformation& d, double energy) {
  if (!(energy >= 0.0)) {
    throw LabError(ErrorKind::InvalidArgument,
                   "deformed_volume_density needs H >= 0");
  }
  return d.derivative(d.beta0() * energy);
}

PhasePoint CoordinateChange::forward(const PhasePoint& x) const {
  const double energy = 0.5 * x.squaredNorm();
  return (1.0 + phi(energy)) * x;
}

double CoordinateChange::transformed_energy(double energy) const {
  const double scale = 1.0 + phi(energy);
  return scale * scale * energy;
}

double CoordinateChange::jacobian(double energy) const {
  const double scale = 1.0 + phi(energy);
  return scale * (scale + 2.0 * energy * phi_prime(energy));
}

PhasePoint coordinate_change_apply(const CoordinateChange& change,
                                   const PhasePoint& x) {
  return change.forward(x);
}

}  // namespace hamlab
