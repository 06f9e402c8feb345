#include "mdspin/external_field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mdspin/errors.hpp"

namespace mdspin {

namespace {

void require_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("tau", "must be positive and finite");
}

std::string describe(const char* kind, std::initializer_list<std::pair<const char*, double>> params) {
  std::ostringstream os;
  os.precision(17);
  os << kind << "(";
  bool first = true;
  for (const auto& [k, v] : params) {
    if (!first) os << ", ";
    os << k << "=" << v;
    first = false;
  }
  os << ")";
  return os.str();
}

}  // namespace

HomogeneousField::HomogeneousField(double b_ext, double theta, double tau)
    : b_ext_(b_ext), theta_(theta), tau_(tau) {
  require_tau(tau);
  if (!std::isfinite(b_ext)) throw DomainError("b_ext", "must be finite");
  if (!std::isfinite(theta)) throw DomainError("theta", "must be finite");
}

Vec3 HomogeneousField::vector() const {
  return {0.0, -std::sin(theta_) * b_ext_, std::cos(theta_) * b_ext_};
}

InhomogeneousField::InhomogeneousField(Profile profile, Profile gradient, double tau, double z_min,
                                       double z_max, std::string description)
    : profile_(std::move(profile)),
      gradient_(std::move(gradient)),
      tau_(tau),
      z_min_(z_min),
      z_max_(z_max),
      description_(std::move(description)) {
  require_tau(tau);
  if (!profile_ || !gradient_) throw DomainError("profile", "profile and gradient are required");
  if (!std::isfinite(z_min) || !std::isfinite(z_max) || !(z_min < z_max))
    throw DomainError("z_range", "z_min must be below z_max");
  check_gradient();
}

void InhomogeneousField::check_gradient() const {
  constexpr int kSamples = 33;
  const double width = z_max_ - z_min_;
  const double h = width * 1e-4;

  double b_scale = 0.0;
  for (int k = 0; k < kSamples; ++k) {
    const double z = z_min_ + width * k / (kSamples - 1);
    b_scale = std::max(b_scale, std::abs(profile_(z)));
  }

  for (int k = 0; k < kSamples; ++k) {
    // Stay h inside the interval so the stencil never leaves it.
    const double z = (z_min_ + h) + (width - 2.0 * h) * k / (kSamples - 1);
    const double lo = profile_(z - h);
    const double hi = profile_(z + h);
    const double g = gradient_(z);
    if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(g))
      throw DomainError("profile", "not finite at z = " + std::to_string(z));
    const double numeric = (hi - lo) / (2.0 * h);
    const double scale = std::max({std::abs(g), b_scale / width, 1e-300});
    if (std::abs(numeric - g) > 1e-6 * scale)
      throw DomainError("gradient", "does not match the profile derivative at z = " + std::to_string(z));
  }
}

void InhomogeneousField::check_range(double z) const {
  if (!contains(z)) {
    std::ostringstream os;
    os << "z = " << z << " outside field range [" << z_min_ << ", " << z_max_ << "]";
    throw RangeError(os.str());
  }
}

double InhomogeneousField::amplitude(double z) const {
  check_range(z);
  return profile_(z);
}

double InhomogeneousField::gradient(double z) const {
  check_range(z);
  return gradient_(z);
}

InhomogeneousField InhomogeneousField::scaled(double s) const {
  if (!std::isfinite(s)) throw DomainError("scale", "must be finite");
  auto p = profile_;
  auto g = gradient_;
  std::ostringstream os;
  os.precision(17);
  os << s << "*" << description_;
  return InhomogeneousField([p, s](double z) { return s * p(z); },
                            [g, s](double z) { return s * g(z); }, tau_, z_min_, z_max_, os.str());
}

InhomogeneousField InhomogeneousField::affine(double b0, double g, double z_min, double z_max,
                                              double tau) {
  return InhomogeneousField([b0, g](double z) { return b0 + g * z; },
                            [g](double) { return g; }, tau, z_min, z_max,
                            describe("affine", {{"b0", b0}, {"g", g}}));
}

InhomogeneousField InhomogeneousField::quadratic(double b0, double g, double q, double z_min,
                                                 double z_max, double tau) {
  return InhomogeneousField([b0, g, q](double z) { return b0 + (g + q * z) * z; },
                            [g, q](double z) { return g + 2.0 * q * z; }, tau, z_min, z_max,
                            describe("quadratic", {{"b0", b0}, {"g", g}, {"q", q}}));
}

InhomogeneousField InhomogeneousField::constant_force(double b0, double f, double z_min,
                                                      double z_max, double tau) {
  auto radicand = [b0, f](double z) { return b0 * b0 + 2.0 * f * z; };
  if (!(radicand(z_min) > 0.0) || !(radicand(z_max) > 0.0))
    throw DomainError("force", "b0^2 + 2 f z must stay positive over the z range");
  return InhomogeneousField([radicand](double z) { return std::sqrt(radicand(z)); },
                            [radicand, f](double z) { return f / std::sqrt(radicand(z)); }, tau,
                            z_min, z_max, describe("constant_force", {{"b0", b0}, {"f", f}}));
}

}  // namespace mdspin
