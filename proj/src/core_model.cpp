#include "mdspin/core_model.hpp"

#include <cmath>
#include <numbers>

#include "mdspin/errors.hpp"

namespace mdspin {

UnitsLedger::UnitsLedger(double hbar, double c) : hbar_(hbar), c_(c) {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("hbar", "must be positive and finite");
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("c", "must be positive and finite");
}

const char* to_string(Branch b) { return b == Branch::Plus ? "+" : "-"; }

ParticleState make_particle(double rho0, double u0, double k0, double B0, double phase0) {
  auto positive = [](const char* name, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(name, "must be positive and finite");
  };
  positive("rho0", rho0);
  positive("u0", u0);
  positive("k0", k0);
  if (!(B0 >= 0.0) || !std::isfinite(B0)) throw DomainError("B0", "must be non-negative and finite");
  if (!std::isfinite(phase0)) throw DomainError("phase0", "must be finite");

  constexpr double two_pi = 2.0 * std::numbers::pi;
  double phase = std::fmod(phase0, two_pi);
  if (phase < 0.0) phase += two_pi;
  if (phase >= two_pi) phase = 0.0;

  ParticleState s;
  s.rho0_ = rho0;
  s.u0_ = u0;
  s.k0_ = k0;
  s.omega0_ = u0 * k0;
  s.B0_ = B0;
  s.E0_ = u0 * B0;
  s.phase0_ = phase;
  return s;
}

IntrinsicFields intrinsic_fields_at(const ParticleState& state, double x, double t) {
  const double c = std::cos(state.phase_at(x, t));
  return {Vec3{0.0, state.E0() * c, 0.0}, Vec3{0.0, 0.0, state.B0() * c}};
}

double energy_density_intrinsic(const Vec3& E, const Vec3& B, double u) {
  if (!(u > 0.0)) throw DomainError("u", "must be positive");
  return 0.5 * (E.norm2() / (u * u) + B.norm2());
}

double energy_density_natural(const Vec3& E, const Vec3& B, const UnitsLedger& units) {
  const double c = units.c();
  return 0.5 * units.hbar() * (E.norm2() + c * c * B.norm2());
}

double energy_density(const Vec3& E, const Vec3& B, const UnitsLedger& units, EnergyMode mode,
                      double u) {
  switch (mode) {
    case EnergyMode::Intrinsic:
      return energy_density_intrinsic(E, B, u);
    case EnergyMode::Natural:
      return energy_density_natural(E, B, units);
  }
  return 0.0;
}

}  // namespace mdspin
