#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace mdspin {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  double norm2() const { return x * x + y * y + z * z; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

// Scale factors linking field energy density to mechanical quantities.
// hbar = c = 1 recovers the unscaled relations.
class UnitsLedger {
public:
  static constexpr double kHbarSI = 1.054e-34;

  UnitsLedger() = default;
  UnitsLedger(double hbar, double c);

  double hbar() const { return hbar_; }
  double c() const { return c_; }
  // hbar * c^2, the combination every scaled result carries.
  double coupling() const { return hbar_ * c_ * c_; }

private:
  double hbar_ = 1.0;
  double c_ = 1.0;
};

// One of the two symmetric solutions obtained by splitting the external
// field into real and imaginary parts of equal amplitude.
enum class Branch : int { Plus = 1, Minus = -1 };

constexpr double sign(Branch b) { return b == Branch::Plus ? 1.0 : -1.0; }
constexpr Branch operator-(Branch b) { return b == Branch::Plus ? Branch::Minus : Branch::Plus; }
const char* to_string(Branch b);

// Intrinsic plane-wave state of a single particle. Only constructible
// through make_particle so that E0 = u0 * B0 and omega0 = u0 * k0 always hold.
class ParticleState {
public:
  double rho0() const { return rho0_; }
  double u0() const { return u0_; }
  double k0() const { return k0_; }
  double omega0() const { return omega0_; }
  double E0() const { return E0_; }
  double B0() const { return B0_; }
  double phase0() const { return phase0_; }

  // k0 x - omega0 t + phase0
  double phase_at(double x, double t) const { return k0_ * x - omega0_ * t + phase0_; }

private:
  friend ParticleState make_particle(double, double, double, double, double);
  ParticleState() = default;

  double rho0_ = 1.0;
  double u0_ = 1.0;
  double k0_ = 1.0;
  double omega0_ = 1.0;
  double E0_ = 1.0;
  double B0_ = 1.0;
  double phase0_ = 0.0;
};

// Throws DomainError naming the offending field for rho0, u0, k0 <= 0 or B0 < 0.
// phase0 is wrapped into [0, 2pi).
ParticleState make_particle(double rho0, double u0, double k0, double B0, double phase0 = 0.0);

struct IntrinsicFields {
  Vec3 E;
  Vec3 B;
};

// Real part of the polarized plane wave: E along y, B along z.
IntrinsicFields intrinsic_fields_at(const ParticleState& state, double x, double t);

enum class EnergyMode {
  Intrinsic,  // (1/2)(E^2/u^2 + B^2)
  Natural,    // (hbar/2)(E^2 + c^2 B^2)
};

double energy_density_intrinsic(const Vec3& E, const Vec3& B, double u);
double energy_density_natural(const Vec3& E, const Vec3& B, const UnitsLedger& units);

// Dispatches on mode; `u` is only read in Intrinsic mode.
double energy_density(const Vec3& E, const Vec3& B, const UnitsLedger& units,
                      EnergyMode mode = EnergyMode::Natural, double u = 1.0);

// Field-vs-kinetic energy bookkeeping for one branch.
struct InteractionResult {
  double delta_phi_em = 0.0;
  double delta_phi_k = 0.0;
  double delta_rho = 0.0;
  double delta_u = 0.0;
  Branch branch = Branch::Plus;

  double total() const { return delta_phi_em + delta_phi_k; }
};

}  // namespace mdspin
