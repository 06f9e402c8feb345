#pragma once

#include <functional>
#include <vector>

#include "mdspin/core_model.hpp"
#include "mdspin/external_field.hpp"

namespace mdspin::homogeneous {

// Fraction of the external field switched on at time t.
class RampSchedule {
public:
  enum class Shape { Linear };

  explicit RampSchedule(double tau, Shape shape = Shape::Linear);

  double tau() const { return tau_; }
  Shape shape() const { return shape_; }
  // Throws RangeError for t outside [0, tau].
  double fraction(double t) const;
  // d fraction / dt
  double rate(double t) const;

private:
  double tau_;
  Shape shape_;
};

struct RampedFields {
  double E_y = 0.0;
  double E_z = 0.0;
  double B_y = 0.0;
  double B_z = 0.0;
};

// Primed intrinsic fields during the ramp. External B terms follow the ramp
// fraction; the induced E terms follow Faraday's law for the linear ramp and
// are constant in time. At t = tau this is the fully switched-on configuration.
RampedFields ramped_fields(const ParticleState& state, const HomogeneousField& field, double x,
                           double t);

// Change of field energy density at position x once the ramp is complete.
struct FieldEnergyChange {
  double dynamic = 0.0;   // (1/2) b^2/u0^2 x^2/tau^2, from the switching
  double constant = 0.0;  // (1/2) b^2, the static field
  double total() const { return dynamic + constant; }
};

FieldEnergyChange field_energy_change(const ParticleState& state, const HomogeneousField& field,
                                      double x);
double delta_phi_em(const ParticleState& state, const HomogeneousField& field, double x);

// -(1/2) b_ext^2 / u0^2
double delta_rho_analytic(const ParticleState& state, const HomogeneousField& field);

// Double time integration of rho'' = forcing(t) from rest over [0, t_end] with
// the explicit trapezoidal rule. Returns rho at every one of the n+1 nodes.
std::vector<double> integrate_from_rest(const std::function<double(double)>& forcing, double t_end,
                                        int n);

// Integrates Laplacian(phi) + d^2 rho/dt^2 = 0 on a uniform (x, t) grid of
// `resolution` intervals, phi being the switching term of the field energy
// change. Throws DomainError for resolution < 16, SolverError if the computed
// history fails its residual check.
double delta_rho_numeric(const ParticleState& state, const HomogeneousField& field, int resolution);

// (delta_phi_k_plus, delta_phi_k_minus) = (-, +)(hbar/2) c^2 B_E^2
struct KineticBranches {
  double plus = 0.0;
  double minus = 0.0;
};
KineticBranches kinetic_branches(double b_e, const UnitsLedger& units = {});

// sign(branch) * B_E / sqrt(rho0)
double phase_velocity_shift(const ParticleState& state, double b_e, Branch branch);

// Linearized continuity equation integrated over the ramp on a grid of
// `resolution` intervals, evaluated at t = tau, x = u0 tau.
double phase_velocity_shift_numeric(const ParticleState& state, const HomogeneousField& field,
                                    int resolution, Branch branch);

// Branch-resolved energy bookkeeping with B_E = b_ext. The field and kinetic
// parts cancel exactly.
InteractionResult interact(const ParticleState& state, const HomogeneousField& field, Branch branch,
                           const UnitsLedger& units = {});

struct FringeShiftResult {
  double delta_u = 0.0;
  double path_length = 0.0;
  // -omega0 L delta_u / u0^2
  double delta_phase = 0.0;
  // omega0 L (1/(u0 + delta_u) - 1/u0)
  double delta_phase_exact = 0.0;
  Branch branch = Branch::Plus;
};

// Phase of the beam crossing a field region of length L relative to the
// unperturbed reference beam. Throws DomainError for L <= 0 or u0 + du <= 0.
FringeShiftResult fringe_shift(const ParticleState& state, const HomogeneousField& field,
                               double path_length, Branch branch);

}  // namespace mdspin::homogeneous
