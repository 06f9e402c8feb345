#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdspin/core_model.hpp"
#include "mdspin/errors.hpp"
#include "mdspin/external_field.hpp"

namespace mdspin::stern_gerlach {

enum class ForceLaw {
  Microdynamic,  // sign * hbar c^2 B_E dB_E/dz
  Quantum,       // sign * (hbar/2) dB_E/dz
};

const char* to_string(ForceLaw law);

struct MagnetGeometry {
  double length_x = 1.0;
  double drift_x = 0.0;
  double z_entry = 0.0;
  InhomogeneousField field;

  void validate() const;
};

// (1/2) B_E(z)^2
double kinetic_density_change_z(const InhomogeneousField& field, double z);
// Branch-resolved kinetic density change -sign (hbar/2) c^2 B_E(z)^2; the
// force is minus its z derivative.
double kinetic_density_branch_z(const InhomogeneousField& field, double z, Branch branch,
                                const UnitsLedger& units = {});

double force_md(const InhomogeneousField& field, double z, Branch branch,
                const UnitsLedger& units = {});
double force_qm_baseline(const InhomogeneousField& field, double z, Branch branch,
                         const UnitsLedger& units = {});
double force(ForceLaw law, const InhomogeneousField& field, double z, Branch branch,
             const UnitsLedger& units = {});

struct TrajectorySample {
  double t = 0.0;
  double x = 0.0;
  double z = 0.0;
  double u_x = 0.0;
  double u_z = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  Branch branch = Branch::Plus;
  ForceLaw law = ForceLaw::Microdynamic;
  std::string field_description;
  double dt = 0.0;

  const TrajectorySample& detector_hit() const { return samples.back(); }
};

// The particle left the field's z range inside the magnet.
class EscapeError : public SolverError {
public:
  EscapeError(const std::string& what, TrajectorySample last)
      : SolverError(what), last_(last) {}
  const TrajectorySample& last_valid() const { return last_; }

private:
  TrajectorySample last_;
};

// RK4 on (z, u_z) with du_z/dt = F(z)/rho0 while x advances at u0 across the
// magnet, then a straight drift. The last magnet step is shortened so the
// exit lands exactly on x = length_x.
Trajectory integrate_trajectory(const ParticleState& state, const MagnetGeometry& geometry,
                                Branch branch, ForceLaw law, double dt,
                                const UnitsLedger& units = {});

enum class BranchPolicy { FixedPlus, FixedMinus, PhaseSampled };

const char* to_string(BranchPolicy policy);

struct BeamSpec {
  int n_particles = 1;
  ParticleState state = make_particle(1.0, 1.0, 1.0, 1.0);
  BranchPolicy policy = BranchPolicy::PhaseSampled;
  std::uint64_t seed = 0;
};

struct DetectorHit {
  int index = 0;
  Branch branch = Branch::Plus;
  double phase = 0.0;
  bool escaped = false;
  TrajectorySample sample;  // detector hit, or last valid sample if escaped
};

struct BranchSummary {
  int count = 0;
  int escaped = 0;
  double mean_z = 0.0;
  double mean_deflection = 0.0;  // mean_z - z_entry
};

struct BeamSummary {
  BranchSummary plus;
  BranchSummary minus;
  double separation = 0.0;  // mean_z(+) - mean_z(-), 0 unless both branches hit
};

struct BeamResult {
  std::vector<DetectorHit> hits;  // ordered by particle index
  BeamSummary summary;
};

// Deterministic for a fixed seed. Escapes are recorded per particle.
BeamResult run_beam(const BeamSpec& beam, const MagnetGeometry& geometry, ForceLaw law, double dt,
                    const UnitsLedger& units = {});

// Branch drawn from the intrinsic phase: + on [0, pi), - on [pi, 2 pi).
Branch branch_from_phase(double phase);

}  // namespace mdspin::stern_gerlach
