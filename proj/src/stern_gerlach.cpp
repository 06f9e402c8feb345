#include "mdspin/stern_gerlach.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

namespace mdspin::stern_gerlach {

const char* to_string(ForceLaw law) { return law == ForceLaw::Microdynamic ? "md" : "qm"; }

const char* to_string(BranchPolicy policy) {
  switch (policy) {
    case BranchPolicy::FixedPlus:
      return "plus";
    case BranchPolicy::FixedMinus:
      return "minus";
    case BranchPolicy::PhaseSampled:
      return "phase";
  }
  return "?";
}

void MagnetGeometry::validate() const {
  if (!(length_x > 0.0) || !std::isfinite(length_x)) throw DomainError("length_x", "must be positive");
  if (!(drift_x >= 0.0) || !std::isfinite(drift_x)) throw DomainError("drift_x", "must be non-negative");
  if (!field.contains(z_entry)) throw DomainError("z_entry", "must lie inside the field z range");
}

double kinetic_density_change_z(const InhomogeneousField& field, double z) {
  const double b = field.amplitude(z);
  return 0.5 * b * b;
}

double kinetic_density_branch_z(const InhomogeneousField& field, double z, Branch branch,
                                const UnitsLedger& units) {
  const double b = field.amplitude(z);
  return -sign(branch) * 0.5 * units.coupling() * b * b;
}

double force_md(const InhomogeneousField& field, double z, Branch branch, const UnitsLedger& units) {
  return sign(branch) * units.coupling() * field.amplitude(z) * field.gradient(z);
}

double force_qm_baseline(const InhomogeneousField& field, double z, Branch branch,
                         const UnitsLedger& units) {
  return sign(branch) * 0.5 * units.hbar() * field.gradient(z);
}

double force(ForceLaw law, const InhomogeneousField& field, double z, Branch branch,
             const UnitsLedger& units) {
  return law == ForceLaw::Microdynamic ? force_md(field, z, branch, units)
                                       : force_qm_baseline(field, z, branch, units);
}

Trajectory integrate_trajectory(const ParticleState& state, const MagnetGeometry& geometry,
                                Branch branch, ForceLaw law, double dt, const UnitsLedger& units) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt", "must be positive and finite");
  geometry.validate();

  const auto& field = geometry.field;
  const double u0 = state.u0();
  const double rho0 = state.rho0();
  const double transit = geometry.length_x / u0;
  const long steps = std::max(1L, static_cast<long>(std::ceil(transit / dt - 1e-9)));

  Trajectory traj;
  traj.branch = branch;
  traj.law = law;
  traj.field_description = field.description();
  traj.dt = dt;
  traj.samples.reserve(static_cast<std::size_t>(steps) + 2);

  double z = geometry.z_entry;
  double uz = 0.0;
  traj.samples.push_back({0.0, 0.0, z, u0, 0.0});

  auto accel = [&](double zz) {
    if (!field.contains(zz)) {
      std::ostringstream os;
      os << "particle left the field range at z = " << zz << " inside the magnet (branch "
         << to_string(branch) << ")";
      throw EscapeError(os.str(), traj.samples.back());
    }
    return force(law, field, zz, branch, units) / rho0;
  };

  for (long k = 0; k < steps; ++k) {
    const double t0 = k * dt;
    const double h = (k + 1 == steps) ? transit - t0 : dt;

    const double k1z = uz;
    const double k1u = accel(z);
    const double k2z = uz + 0.5 * h * k1u;
    const double k2u = accel(z + 0.5 * h * k1z);
    const double k3z = uz + 0.5 * h * k2u;
    const double k3u = accel(z + 0.5 * h * k2z);
    const double k4z = uz + h * k3u;
    const double k4u = accel(z + h * k3z);

    z += h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
    uz += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);

    if (!std::isfinite(z) || !std::isfinite(uz))
      throw SolverError("trajectory diverged at step " + std::to_string(k));
    accel(z);

    const double t1 = (k + 1 == steps) ? transit : t0 + h;
    const double x1 = (k + 1 == steps) ? geometry.length_x : u0 * t1;
    traj.samples.push_back({t1, x1, z, u0, uz});
  }

  if (geometry.drift_x > 0.0) {
    const double t_drift = geometry.drift_x / u0;
    traj.samples.push_back({transit + t_drift, geometry.length_x + geometry.drift_x,
                            z + uz * t_drift, u0, uz});
  }
  return traj;
}

Branch branch_from_phase(double phase) {
  return phase < std::numbers::pi ? Branch::Plus : Branch::Minus;
}

BeamResult run_beam(const BeamSpec& beam, const MagnetGeometry& geometry, ForceLaw law, double dt,
                    const UnitsLedger& units) {
  if (beam.n_particles < 1) throw DomainError("n_particles", "must be at least 1");
  geometry.validate();

  // Every particle of a branch follows the same path, so each branch is
  // integrated at most once.
  struct Outcome {
    bool escaped = false;
    TrajectorySample sample;
  };
  std::optional<Outcome> cache[2];
  auto outcome = [&](Branch b) -> const Outcome& {
    auto& slot = cache[b == Branch::Plus ? 0 : 1];
    if (!slot) {
      try {
        slot = Outcome{false, integrate_trajectory(beam.state, geometry, b, law, dt, units).detector_hit()};
      } catch (const EscapeError& e) {
        slot = Outcome{true, e.last_valid()};
      }
    }
    return *slot;
  };

  std::mt19937_64 rng(beam.seed);
  BeamResult result;
  result.hits.reserve(static_cast<std::size_t>(beam.n_particles));

  double sum_plus = 0.0, sum_minus = 0.0;
  for (int i = 0; i < beam.n_particles; ++i) {
    DetectorHit hit;
    hit.index = i;
    switch (beam.policy) {
      case BranchPolicy::FixedPlus:
        hit.phase = beam.state.phase0();
        hit.branch = Branch::Plus;
        break;
      case BranchPolicy::FixedMinus:
        hit.phase = beam.state.phase0();
        hit.branch = Branch::Minus;
        break;
      case BranchPolicy::PhaseSampled: {
        // Top 53 bits -> [0, 1); independent of the library's distributions.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        hit.phase = 2.0 * std::numbers::pi * u;
        hit.branch = branch_from_phase(hit.phase);
        break;
      }
    }
    const auto& o = outcome(hit.branch);
    hit.escaped = o.escaped;
    hit.sample = o.sample;

    auto& s = hit.branch == Branch::Plus ? result.summary.plus : result.summary.minus;
    ++s.count;
    if (hit.escaped) {
      ++s.escaped;
    } else {
      (hit.branch == Branch::Plus ? sum_plus : sum_minus) += hit.sample.z - geometry.z_entry;
    }
    result.hits.push_back(hit);
  }

  auto finish = [&](BranchSummary& s, double sum) {
    const int n = s.count - s.escaped;
    if (n > 0) {
      s.mean_deflection = sum / n;
      s.mean_z = geometry.z_entry + s.mean_deflection;
    }
    return n > 0;
  };
  const bool plus_ok = finish(result.summary.plus, sum_plus);
  const bool minus_ok = finish(result.summary.minus, sum_minus);
  if (plus_ok && minus_ok) result.summary.separation =
        result.summary.plus.mean_deflection - result.summary.minus.mean_deflection;
  return result;
}

}  // namespace mdspin::stern_gerlach
