#include "mdspin/homogeneous.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mdspin/errors.hpp"

namespace mdspin::homogeneous {

RampSchedule::RampSchedule(double tau, Shape shape) : tau_(tau), shape_(shape) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("tau", "must be positive and finite");
}

double RampSchedule::fraction(double t) const {
  if (!(t >= 0.0 && t <= tau_)) {
    std::ostringstream os;
    os << "t = " << t << " outside ramp interval [0, " << tau_ << "]";
    throw RangeError(os.str());
  }
  return t / tau_;
}

double RampSchedule::rate(double t) const {
  fraction(t);
  return 1.0 / tau_;
}

RampedFields ramped_fields(const ParticleState& state, const HomogeneousField& field, double x,
                           double t) {
  const RampSchedule ramp(field.tau());
  const double f = ramp.fraction(t);
  const double wave = std::cos(state.phase_at(x, t));
  const double b = field.b_ext();
  const double s = std::sin(field.theta());
  const double c = std::cos(field.theta());
  // Induced field from -dB/dt = curl E with dB/dt = b / tau.
  const double induced = b * x * ramp.rate(t);

  RampedFields out;
  out.E_y = state.E0() * wave - c * induced;
  out.E_z = -s * induced;
  out.B_y = -s * b * f;
  out.B_z = state.B0() * wave + c * b * f;
  return out;
}

FieldEnergyChange field_energy_change(const ParticleState& state, const HomogeneousField& field,
                                      double x) {
  const double b2 = field.b_ext() * field.b_ext();
  const double u0 = state.u0();
  const double tau = field.tau();
  return {0.5 * b2 / (u0 * u0) * (x * x) / (tau * tau), 0.5 * b2};
}

double delta_phi_em(const ParticleState& state, const HomogeneousField& field, double x) {
  return field_energy_change(state, field, x).total();
}

double delta_rho_analytic(const ParticleState& state, const HomogeneousField& field) {
  const double u0 = state.u0();
  return -0.5 * field.b_ext() * field.b_ext() / (u0 * u0);
}

namespace {

void require_resolution(int resolution) {
  if (resolution < 16) throw DomainError("resolution", "must be at least 16");
}

// Trapezoidal double integration of rho'' = forcing[n] from rest.
std::vector<double> integrate_samples(const std::vector<double>& forcing, double dt) {
  const std::size_t n = forcing.size();
  std::vector<double> rho(n, 0.0);
  double v = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double v_next = v + 0.5 * dt * (forcing[k - 1] + forcing[k]);
    rho[k] = rho[k - 1] + 0.5 * dt * (v + v_next);
    v = v_next;
  }
  return rho;
}

// rho history over the ramp. The particle crosses one grid cell per time
// step (dx = u0 dt), so the forcing at step n is -Lap(phi) at node n.
std::vector<double> density_history(const ParticleState& state, const HomogeneousField& field,
                                    int resolution) {
  require_resolution(resolution);
  const int n = resolution;
  const double tau = field.tau();
  const double dt = tau / n;
  const double dx = state.u0() * dt;

  std::vector<double> phi(n + 1);
  for (int i = 0; i <= n; ++i) phi[i] = field_energy_change(state, field, i * dx).dynamic;

  std::vector<double> lap(n + 1);
  const double inv_dx2 = 1.0 / (dx * dx);
  for (int i = 1; i < n; ++i) lap[i] = (phi[i - 1] - 2.0 * phi[i] + phi[i + 1]) * inv_dx2;
  // Second-order one-sided stencils at the region ends.
  lap[0] = (2.0 * phi[0] - 5.0 * phi[1] + 4.0 * phi[2] - phi[3]) * inv_dx2;
  lap[n] = (2.0 * phi[n] - 5.0 * phi[n - 1] + 4.0 * phi[n - 2] - phi[n - 3]) * inv_dx2;

  std::vector<double> forcing(n + 1);
  for (int i = 0; i <= n; ++i) forcing[i] = -lap[i];

  auto rho = integrate_samples(forcing, dt);

  // Self-check: the discrete second difference of the history must
  // reproduce the forcing and every value must be finite.
  double scale = 0.0;
  for (double f : forcing) scale = std::max(scale, std::abs(f));
  double worst = 0.0;
  int worst_at = -1;
  for (int k = 0; k <= n; ++k) {
    if (!std::isfinite(rho[k])) {
      throw SolverError("density integration produced a non-finite value at step " +
                        std::to_string(k) + " of " + std::to_string(n));
    }
    if (k == 0 || k == n) continue;
    const double second = (rho[k - 1] - 2.0 * rho[k] + rho[k + 1]) / (dt * dt);
    const double avg = 0.25 * (forcing[k - 1] + 2.0 * forcing[k] + forcing[k + 1]);
    const double r = std::abs(second - avg);
    if (r > worst) {
      worst = r;
      worst_at = k;
    }
  }
  // Round-off in a second difference grows like eps n^2.
  const double allowed =
      std::max(1e-6, 64.0 * std::numeric_limits<double>::epsilon() * double(n) * n) * scale;
  if (worst > allowed) {
    std::ostringstream os;
    os << "density integration residual " << worst << " at step " << worst_at << " exceeds tolerance"
       << " (forcing scale " << scale << ", resolution " << n << ")";
    throw SolverError(os.str());
  }
  return rho;
}

double trapezoid(const std::vector<double>& y, double h) {
  if (y.size() < 2) return 0.0;
  double s = 0.5 * (y.front() + y.back());
  for (std::size_t k = 1; k + 1 < y.size(); ++k) s += y[k];
  return s * h;
}

}  // namespace

std::vector<double> integrate_from_rest(const std::function<double(double)>& forcing, double t_end,
                                        int n) {
  if (n < 1) throw DomainError("n", "must be at least 1");
  if (!(t_end > 0.0)) throw DomainError("t_end", "must be positive");
  const double dt = t_end / n;
  std::vector<double> samples(n + 1);
  for (int k = 0; k <= n; ++k) samples[k] = forcing(k * dt);
  return integrate_samples(samples, dt);
}

double delta_rho_numeric(const ParticleState& state, const HomogeneousField& field, int resolution) {
  return density_history(state, field, resolution).back();
}

KineticBranches kinetic_branches(double b_e, const UnitsLedger& units) {
  if (!(b_e >= 0.0)) throw DomainError("b_e", "must be non-negative");
  const double level = 0.5 * units.coupling() * b_e * b_e;
  return {-level, level};
}

double phase_velocity_shift(const ParticleState& state, double b_e, Branch branch) {
  if (!(b_e >= 0.0)) throw DomainError("b_e", "must be non-negative");
  return sign(branch) * b_e / std::sqrt(state.rho0());
}

double phase_velocity_shift_numeric(const ParticleState& state, const HomogeneousField& field,
                                    int resolution, Branch branch) {
  const auto rho = density_history(state, field, resolution);
  const int n = resolution;
  const double tau = field.tau();
  const double x1 = state.u0() * tau;

  // Density rate averaged over the ramp.
  const double rate = (rho[n] - rho[0]) / tau;

  // rho0 du(x1, tau) = -int_0^x1 rate dx'
  const std::vector<double> integrand(n + 1, rate);
  const double rho0_du = -trapezoid(integrand, x1 / n);

  // u0 du = (1/2) du^2 for the complex-field pair of solutions.
  const double u0_du = state.u0() * rho0_du / state.rho0();
  if (!std::isfinite(u0_du)) throw SolverError("phase velocity integration produced a non-finite value");
  return sign(branch) * std::sqrt(2.0 * std::max(u0_du, 0.0));
}

InteractionResult interact(const ParticleState& state, const HomogeneousField& field, Branch branch,
                           const UnitsLedger& units) {
  const double b_e = std::abs(field.b_ext());
  const auto k = kinetic_branches(b_e, units);
  InteractionResult r;
  r.branch = branch;
  r.delta_phi_k = branch == Branch::Plus ? k.plus : k.minus;
  r.delta_phi_em = -r.delta_phi_k;
  r.delta_rho = delta_rho_analytic(state, field);
  r.delta_u = phase_velocity_shift(state, b_e, branch);
  return r;
}

FringeShiftResult fringe_shift(const ParticleState& state, const HomogeneousField& field,
                               double path_length, Branch branch) {
  if (!(path_length > 0.0) || !std::isfinite(path_length))
    throw DomainError("path_length", "must be positive and finite");
  const double du = phase_velocity_shift(state, std::abs(field.b_ext()), branch);
  const double u0 = state.u0();
  if (!(u0 + du > 0.0)) throw DomainError("delta_u", "u0 + delta_u must stay positive");

  FringeShiftResult r;
  r.delta_u = du;
  r.path_length = path_length;
  r.branch = branch;
  r.delta_phase = -state.omega0() * path_length * du / (u0 * u0);
  r.delta_phase_exact = state.omega0() * path_length * (1.0 / (u0 + du) - 1.0 / u0);
  return r;
}

}  // namespace mdspin::homogeneous
