#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <vector>

#include "mdspin/core_model.hpp"

namespace mdspin::coupled {

// Row-major (time, space) array.
class Field2D {
public:
  Field2D() = default;
  Field2D(int nt, int nx, double value = 0.0) : nt_(nt), nx_(nx), data_(std::size_t(nt) * nx, value) {}

  double& operator()(int n, int i) { return data_[std::size_t(n) * nx_ + i]; }
  double operator()(int n, int i) const { return data_[std::size_t(n) * nx_ + i]; }
  int nt() const { return nt_; }
  int nx() const { return nx_; }
  const std::vector<double>& data() const { return data_; }

  double max_abs() const;

private:
  int nt_ = 0;
  int nx_ = 0;
  std::vector<double> data_;
};

enum class Boundary { Periodic, Dirichlet };

// Complex magnetic field B_r + i B_i and the quadratic combinations of the
// complex mass amplitude psi_r + i psi_i, P = psi_r^2 - psi_i^2 and
// Q = psi_r psi_i, sampled on x_i = x0 + i dx, t_n = t0 + n dt.
class CoupledFieldGrid {
public:
  // Throws ConfigError for nx, nt < 1 or non-positive spacings.
  CoupledFieldGrid(int nx, int nt, double dx, double dt, UnitsLedger units = {}, double x0 = 0.0,
                   double t0 = 0.0);

  int nx() const { return nx_; }
  int nt() const { return nt_; }
  double dx() const { return dx_; }
  double dt() const { return dt_; }
  double x(int i) const { return x0_ + i * dx_; }
  double t(int n) const { return t0_ + n * dt_; }
  const UnitsLedger& units() const { return units_; }

  Field2D B_r, B_i, P, Q;

  // Fills one time level from psi components.
  void set_mass_amplitude(int n, int i, double psi_r, double psi_i);

  using Sampler = std::function<std::complex<double>(double t, double x)>;
  // Samples B and psi at every grid point.
  void fill(const Sampler& magnetic, const Sampler& amplitude);
  void fill_magnetic(const Sampler& magnetic);

  // Swaps real and imaginary labels: B_r <-> B_i, psi_r <-> psi_i.
  CoupledFieldGrid relabeled() const;
  // Every component multiplied by alpha.
  CoupledFieldGrid scaled(double alpha) const;

  // One row per grid point: t,x,B_r,B_i,P,Q. Every `stride`-th time level.
  void write_csv(std::ostream& os, int stride = 1) const;

private:
  int nx_, nt_;
  double dx_, dt_, x0_, t0_;
  UnitsLedger units_;
};

struct ResidualNorms {
  double max = 0.0;
  double l2 = 0.0;  // sqrt(sum r^2 dx dt)
};

struct CoupledResidual {
  Field2D real_residual;  // (hbar/2) Lap(B_r^2 - B_i^2) + (1/c^2) d_tt P
  Field2D imag_residual;  // (hbar/2) Lap(B_r B_i) + (1/c^2) d_tt Q
  ResidualNorms real_norms;
  ResidualNorms imag_norms;
};

// Central differences at interior points; arrays are (nt-2) x (nx-2).
// Throws ConfigError if nx < 3 or nt < 3.
CoupledResidual residual(const CoupledFieldGrid& grid);

enum class DegenerateCase { I, II, III, IV };
const char* to_string(DegenerateCase c);

struct DegenerateCaseReport {
  DegenerateCase which;
  ResidualNorms real_norms;
  ResidualNorms imag_norms;
  bool cross_term_exactly_zero = false;
};

struct DegenerateReport {
  std::vector<DegenerateCaseReport> cases;  // I, II, III, IV
  bool i_iv_equivalent = false;
  bool ii_iii_equivalent = false;

  bool all_pass() const;
};

// Representative plane-wave grid for one degenerate configuration.
CoupledFieldGrid degenerate_grid(DegenerateCase which, int nx = 64, int nt = 64,
                                 const UnitsLedger& units = {});
DegenerateReport verify_degenerate_cases(const UnitsLedger& units = {});

struct EvolveOptions {
  Boundary boundary = Boundary::Periodic;
  double safety_factor = 0.5;
};

// Largest dt accepted for spacing dx.
double max_stable_dt(double dx, const UnitsLedger& units, double safety_factor);

// Advances P and Q from their first two time levels through the remaining
// nt - 2 levels with B held as prescribed data:
//   d_tt P = -(hbar c^2 / 2) Lap(B_r^2 - B_i^2),  d_tt Q = -(hbar c^2 / 2) Lap(B_r B_i).
// Throws ConfigError if the step bound is violated, SolverError on overflow.
CoupledFieldGrid evolve(CoupledFieldGrid grid, const EvolveOptions& options = {});

// Sets time level 1 from level 0 and initial rates dP/dt, dQ/dt by a Taylor
// step using the level-0 forcing.
void start_from_rates(CoupledFieldGrid& grid, const std::vector<double>& dP, const std::vector<double>& dQ,
                      const EvolveOptions& options = {});
void start_from_rest(CoupledFieldGrid& grid, const EvolveOptions& options = {});

}  // namespace mdspin::coupled
