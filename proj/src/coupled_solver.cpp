#include "mdspin/coupled_solver.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "mdspin/errors.hpp"
#include "mdspin/format.hpp"

namespace mdspin::coupled {

double Field2D::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

CoupledFieldGrid::CoupledFieldGrid(int nx, int nt, double dx, double dt, UnitsLedger units,
                                   double x0, double t0)
    : nx_(nx), nt_(nt), dx_(dx), dt_(dt), x0_(x0), t0_(t0), units_(units) {
  if (nx < 1) throw ConfigError("nx", "must be at least 1");
  if (nt < 1) throw ConfigError("nt", "must be at least 1");
  if (!(dx > 0.0) || !std::isfinite(dx)) throw ConfigError("dx", "must be positive and finite");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt", "must be positive and finite");
  B_r = Field2D(nt, nx);
  B_i = Field2D(nt, nx);
  P = Field2D(nt, nx);
  Q = Field2D(nt, nx);
}

void CoupledFieldGrid::set_mass_amplitude(int n, int i, double psi_r, double psi_i) {
  P(n, i) = psi_r * psi_r - psi_i * psi_i;
  Q(n, i) = psi_r * psi_i;
}

void CoupledFieldGrid::fill_magnetic(const Sampler& magnetic) {
  for (int n = 0; n < nt_; ++n)
    for (int i = 0; i < nx_; ++i) {
      const auto b = magnetic(t(n), x(i));
      B_r(n, i) = b.real();
      B_i(n, i) = b.imag();
    }
}

void CoupledFieldGrid::fill(const Sampler& magnetic, const Sampler& amplitude) {
  fill_magnetic(magnetic);
  for (int n = 0; n < nt_; ++n)
    for (int i = 0; i < nx_; ++i) {
      const auto psi = amplitude(t(n), x(i));
      set_mass_amplitude(n, i, psi.real(), psi.imag());
    }
}

CoupledFieldGrid CoupledFieldGrid::relabeled() const {
  CoupledFieldGrid g = *this;
  std::swap(g.B_r, g.B_i);
  // psi_r <-> psi_i flips P and leaves Q unchanged.
  for (int n = 0; n < nt_; ++n)
    for (int i = 0; i < nx_; ++i) g.P(n, i) = -P(n, i);
  return g;
}

CoupledFieldGrid CoupledFieldGrid::scaled(double alpha) const {
  CoupledFieldGrid g = *this;
  const double a2 = alpha * alpha;
  for (int n = 0; n < nt_; ++n)
    for (int i = 0; i < nx_; ++i) {
      g.B_r(n, i) = alpha * B_r(n, i);
      g.B_i(n, i) = alpha * B_i(n, i);
      g.P(n, i) = a2 * P(n, i);
      g.Q(n, i) = a2 * Q(n, i);
    }
  return g;
}

void CoupledFieldGrid::write_csv(std::ostream& os, int stride) const {
  if (stride < 1) stride = 1;
  os << "t,x,B_r,B_i,P,Q\n";
  for (int n = 0; n < nt_; ++n) {
    if (n % stride != 0 && n != nt_ - 1) continue;
    for (int i = 0; i < nx_; ++i) {
      os << format_number(t(n)) << ',' << format_number(x(i)) << ',' << format_number(B_r(n, i))
         << ',' << format_number(B_i(n, i)) << ',' << format_number(P(n, i)) << ','
         << format_number(Q(n, i)) << '\n';
    }
  }
}

namespace {

ResidualNorms norms(const Field2D& r, double dx, double dt) {
  ResidualNorms out;
  double sum = 0.0;
  for (double v : r.data()) {
    out.max = std::max(out.max, std::abs(v));
    sum += v * v;
  }
  out.l2 = std::sqrt(sum * dx * dt);
  return out;
}

}  // namespace

CoupledResidual residual(const CoupledFieldGrid& g) {
  if (g.nx() < 3) throw ConfigError("nx", "residual needs at least 3 grid points in x");
  if (g.nt() < 3) throw ConfigError("nt", "residual needs at least 3 time levels");

  const double half_hbar = 0.5 * g.units().hbar();
  const double inv_c2 = 1.0 / (g.units().c() * g.units().c());
  const double inv_dx2 = 1.0 / (g.dx() * g.dx());
  const double inv_dt2 = 1.0 / (g.dt() * g.dt());

  auto S = [&](int n, int i) { return g.B_r(n, i) * g.B_r(n, i) - g.B_i(n, i) * g.B_i(n, i); };
  auto C = [&](int n, int i) { return g.B_r(n, i) * g.B_i(n, i); };

  CoupledResidual r;
  r.real_residual = Field2D(g.nt() - 2, g.nx() - 2);
  r.imag_residual = Field2D(g.nt() - 2, g.nx() - 2);
  for (int n = 1; n + 1 < g.nt(); ++n) {
    for (int i = 1; i + 1 < g.nx(); ++i) {
      const double lap_s = (S(n, i - 1) - 2.0 * S(n, i) + S(n, i + 1)) * inv_dx2;
      const double lap_c = (C(n, i - 1) - 2.0 * C(n, i) + C(n, i + 1)) * inv_dx2;
      const double ptt = (g.P(n - 1, i) - 2.0 * g.P(n, i) + g.P(n + 1, i)) * inv_dt2;
      const double qtt = (g.Q(n - 1, i) - 2.0 * g.Q(n, i) + g.Q(n + 1, i)) * inv_dt2;
      r.real_residual(n - 1, i - 1) = half_hbar * lap_s + inv_c2 * ptt;
      r.imag_residual(n - 1, i - 1) = half_hbar * lap_c + inv_c2 * qtt;
    }
  }
  r.real_norms = norms(r.real_residual, g.dx(), g.dt());
  r.imag_norms = norms(r.imag_residual, g.dx(), g.dt());
  return r;
}

const char* to_string(DegenerateCase c) {
  switch (c) {
    case DegenerateCase::I:
      return "I";
    case DegenerateCase::II:
      return "II";
    case DegenerateCase::III:
      return "III";
    case DegenerateCase::IV:
      return "IV";
  }
  return "?";
}

bool DegenerateReport::all_pass() const {
  if (cases.size() != 4 || !i_iv_equivalent || !ii_iii_equivalent) return false;
  for (const auto& c : cases)
    if (!c.cross_term_exactly_zero) return false;
  return true;
}

CoupledFieldGrid degenerate_grid(DegenerateCase which, int nx, int nt, const UnitsLedger& units) {
  // One nonzero magnetic and one nonzero amplitude component, each the square
  // root of a travelling cosine, related so that the real equation holds.
  const double length = 2.0 * std::numbers::pi;
  const double dx = length / nx;
  const double dt = 0.5 * dx;
  const double k = 1.0, omega = 1.0;
  const double s0 = 1.0, a = 0.3;
  const bool b_real = which == DegenerateCase::I || which == DegenerateCase::II;
  const bool psi_real = which == DegenerateCase::I || which == DegenerateCase::III;
  const double sigma = (b_real ? 1.0 : -1.0) * (psi_real ? 1.0 : -1.0);
  const double b = -sigma * units.coupling() * k * k * a / (2.0 * omega * omega);
  const double r0 = 1.0 + std::abs(b);

  CoupledFieldGrid g(nx, nt, dx, dt, units);
  g.fill(
      [&](double t, double x) {
        const double m = std::sqrt(s0 + a * std::cos(k * x - omega * t));
        return b_real ? std::complex<double>(m, 0.0) : std::complex<double>(0.0, m);
      },
      [&](double t, double x) {
        const double m = std::sqrt(r0 + b * std::cos(k * x - omega * t));
        return psi_real ? std::complex<double>(m, 0.0) : std::complex<double>(0.0, m);
      });
  return g;
}

namespace {

bool all_zero(const Field2D& f) {
  for (double v : f.data())
    if (v != 0.0) return false;
  return true;
}

bool negated(const Field2D& a, const Field2D& b) {
  if (a.data().size() != b.data().size()) return false;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    if (a.data()[k] != -b.data()[k]) return false;
  return true;
}

bool same(const ResidualNorms& a, const ResidualNorms& b) { return a.max == b.max && a.l2 == b.l2; }

}  // namespace

DegenerateReport verify_degenerate_cases(const UnitsLedger& units) {
  DegenerateReport report;
  std::vector<CoupledResidual> res;
  std::vector<CoupledFieldGrid> grids;
  for (auto c : {DegenerateCase::I, DegenerateCase::II, DegenerateCase::III, DegenerateCase::IV}) {
    grids.push_back(degenerate_grid(c, 64, 64, units));
    res.push_back(residual(grids.back()));
    DegenerateCaseReport cr{c, res.back().real_norms, res.back().imag_norms,
                            all_zero(res.back().imag_residual)};
    report.cases.push_back(cr);
  }

  // Relabeling maps I onto IV and II onto III: the real residual changes sign,
  // the cross term is untouched.
  auto equivalent = [&](int a, int b) {
    const auto relabeled = residual(grids[a].relabeled());
    return same(res[a].real_norms, res[b].real_norms) && same(res[a].imag_norms, res[b].imag_norms) &&
           negated(relabeled.real_residual, res[a].real_residual) &&
           relabeled.real_residual.data() == res[b].real_residual.data() &&
           relabeled.imag_residual.data() == res[b].imag_residual.data();
  };
  report.i_iv_equivalent = equivalent(0, 3);
  report.ii_iii_equivalent = equivalent(1, 2);
  return report;
}

double max_stable_dt(double dx, const UnitsLedger& units, double safety_factor) {
  return dx * std::sqrt(2.0 / units.coupling()) * safety_factor;
}

namespace {

void check_evolve_config(const CoupledFieldGrid& g, const EvolveOptions& options) {
  if (g.nx() < 3) throw ConfigError("nx", "evolution needs at least 3 grid points");
  if (!(options.safety_factor > 0.0 && options.safety_factor <= 1.0))
    throw ConfigError("safety_factor", "must lie in (0, 1]");
  const double limit = max_stable_dt(g.dx(), g.units(), options.safety_factor);
  if (g.dt() > limit * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "dt = " << g.dt() << " exceeds the step bound " << limit << " for dx = " << g.dx();
    throw ConfigError("dt", os.str());
  }
}

// -(hbar c^2 / 2) Lap(S) and -(hbar c^2 / 2) Lap(C) at level n.
void forcing(const CoupledFieldGrid& g, int n, Boundary bc, std::vector<double>& fp,
             std::vector<double>& fq) {
  const int nx = g.nx();
  const double coef = -0.5 * g.units().coupling() / (g.dx() * g.dx());
  auto S = [&](int i) { return g.B_r(n, i) * g.B_r(n, i) - g.B_i(n, i) * g.B_i(n, i); };
  auto C = [&](int i) { return g.B_r(n, i) * g.B_i(n, i); };
  fp.assign(nx, 0.0);
  fq.assign(nx, 0.0);
  for (int i = 0; i < nx; ++i) {
    int lo = i - 1, hi = i + 1;
    if (bc == Boundary::Periodic) {
      lo = (lo + nx) % nx;
      hi = hi % nx;
    } else if (i == 0 || i == nx - 1) {
      continue;
    }
    fp[i] = coef * (S(lo) - 2.0 * S(i) + S(hi));
    fq[i] = coef * (C(lo) - 2.0 * C(i) + C(hi));
  }
}

}  // namespace

void start_from_rates(CoupledFieldGrid& grid, const std::vector<double>& dP,
                      const std::vector<double>& dQ, const EvolveOptions& options) {
  check_evolve_config(grid, options);
  if (grid.nt() < 2) throw ConfigError("nt", "need at least 2 time levels");
  if (dP.size() != std::size_t(grid.nx()) || dQ.size() != std::size_t(grid.nx()))
    throw ConfigError("initial_rates", "rate arrays must have nx entries");
  std::vector<double> fp, fq;
  forcing(grid, 0, options.boundary, fp, fq);
  const double dt = grid.dt();
  for (int i = 0; i < grid.nx(); ++i) {
    const bool fixed = options.boundary == Boundary::Dirichlet && (i == 0 || i == grid.nx() - 1);
    if (fixed) continue;
    grid.P(1, i) = grid.P(0, i) + dt * dP[i] + 0.5 * dt * dt * fp[i];
    grid.Q(1, i) = grid.Q(0, i) + dt * dQ[i] + 0.5 * dt * dt * fq[i];
  }
}

void start_from_rest(CoupledFieldGrid& grid, const EvolveOptions& options) {
  const std::vector<double> zero(static_cast<std::size_t>(grid.nx()), 0.0);
  start_from_rates(grid, zero, zero, options);
}

CoupledFieldGrid evolve(CoupledFieldGrid grid, const EvolveOptions& options) {
  check_evolve_config(grid, options);
  const int nx = grid.nx();
  const double dt2 = grid.dt() * grid.dt();
  std::vector<double> fp, fq;
  for (int n = 1; n + 1 < grid.nt(); ++n) {
    forcing(grid, n, options.boundary, fp, fq);
    for (int i = 0; i < nx; ++i) {
      // Dirichlet boundary values are prescribed data already in the grid.
      if (options.boundary == Boundary::Dirichlet && (i == 0 || i == nx - 1)) continue;
      const double p = 2.0 * grid.P(n, i) - grid.P(n - 1, i) + dt2 * fp[i];
      const double q = 2.0 * grid.Q(n, i) - grid.Q(n - 1, i) + dt2 * fq[i];
      if (!std::isfinite(p) || !std::isfinite(q)) {
        std::ostringstream os;
        os << "coupled evolution diverged at step " << n + 1 << ", x index " << i;
        throw SolverError(os.str());
      }
      grid.P(n + 1, i) = p;
      grid.Q(n + 1, i) = q;
    }
  }
  return grid;
}

}  // namespace mdspin::coupled
