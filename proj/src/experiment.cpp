#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "mdspin/core_model.hpp"
#include "mdspin/coupled_solver.hpp"
#include "mdspin/errors.hpp"
#include "mdspin/harness.hpp"
#include "mdspin/homogeneous.hpp"
#include "mdspin/stern_gerlach.hpp"
#include "mdspin/version.hpp"

namespace mdspin::harness {

namespace {

using Summary = std::vector<std::pair<std::string, std::string>>;

struct Computed {
  std::string csv;
  Summary summary;
};

ParticleState particle_of(const ExperimentConfig& c) {
  const auto& p = c.particle;
  return make_particle(p.rho0, p.u0, p.k0, p.b0, p.phase0);
}

Computed run_homogeneous(const ExperimentConfig& c) {
  namespace hg = homogeneous;
  const auto state = particle_of(c);
  const UnitsLedger units(c.units.hbar, c.units.c);

  CsvTable table{csv_header(Scenario::Homogeneous), {}};
  double worst_balance = 0.0, worst_rho = 0.0;
  for (double b : c.sweep.values) {
    const HomogeneousField field(b, c.field.theta, c.field.tau);
    const auto plus = hg::interact(state, field, Branch::Plus, units);
    const auto minus = hg::interact(state, field, Branch::Minus, units);
    const double rho = hg::delta_rho_numeric(state, field, c.numerics.resolution);
    const auto fringe = hg::fringe_shift(state, field, c.interferometer.path_length, Branch::Plus);
    worst_balance = std::max(worst_balance, std::abs(plus.total()));
    worst_rho = std::max(worst_rho, std::abs(rho - plus.delta_rho));
    table.rows.push_back({format_number(b), format_number(plus.delta_phi_em),
                          format_number(plus.delta_phi_k), format_number(rho),
                          format_number(plus.delta_u), format_number(minus.delta_u),
                          format_number(fringe.delta_phase)});
  }
  std::ostringstream os;
  write_csv(os, table);
  return {os.str(),
          {{"points", std::to_string(c.sweep.values.size())},
           {"max_energy_balance", format_number(worst_balance)},
           {"max_delta_rho_numeric_error", format_number(worst_rho)}}};
}

Computed run_interferometer(const ExperimentConfig& c) {
  namespace hg = homogeneous;
  const auto state = particle_of(c);
  CsvTable table{csv_header(Scenario::Interferometer), {}};
  std::vector<double> xs, ys;
  for (double b : c.sweep.values) {
    const HomogeneousField field(b, c.field.theta, c.field.tau);
    const auto plus = hg::fringe_shift(state, field, c.interferometer.path_length, Branch::Plus);
    const auto minus = hg::fringe_shift(state, field, c.interferometer.path_length, Branch::Minus);
    table.rows.push_back({format_number(b), format_number(plus.delta_u), format_number(plus.delta_phase),
                          format_number(minus.delta_phase), format_number(plus.delta_phase_exact),
                          format_number(minus.delta_phase_exact)});
    xs.push_back(b);
    ys.push_back(plus.delta_phase);
  }
  std::ostringstream os;
  write_csv(os, table);

  Summary summary{{"points", std::to_string(xs.size())}};
  const double expected =
      -state.omega0() * c.interferometer.path_length / (state.u0() * state.u0() * std::sqrt(state.rho0()));
  summary.push_back({"expected_slope", format_number(expected)});
  bool distinct = false;
  for (double x : xs) distinct = distinct || x != xs.front();
  if (distinct) {
    const auto fit = fit_line(xs, ys);
    summary.push_back({"fitted_slope", format_number(fit.slope)});
    summary.push_back({"fitted_r_squared", format_number(fit.r_squared)});
  }
  return {os.str(), summary};
}

stern_gerlach::BranchPolicy policy_of(const std::string& p) {
  using stern_gerlach::BranchPolicy;
  if (p == "plus") return BranchPolicy::FixedPlus;
  if (p == "minus") return BranchPolicy::FixedMinus;
  return BranchPolicy::PhaseSampled;
}

Computed run_stern_gerlach(const ExperimentConfig& c) {
  namespace sg = stern_gerlach;
  const UnitsLedger units(c.units.hbar, c.units.c);
  const sg::MagnetGeometry geometry{c.geometry.length_x, c.geometry.drift_x, c.geometry.z_entry,
                                    profile_from_config(c)};
  const sg::BeamSpec beam{c.beam.n_particles, particle_of(c), policy_of(c.beam.policy), c.numerics.seed};
  const auto result = sg::run_beam(beam, geometry, sg::ForceLaw::Microdynamic, c.numerics.dt, units);

  CsvTable table{csv_header(Scenario::SternGerlach), {}};
  for (const auto& h : result.hits) {
    table.rows.push_back({std::to_string(h.index), std::to_string(static_cast<int>(h.branch)),
                          format_number(h.phase), h.escaped ? "1" : "0", format_number(h.sample.t),
                          format_number(h.sample.x), format_number(h.sample.z),
                          format_number(h.sample.u_z)});
  }
  std::ostringstream os;
  write_csv(os, table);
  const auto& s = result.summary;
  return {os.str(),
          {{"count_plus", std::to_string(s.plus.count)},
           {"count_minus", std::to_string(s.minus.count)},
           {"escaped_plus", std::to_string(s.plus.escaped)},
           {"escaped_minus", std::to_string(s.minus.escaped)},
           {"mean_deflection_plus", format_number(s.plus.mean_deflection)},
           {"mean_deflection_minus", format_number(s.minus.mean_deflection)},
           {"separation", format_number(s.separation)}}};
}

Computed run_compare(const ExperimentConfig& c) {
  namespace sg = stern_gerlach;
  const UnitsLedger units(c.units.hbar, c.units.c);
  const auto base = profile_from_config(c);
  const auto state = particle_of(c);

  CsvTable table{csv_header(Scenario::Compare), {}};
  std::vector<std::pair<double, double>> md, qm;
  for (double s : c.sweep.values) {
    const sg::MagnetGeometry geometry{c.geometry.length_x, c.geometry.drift_x, c.geometry.z_entry,
                                      base.scaled(s)};
    const sg::BeamSpec beam{c.beam.n_particles, state, sg::BranchPolicy::FixedPlus, c.numerics.seed};
    const auto r_md = sg::run_beam(beam, geometry, sg::ForceLaw::Microdynamic, c.numerics.dt, units);
    const auto r_qm = sg::run_beam(beam, geometry, sg::ForceLaw::Quantum, c.numerics.dt, units);
    if (r_md.summary.plus.escaped || r_qm.summary.plus.escaped)
      throw SolverError("beam escaped the field range at scale " + format_number(s));
    const double d_md = r_md.summary.plus.mean_deflection;
    const double d_qm = r_qm.summary.plus.mean_deflection;
    table.rows.push_back({format_number(s), format_number(d_md), format_number(d_qm)});
    md.emplace_back(s, d_md);
    qm.emplace_back(s, d_qm);
  }
  std::ostringstream os;
  write_csv(os, table);

  const auto fit_md = fit_scaling(md);
  const auto fit_qm = fit_scaling(qm);
  return {os.str(),
          {{"exponent_md", format_number(fit_md.exponent)},
           {"r_squared_md", format_number(fit_md.r_squared)},
           {"exponent_qm", format_number(fit_qm.exponent)},
           {"r_squared_qm", format_number(fit_qm.r_squared)},
           {"exponent_gap", format_number(fit_md.exponent - fit_qm.exponent)}}};
}

Computed run_coupled(const ExperimentConfig& c) {
  namespace cs = coupled;
  const auto& p = c.coupled;
  const UnitsLedger units(c.units.hbar, c.units.c);
  const double dx = p.length / p.nx;
  const double k = 2.0 * std::numbers::pi * p.mode / p.length;

  cs::CoupledFieldGrid grid(p.nx, p.nt, dx, p.dt, units);
  grid.fill_magnetic([&](double, double x) {
    return std::complex<double>(p.br_mean + p.br_amp * std::cos(k * x), p.bi_mean + p.bi_amp * std::sin(k * x));
  });
  const cs::EvolveOptions options{cs::Boundary::Periodic, p.safety_factor};
  cs::start_from_rest(grid, options);
  grid = cs::evolve(std::move(grid), options);

  // Static forcing from rest: P(t) = g t^2 / 2 with g the discrete forcing.
  double oracle_error = 0.0;
  const double coef = -0.5 * units.coupling() / (dx * dx);
  for (int i = 0; i < p.nx; ++i) {
    const int lo = (i + p.nx - 1) % p.nx, hi = (i + 1) % p.nx;
    auto S = [&](int j) { return grid.B_r(0, j) * grid.B_r(0, j) - grid.B_i(0, j) * grid.B_i(0, j); };
    const double g = coef * (S(lo) - 2.0 * S(i) + S(hi));
    for (int n = 0; n < p.nt; ++n) {
      const double t = grid.t(n);
      oracle_error = std::max(oracle_error, std::abs(grid.P(n, i) - 0.5 * g * t * t));
    }
  }
  const auto res = cs::residual(grid);

  std::ostringstream os;
  grid.write_csv(os, p.stride);
  return {os.str(),
          {{"max_abs_P", format_number(grid.P.max_abs())},
           {"max_abs_Q", format_number(grid.Q.max_abs())},
           {"static_oracle_max_error", format_number(oracle_error)},
           {"residual_real_max", format_number(res.real_norms.max)},
           {"residual_imag_max", format_number(res.imag_norms.max)}}};
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

RunOutputs run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  Computed computed;
  try {
    switch (config.scenario) {
      case Scenario::Homogeneous:
        computed = run_homogeneous(config);
        break;
      case Scenario::Interferometer:
        computed = run_interferometer(config);
        break;
      case Scenario::SternGerlach:
        computed = run_stern_gerlach(config);
        break;
      case Scenario::Coupled:
        computed = run_coupled(config);
        break;
      case Scenario::Compare:
        computed = run_compare(config);
        break;
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.field(), e.message());
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::filesystem::path dir(config.output.path);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

  RunOutputs out;
  out.data_file = dir / (std::string(to_string(config.scenario)) + ".csv");
  out.metadata_file = dir / (std::string(to_string(config.scenario)) + ".meta");
  out.summary = computed.summary;

  std::ostringstream meta;
  meta << "# mdspin run metadata; loadable as a config file\n" << config.to_text();
  meta << "\n[run]\nversion = " << kVersion << "\ndata_file = " << out.data_file.filename().string()
       << "\nwall_time_s = " << format_number(wall) << "\n";
  meta << "\n[summary]\n";
  for (const auto& [k, v] : computed.summary) meta << k << " = " << v << "\n";

  write_file(out.data_file, computed.csv);
  write_file(out.metadata_file, meta.str());
  return out;
}

}  // namespace mdspin::harness
