#include <exception>
#include <optional>
#include <string>

#include "mdspin/core_model.hpp"
#include "mdspin/errors.hpp"
#include "mdspin/harness.hpp"
#include "mdspin/homogeneous.hpp"
#include "mdspin/mdspin.h"
#include "mdspin/stern_gerlach.hpp"
#include "mdspin/version.hpp"

struct mds_particle {
  mdspin::ParticleState state;
};

struct mds_config {
  mdspin::harness::ExperimentConfig config;
};

struct mds_run {
  std::string data_file;
  std::string metadata_file;
  std::vector<std::pair<std::string, std::string>> summary;
};

namespace {

thread_local std::string g_last_error;

mds_status fail(mds_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
mds_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return MDS_OK;
  } catch (const mdspin::ConfigError& e) {
    return fail(MDS_ERR_CONFIG, e.what());
  } catch (const mdspin::DomainError& e) {
    return fail(MDS_ERR_DOMAIN, e.what());
  } catch (const mdspin::RangeError& e) {
    return fail(MDS_ERR_RANGE, e.what());
  } catch (const mdspin::SolverError& e) {
    return fail(MDS_ERR_NUMERIC, e.what());
  } catch (const mdspin::IoError& e) {
    return fail(MDS_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(MDS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MDS_ERR_INTERNAL, e.what());
  }
}

mdspin::Branch branch_of(mds_branch b) {
  return b == MDS_BRANCH_MINUS ? mdspin::Branch::Minus : mdspin::Branch::Plus;
}

mdspin::UnitsLedger units_of(mds_units u) { return {u.hbar, u.c}; }

#define MDS_REQUIRE(cond, what) \
  if (!(cond)) return fail(MDS_ERR_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* mds_last_error(void) { return g_last_error.c_str(); }

const char* mds_version(void) { return mdspin::kVersion; }

mds_status mds_particle_create(double rho0, double u0, double k0, double b0, double phase0,
                               mds_particle** out) {
  MDS_REQUIRE(out, "out is null");
  *out = nullptr;
  return guarded([&] { *out = new mds_particle{mdspin::make_particle(rho0, u0, k0, b0, phase0)}; });
}

void mds_particle_free(mds_particle* p) { delete p; }

mds_status mds_particle_get(const mds_particle* p, double* rho0, double* u0, double* k0,
                            double* omega0, double* e0, double* b0, double* phase0) {
  MDS_REQUIRE(p, "particle is null");
  const auto& s = p->state;
  if (rho0) *rho0 = s.rho0();
  if (u0) *u0 = s.u0();
  if (k0) *k0 = s.k0();
  if (omega0) *omega0 = s.omega0();
  if (e0) *e0 = s.E0();
  if (b0) *b0 = s.B0();
  if (phase0) *phase0 = s.phase0();
  return MDS_OK;
}

mds_status mds_energy_density(const double e[3], const double b[3], mds_units units, double* out) {
  MDS_REQUIRE(e && b && out, "null argument");
  return guarded([&] {
    *out = mdspin::energy_density_natural({e[0], e[1], e[2]}, {b[0], b[1], b[2]}, units_of(units));
  });
}

mds_status mds_delta_rho(const mds_particle* p, double b_ext, double tau, int resolution,
                         double* out) {
  MDS_REQUIRE(p && out, "null argument");
  return guarded([&] {
    const mdspin::HomogeneousField field(b_ext, 0.0, tau);
    *out = resolution == 0 ? mdspin::homogeneous::delta_rho_analytic(p->state, field)
                           : mdspin::homogeneous::delta_rho_numeric(p->state, field, resolution);
  });
}

mds_status mds_phase_velocity_shift(const mds_particle* p, double b_e, mds_branch branch,
                                    double* out) {
  MDS_REQUIRE(p && out, "null argument");
  return guarded([&] { *out = mdspin::homogeneous::phase_velocity_shift(p->state, b_e, branch_of(branch)); });
}

mds_status mds_kinetic_branches(double b_e, mds_units units, double* plus, double* minus) {
  MDS_REQUIRE(plus && minus, "null argument");
  return guarded([&] {
    const auto k = mdspin::homogeneous::kinetic_branches(b_e, units_of(units));
    *plus = k.plus;
    *minus = k.minus;
  });
}

mds_status mds_fringe_shift(const mds_particle* p, double b_e, double path_length, mds_branch branch,
                            double* delta_phase, double* delta_phase_exact) {
  MDS_REQUIRE(p && delta_phase, "null argument");
  return guarded([&] {
    const mdspin::HomogeneousField field(b_e, 0.0, 1.0);
    const auto r = mdspin::homogeneous::fringe_shift(p->state, field, path_length, branch_of(branch));
    *delta_phase = r.delta_phase;
    if (delta_phase_exact) *delta_phase_exact = r.delta_phase_exact;
  });
}

mds_status mds_force_affine(mds_force_law law, double b0, double g, double z_min, double z_max,
                            double z, mds_branch branch, mds_units units, double* out) {
  MDS_REQUIRE(out, "null argument");
  return guarded([&] {
    const auto field = mdspin::InhomogeneousField::affine(b0, g, z_min, z_max);
    const auto l = law == MDS_FORCE_QM ? mdspin::stern_gerlach::ForceLaw::Quantum
                                       : mdspin::stern_gerlach::ForceLaw::Microdynamic;
    *out = mdspin::stern_gerlach::force(l, field, z, branch_of(branch), units_of(units));
  });
}

mds_status mds_fit_scaling(const double* s, const double* deflection, size_t n, double* exponent,
                           double* intercept, double* r_squared) {
  MDS_REQUIRE((s && deflection) || n == 0, "null data");
  MDS_REQUIRE(exponent, "null argument");
  return guarded([&] {
    std::vector<std::pair<double, double>> pairs;
    for (size_t k = 0; k < n; ++k) pairs.emplace_back(s[k], deflection[k]);
    const auto fit = mdspin::harness::fit_scaling(pairs);
    *exponent = fit.exponent;
    if (intercept) *intercept = fit.intercept;
    if (r_squared) *r_squared = fit.r_squared;
  });
}

namespace {

std::optional<mdspin::harness::Scenario> scenario_arg(const char* scenario) {
  if (!scenario) return std::nullopt;
  auto s = mdspin::harness::parse_scenario(scenario);
  if (!s) throw mdspin::ConfigError("scenario", std::string("unknown scenario '") + scenario + "'");
  return s;
}

}  // namespace

mds_status mds_config_load(const char* path, const char* scenario, mds_config** out) {
  MDS_REQUIRE(path && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new mds_config{mdspin::harness::load_config(path, scenario_arg(scenario))}; });
}

mds_status mds_config_from_text(const char* text, const char* scenario, mds_config** out) {
  MDS_REQUIRE(text && out, "null argument");
  *out = nullptr;
  return guarded(
      [&] { *out = new mds_config{mdspin::harness::config_from_text(text, scenario_arg(scenario))}; });
}

void mds_config_free(mds_config* cfg) { delete cfg; }

mds_status mds_config_set_seed(mds_config* cfg, uint64_t seed) {
  MDS_REQUIRE(cfg, "null argument");
  cfg->config.numerics.seed = seed;
  return MDS_OK;
}

mds_status mds_config_set_output_dir(mds_config* cfg, const char* dir) {
  MDS_REQUIRE(cfg && dir, "null argument");
  MDS_REQUIRE(*dir, "output directory is empty");
  cfg->config.output.path = dir;
  return MDS_OK;
}

mds_status mds_run_experiment(const mds_config* cfg, mds_run** out) {
  MDS_REQUIRE(cfg && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto r = mdspin::harness::run_experiment(cfg->config);
    *out = new mds_run{r.data_file.string(), r.metadata_file.string(), std::move(r.summary)};
  });
}

void mds_run_free(mds_run* run) { delete run; }

const char* mds_run_data_file(const mds_run* run) { return run ? run->data_file.c_str() : ""; }

const char* mds_run_metadata_file(const mds_run* run) { return run ? run->metadata_file.c_str() : ""; }

size_t mds_run_summary_count(const mds_run* run) { return run ? run->summary.size() : 0; }

mds_status mds_run_summary_item(const mds_run* run, size_t index, const char** key,
                                const char** value) {
  MDS_REQUIRE(run && key && value, "null argument");
  MDS_REQUIRE(index < run->summary.size(), "summary index out of range");
  *key = run->summary[index].first.c_str();
  *value = run->summary[index].second.c_str();
  return MDS_OK;
}

}  // extern "C"
