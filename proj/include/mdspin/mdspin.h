/* C interface to the mdspin simulation library. */
#ifndef MDSPIN_H
#define MDSPIN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MDSPIN_BUILDING)
#    define MDSPIN_API __declspec(dllexport)
#  else
#    define MDSPIN_API __declspec(dllimport)
#  endif
#else
#  define MDSPIN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Config, numerical and I/O failures match the CLI exit codes. */
typedef enum mds_status {
  MDS_OK = 0,
  MDS_ERR_INVALID_ARGUMENT = 1,
  MDS_ERR_CONFIG = 2,
  MDS_ERR_NUMERIC = 3,
  MDS_ERR_IO = 4,
  MDS_ERR_DOMAIN = 5,
  MDS_ERR_RANGE = 6,
  MDS_ERR_INTERNAL = 7
} mds_status;

typedef enum mds_branch { MDS_BRANCH_MINUS = -1, MDS_BRANCH_PLUS = 1 } mds_branch;
typedef enum mds_force_law { MDS_FORCE_MD = 0, MDS_FORCE_QM = 1 } mds_force_law;

typedef struct mds_units {
  double hbar;
  double c;
} mds_units;

typedef struct mds_config mds_config;
typedef struct mds_particle mds_particle;
typedef struct mds_run mds_run;

/* Message for the last failing call on this thread; empty if none. */
MDSPIN_API const char* mds_last_error(void);
MDSPIN_API const char* mds_version(void);

/* Particle state. */
MDSPIN_API mds_status mds_particle_create(double rho0, double u0, double k0, double b0,
                                          double phase0, mds_particle** out);
MDSPIN_API void mds_particle_free(mds_particle* p);
MDSPIN_API mds_status mds_particle_get(const mds_particle* p, double* rho0, double* u0,
                                       double* k0, double* omega0, double* e0, double* b0,
                                       double* phase0);

MDSPIN_API mds_status mds_energy_density(const double e[3], const double b[3], mds_units units,
                                         double* out);

/* Homogeneous field. */
MDSPIN_API mds_status mds_delta_rho(const mds_particle* p, double b_ext, double tau,
                                    int resolution /* 0: closed form */, double* out);
MDSPIN_API mds_status mds_phase_velocity_shift(const mds_particle* p, double b_e,
                                               mds_branch branch, double* out);
MDSPIN_API mds_status mds_kinetic_branches(double b_e, mds_units units, double* plus,
                                           double* minus);
MDSPIN_API mds_status mds_fringe_shift(const mds_particle* p, double b_e, double path_length,
                                       mds_branch branch, double* delta_phase,
                                       double* delta_phase_exact);

/* Stern-Gerlach force on the affine profile B_E(z) = b0 + g z over [z_min, z_max]. */
MDSPIN_API mds_status mds_force_affine(mds_force_law law, double b0, double g, double z_min,
                                       double z_max, double z, mds_branch branch,
                                       mds_units units, double* out);

/* Log-log least squares over n (s, deflection) pairs. */
MDSPIN_API mds_status mds_fit_scaling(const double* s, const double* deflection, size_t n,
                                      double* exponent, double* intercept, double* r_squared);

/* Experiment configuration and batch runs. */
/* `scenario` may be NULL to use the one named in the file. A non-NULL scenario
   that differs from the file's fails with MDS_ERR_CONFIG. */
MDSPIN_API mds_status mds_config_load(const char* path, const char* scenario, mds_config** out);
MDSPIN_API mds_status mds_config_from_text(const char* text, const char* scenario,
                                           mds_config** out);
MDSPIN_API void mds_config_free(mds_config* cfg);
MDSPIN_API mds_status mds_config_set_seed(mds_config* cfg, uint64_t seed);
MDSPIN_API mds_status mds_config_set_output_dir(mds_config* cfg, const char* dir);

MDSPIN_API mds_status mds_run_experiment(const mds_config* cfg, mds_run** out);
MDSPIN_API void mds_run_free(mds_run* run);
MDSPIN_API const char* mds_run_data_file(const mds_run* run);
MDSPIN_API const char* mds_run_metadata_file(const mds_run* run);
MDSPIN_API size_t mds_run_summary_count(const mds_run* run);
MDSPIN_API mds_status mds_run_summary_item(const mds_run* run, size_t index, const char** key,
                                           const char** value);

#ifdef __cplusplus
}
#endif

#endif /* MDSPIN_H */
