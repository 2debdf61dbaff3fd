/* C interface to the qrho library.
 *
 * Every call returns a qrho_status. On failure the thread-local message from
 * qrho_last_error() describes the cause. Handles are opaque and owned by the
 * caller; release them with the matching *_destroy function (NULL is accepted).
 * Complex results are returned as separate real and imaginary parts.
 */
#ifndef QRHO_H
#define QRHO_H

#include <stddef.h>
#include <stdint.h>

#if defined(QRHO_BUILDING_LIBRARY)
#define QRHO_API __attribute__((visibility("default")))
#else
#define QRHO_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qrho_status {
  QRHO_OK = 0,
  QRHO_ERR_DOMAIN = 1,
  QRHO_ERR_UNSUPPORTED_ORDER = 2,
  QRHO_ERR_ACCURACY = 3,
  QRHO_ERR_CONFIGURATION = 4,
  QRHO_ERR_TAIL_MASS = 5,
  QRHO_ERR_BUDGET = 6,
  QRHO_ERR_SAMPLING = 7,
  QRHO_ERR_FIT = 8,
  QRHO_ERR_DOMAIN_SIZE = 9,
  QRHO_ERR_RESOLUTION = 10,
  QRHO_ERR_EVALUATION_POINT = 11,
  QRHO_ERR_TIMING = 12,
  QRHO_ERR_SINGULAR_CONFIGURATION = 13,
  QRHO_ERR_PRECONDITION = 14,
  QRHO_ERR_INVALID_ARGUMENT = 100, /* null pointer or undersized buffer */
  QRHO_ERR_INTERNAL = 101
} qrho_status;

QRHO_API const char* qrho_version(void);
QRHO_API const char* qrho_status_name(qrho_status status);
/* Message of the last failed call on this thread; "" after a successful one. */
QRHO_API const char* qrho_last_error(void);

typedef struct qrho_params {
  double epsilon;
  double omega_in;
  double omega_out;
  double omega_as;
} qrho_params;

typedef enum qrho_profile_kind { QRHO_PROFILE_CONSTANT = 0, QRHO_PROFILE_STEP = 1, QRHO_PROFILE_SMOOTH_STEP = 2 } qrho_profile_kind;

typedef struct qrho_profile {
  qrho_profile_kind kind;
  double omega_in;
  double omega_out;
  double transition_time;
  double width;
} qrho_profile;

QRHO_API qrho_status qrho_params_validate(const qrho_params* params);
QRHO_API qrho_status qrho_params_lambda(const qrho_params* params, double* lambda, double* gamma, double* rho);
QRHO_API qrho_status qrho_gamma_from_rho(double rho, double* gamma);
QRHO_API qrho_status qrho_omega0(const qrho_profile* profile, double t, double* omega);

/* Numerics. out = {Ai, Bi, Ai', Bi'}. */
QRHO_API qrho_status qrho_airy(double x, double out[4]);
QRHO_API qrho_status qrho_hermite(unsigned n, double x, double* value);

/* Stationary density. */
typedef struct qrho_stationary qrho_stationary;

typedef enum qrho_flux_form { QRHO_FLUX_INTEGRAL = 0, QRHO_FLUX_AIRY = 1 } qrho_flux_form;

QRHO_API qrho_status qrho_flux_constant(double lambda_gamma, double epsilon, qrho_flux_form form, double* flux);
/* theta_bar_max = 0 selects the grid extent automatically. */
QRHO_API qrho_status qrho_stationary_create(double lambda_gamma, double epsilon, double theta_bar_max,
                                            qrho_stationary** out);
QRHO_API void qrho_stationary_destroy(qrho_stationary* dist);
QRHO_API qrho_status qrho_stationary_size(const qrho_stationary* dist, size_t* n);
/* Copies min(n, size) grid points and densities. */
QRHO_API qrho_status qrho_stationary_copy(const qrho_stationary* dist, double* theta_bar, double* density, size_t n);
QRHO_API qrho_status qrho_stationary_density_at(const qrho_stationary* dist, double theta_bar, double* density);
QRHO_API qrho_status qrho_stationary_summary(const qrho_stationary* dist, double* flux, double* grid_mass,
                                             double* tail_mass);

/* Langevin paths. */
typedef struct qrho_sde_config {
  double dt;
  double theta_cut;
  double epsilon;
  size_t n_paths;
  size_t store_stride;
  unsigned workers; /* 0: all logical cores */
  uint64_t seed;
  qrho_profile profile;
} qrho_sde_config;

typedef struct qrho_ensemble qrho_ensemble;

QRHO_API qrho_status qrho_sde_defaults(const qrho_params* params, const qrho_profile* profile, uint64_t seed,
                                       qrho_sde_config* out);
QRHO_API qrho_status qrho_simulate(const qrho_sde_config* cfg, double t0, double t1, double theta0,
                                   qrho_ensemble** out);
QRHO_API void qrho_ensemble_destroy(qrho_ensemble* ens);
QRHO_API qrho_status qrho_ensemble_count(const qrho_ensemble* ens, size_t* n_paths);
QRHO_API qrho_status qrho_path_size(const qrho_ensemble* ens, size_t path, size_t* n);
QRHO_API qrho_status qrho_path_copy(const qrho_ensemble* ens, size_t path, double* times, double* theta,
                                    double* int_theta, size_t n);
QRHO_API qrho_status qrho_path_reinjections(const qrho_ensemble* ens, size_t path, size_t* count);

/* Occupation histogram; edges has bins + 1 entries, density has bins. */
QRHO_API qrho_status qrho_histogram(const qrho_sde_config* cfg, double burn_in, double window, size_t bins,
                                    double theta_min, double theta_max, double sample_interval, double* edges,
                                    double* density, double* excursion_fraction);

/* Fokker-Planck. */
typedef enum qrho_scheme { QRHO_SCHEME_CN = 0, QRHO_SCHEME_IMPLICIT = 1, QRHO_SCHEME_EXPLICIT = 2 } qrho_scheme;
typedef enum qrho_boundary { QRHO_BOUNDARY_REINJECTION = 0, QRHO_BOUNDARY_ZERO_FLUX = 1 } qrho_boundary;

/* q holds n cell values on [theta_min, theta_max]; overwritten with the density at t_end. */
QRHO_API qrho_status qrho_fp_evolve(double theta_min, double theta_max, size_t n, double* q,
                                    const qrho_profile* profile, double epsilon, double dt, double t_end,
                                    qrho_scheme scheme, qrho_boundary boundary);
QRHO_API qrho_status qrho_fp_stationary(double theta_min, double theta_max, size_t n, double omega, double epsilon,
                                        double* q);
QRHO_API qrho_status qrho_feynman_kac_b0(double theta_min, double theta_max, size_t n, double dt, double t_end,
                                         int drift_variant, double* b0_final, int* stabilised);

/* Wave functionals. */
typedef struct qrho_trajectory qrho_trajectory;

QRHO_API qrho_status qrho_trajectory_create(const qrho_profile* profile, double t0, double t1, double dt,
                                            qrho_trajectory** out);
QRHO_API void qrho_trajectory_destroy(qrho_trajectory* traj);
QRHO_API qrho_status qrho_psi_in(unsigned n, double x, double t, double omega_in, double* re, double* im);
QRHO_API qrho_status qrho_psi_stc(const qrho_trajectory* traj, unsigned n, double x, double t, double* re,
                                  double* im);
/* Row-major (nmax + 1)^2 overlap matrix. */
QRHO_API qrho_status qrho_overlap(const qrho_trajectory* traj, double t, unsigned nmax, double* re, double* im);

/* Scattering. */
QRHO_API qrho_status qrho_transition(double lambda, double rho, double* probability, double* s00_re,
                                     double* s00_im);
/* out = {S00, S11, S02, S20} as re/im pairs (8 values). */
QRHO_API qrho_status qrho_s_elements(const qrho_trajectory* traj, const qrho_profile* profile, double t_final,
                                     double out[8]);
QRHO_API qrho_status qrho_s_mn_mc(unsigned m, unsigned n, const qrho_ensemble* ens, const qrho_profile* profile,
                                  double t_final, double* re, double* im, double* standard_error);

/* Thermodynamics of the asymptotic space. */
typedef struct qrho_thermo_report {
  double lambda;
  double energy_shifted;
  double shift_only;
  double width;
  double decay_time;
  double internal_energy;
  double free_energy;
  double entropy_over_k;
  double width_quadrature;
  int divergent_vacuum_term;
} qrho_thermo_report;

QRHO_API qrho_status qrho_thermo(const qrho_params* params, qrho_thermo_report* out);
QRHO_API qrho_status qrho_entropy(double lambda, double* entropy_over_k);
QRHO_API qrho_status qrho_density_matrix(double x, double xp, double theta, double theta_p, double int_theta,
                                         double int_theta_p, double omega_as, double* re, double* im);

#ifdef __cplusplus
}
#endif

#endif
