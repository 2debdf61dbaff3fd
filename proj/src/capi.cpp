#include "qrho/qrho.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <memory>
#include <string>

#include "qrho/errors.hpp"
#include "qrho/fokker_planck.hpp"
#include "qrho/langevin.hpp"
#include "qrho/model.hpp"
#include "qrho/numerics.hpp"
#include "qrho/scattering.hpp"
#include "qrho/stationary.hpp"
#include "qrho/thermo.hpp"
#include "qrho/wavefunction.hpp"

#ifndef QRHO_VERSION_STRING
#define QRHO_VERSION_STRING "0.0.0"
#endif

struct qrho_stationary {
  qrho::StationaryDistribution dist;
};

struct qrho_ensemble {
  std::vector<qrho::ThetaPath> paths;
};

struct qrho_trajectory {
  qrho::ComplexTrajectory traj;
};

namespace {

thread_local std::string g_last_error;

struct NullArgument {};

template <class F>
qrho_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return QRHO_OK;
  } catch (const NullArgument&) {
    g_last_error = "null pointer argument";
    return QRHO_ERR_INVALID_ARGUMENT;
  } catch (const qrho::Error& e) {
    g_last_error = e.what();
    return static_cast<qrho_status>(static_cast<int>(e.code()));
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QRHO_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return QRHO_ERR_INTERNAL;
  }
}

template <class... P>
void need(const P*... ptrs) {
  if (((ptrs == nullptr) || ...)) throw NullArgument{};
}

qrho::ModelParams to_params(const qrho_params& p) {
  qrho::ModelParams m;
  m.epsilon = p.epsilon;
  m.omega_in = p.omega_in;
  m.omega_out = p.omega_out;
  m.omega_as = p.omega_as;
  return m;
}

qrho::BarrierProfile to_profile(const qrho_profile& p) {
  qrho::BarrierProfile b;
  switch (p.kind) {
    case QRHO_PROFILE_CONSTANT: b = qrho::BarrierProfile::constant(p.omega_in); break;
    case QRHO_PROFILE_STEP: b = qrho::BarrierProfile::step(p.omega_in, p.omega_out, p.transition_time); break;
    case QRHO_PROFILE_SMOOTH_STEP:
      b = qrho::BarrierProfile::smooth_step(p.omega_in, p.omega_out, p.transition_time, p.width);
      break;
    default: qrho::fail(qrho::Errc::configuration, "profile.kind: unknown profile kind");
  }
  return b;
}

qrho_profile from_profile(const qrho::BarrierProfile& b) {
  qrho_profile p{};
  p.kind = static_cast<qrho_profile_kind>(static_cast<int>(b.kind));
  p.omega_in = b.omega_in;
  p.omega_out = b.omega_out;
  p.transition_time = b.transition_time;
  p.width = b.width;
  return p;
}

qrho::SdeConfig to_sde(const qrho_sde_config& c) {
  qrho::SdeConfig s;
  s.dt = c.dt;
  s.theta_cut = c.theta_cut;
  s.epsilon = c.epsilon;
  s.n_paths = c.n_paths;
  s.store_stride = c.store_stride;
  s.workers = c.workers;
  s.stream = qrho::RandomStream(c.seed, 0);
  s.profile = to_profile(c.profile);
  return s;
}

qrho::Grid1D to_grid(double a, double b, size_t n) {
  qrho::Grid1D g;
  g.theta_min = a;
  g.theta_max = b;
  g.n = n;
  g.validate();
  return g;
}

const qrho::ThetaPath& path_of(const qrho_ensemble* ens, size_t k) {
  if (k >= ens->paths.size()) qrho::fail(qrho::Errc::domain, "path index out of range");
  return ens->paths[k];
}

}  // namespace

extern "C" {

const char* qrho_version(void) { return QRHO_VERSION_STRING; }

const char* qrho_status_name(qrho_status s) {
  if (s == QRHO_OK) return "ok";
  if (s == QRHO_ERR_INVALID_ARGUMENT) return "invalid_argument";
  if (s == QRHO_ERR_INTERNAL) return "internal";
  if (s >= 1 && s <= 14) return qrho::errc_name(static_cast<qrho::Errc>(static_cast<int>(s)));
  return "unknown";
}

const char* qrho_last_error(void) { return g_last_error.c_str(); }

qrho_status qrho_params_validate(const qrho_params* p) {
  return guarded([&] {
    need(p);
    to_params(*p).validate();
  });
}

qrho_status qrho_params_lambda(const qrho_params* p, double* lambda, double* gamma, double* rho) {
  return guarded([&] {
    need(p, lambda, gamma, rho);
    const auto m = to_params(*p);
    m.validate();
    *lambda = m.lambda();
    *gamma = m.gamma();
    *rho = m.rho();
  });
}

qrho_status qrho_gamma_from_rho(double rho, double* gamma) {
  return guarded([&] {
    need(gamma);
    *gamma = qrho::gamma_from_rho(rho);
  });
}

qrho_status qrho_omega0(const qrho_profile* profile, double t, double* omega) {
  return guarded([&] {
    need(profile, omega);
    *omega = qrho::omega0(to_profile(*profile), t);
  });
}

qrho_status qrho_airy(double x, double out[4]) {
  return guarded([&] {
    need(out);
    const auto a = qrho::airy(x);
    out[0] = a.ai;
    out[1] = a.bi;
    out[2] = a.ai_prime;
    out[3] = a.bi_prime;
  });
}

qrho_status qrho_hermite(unsigned n, double x, double* value) {
  return guarded([&] {
    need(value);
    *value = qrho::hermite(n, x);
  });
}

qrho_status qrho_flux_constant(double lg, double eps, qrho_flux_form form, double* flux) {
  return guarded([&] {
    need(flux);
    *flux = form == QRHO_FLUX_AIRY ? qrho::flux_constant_airy(lg, eps) : qrho::flux_constant_integral(lg, eps);
  });
}

qrho_status qrho_stationary_create(double lg, double eps, double tmax, qrho_stationary** out) {
  return guarded([&] {
    need(out);
    *out = nullptr;
    qrho::StationaryGridSpec spec;
    spec.theta_bar_max = tmax;
    *out = new qrho_stationary{qrho::build_stationary(lg, eps, spec)};
  });
}

void qrho_stationary_destroy(qrho_stationary* d) { delete d; }

qrho_status qrho_stationary_size(const qrho_stationary* d, size_t* n) {
  return guarded([&] {
    need(d, n);
    *n = d->dist.grid.size();
  });
}

qrho_status qrho_stationary_copy(const qrho_stationary* d, double* tb, double* q, size_t n) {
  return guarded([&] {
    need(d, tb, q);
    const size_t m = std::min(n, d->dist.grid.size());
    std::copy_n(d->dist.grid.begin(), m, tb);
    std::copy_n(d->dist.density.begin(), m, q);
  });
}

qrho_status qrho_stationary_density_at(const qrho_stationary* d, double tb, double* q) {
  return guarded([&] {
    need(d, q);
    *q = d->dist.density_at(tb);
  });
}

qrho_status qrho_stationary_summary(const qrho_stationary* d, double* flux, double* grid_mass, double* tail) {
  return guarded([&] {
    need(d, flux, grid_mass, tail);
    *flux = d->dist.flux;
    *grid_mass = d->dist.grid_mass();
    *tail = d->dist.tail_mass;
  });
}

qrho_status qrho_sde_defaults(const qrho_params* p, const qrho_profile* prof, uint64_t seed, qrho_sde_config* out) {
  return guarded([&] {
    need(p, prof, out);
    const auto s = qrho::SdeConfig::defaults_for(to_params(*p), to_profile(*prof), seed);
    out->dt = s.dt;
    out->theta_cut = s.theta_cut;
    out->epsilon = s.epsilon;
    out->n_paths = s.n_paths;
    out->store_stride = s.store_stride;
    out->workers = s.workers;
    out->seed = seed;
    out->profile = from_profile(s.profile);
  });
}

qrho_status qrho_simulate(const qrho_sde_config* cfg, double t0, double t1, double theta0, qrho_ensemble** out) {
  return guarded([&] {
    need(cfg, out);
    *out = nullptr;
    auto ens = std::make_unique<qrho_ensemble>();
    ens->paths = qrho::simulate_ensemble(to_sde(*cfg), t0, t1, theta0);
    *out = ens.release();
  });
}

void qrho_ensemble_destroy(qrho_ensemble* e) { delete e; }

qrho_status qrho_ensemble_count(const qrho_ensemble* e, size_t* n) {
  return guarded([&] {
    need(e, n);
    *n = e->paths.size();
  });
}

qrho_status qrho_path_size(const qrho_ensemble* e, size_t k, size_t* n) {
  return guarded([&] {
    need(e, n);
    *n = path_of(e, k).size();
  });
}

qrho_status qrho_path_copy(const qrho_ensemble* e, size_t k, double* t, double* th, double* it, size_t n) {
  return guarded([&] {
    need(e, t, th, it);
    const auto& p = path_of(e, k);
    const size_t m = std::min(n, p.size());
    std::copy_n(p.times.begin(), m, t);
    std::copy_n(p.values.begin(), m, th);
    std::copy_n(p.int_theta.begin(), m, it);
  });
}

qrho_status qrho_path_reinjections(const qrho_ensemble* e, size_t k, size_t* count) {
  return guarded([&] {
    need(e, count);
    *count = path_of(e, k).reinjections.size();
  });
}

qrho_status qrho_histogram(const qrho_sde_config* cfg, double burn_in, double window, size_t bins, double tmin,
                           double tmax, double interval, double* edges, double* density, double* excursion) {
  return guarded([&] {
    need(cfg, edges, density, excursion);
    qrho::HistogramSpec spec;
    spec.bins = bins;
    spec.theta_min = tmin;
    spec.theta_max = tmax;
    spec.sample_interval = interval;
    const auto h = qrho::ensemble_histogram(to_sde(*cfg), burn_in, window, spec);
    const auto d = h.density();
    std::copy(h.edges.begin(), h.edges.end(), edges);
    std::copy(d.begin(), d.end(), density);
    *excursion = h.total ? double(h.excursion) / double(h.total) : 0.0;
  });
}

qrho_status qrho_fp_evolve(double a, double b, size_t n, double* q, const qrho_profile* prof, double eps, double dt,
                           double t_end, qrho_scheme scheme, qrho_boundary boundary) {
  return guarded([&] {
    need(q, prof);
    qrho::DensityOnGrid q0;
    q0.grid = to_grid(a, b, n);
    q0.values.assign(q, q + n);
    qrho::FpOptions opts;
    opts.scheme = static_cast<qrho::TimeScheme>(static_cast<int>(scheme));
    opts.boundary = static_cast<qrho::FpBoundary>(static_cast<int>(boundary));
    const auto r = qrho::evolve_fp(q0, to_profile(*prof), eps, dt, t_end, opts);
    std::copy(r.values.begin(), r.values.end(), q);
  });
}

qrho_status qrho_fp_stationary(double a, double b, size_t n, double omega, double eps, double* q) {
  return guarded([&] {
    need(q);
    const auto v = qrho::discrete_stationary(to_grid(a, b, n), omega, eps, 1.0);
    std::copy(v.begin(), v.end(), q);
  });
}

qrho_status qrho_feynman_kac_b0(double a, double b, size_t n, double dt, double t_end, int drift_variant,
                                double* b0, int* stabilised) {
  return guarded([&] {
    need(b0, stabilised);
    qrho::FeynmanKacOptions opts;
    opts.drift_variant = drift_variant != 0;
    const auto s = qrho::feynman_kac_b0(to_grid(a, b, n), dt, t_end, opts);
    *b0 = s.limit_estimate;
    *stabilised = s.stabilised ? 1 : 0;
  });
}

qrho_status qrho_trajectory_create(const qrho_profile* prof, double t0, double t1, double dt, qrho_trajectory** out) {
  return guarded([&] {
    need(prof, out);
    *out = nullptr;
    *out = new qrho_trajectory{qrho::solve_xi(to_profile(*prof), t0, t1, dt)};
  });
}

void qrho_trajectory_destroy(qrho_trajectory* t) { delete t; }

qrho_status qrho_psi_in(unsigned n, double x, double t, double w, double* re, double* im) {
  return guarded([&] {
    need(re, im);
    const auto v = qrho::psi_in(n, x, t, w);
    *re = v.real();
    *im = v.imag();
  });
}

qrho_status qrho_psi_stc(const qrho_trajectory* tr, unsigned n, double x, double t, double* re, double* im) {
  return guarded([&] {
    need(tr, re, im);
    const auto v = qrho::psi_stc(n, x, t, tr->traj);
    *re = v.real();
    *im = v.imag();
  });
}

qrho_status qrho_overlap(const qrho_trajectory* tr, double t, unsigned nmax, double* re, double* im) {
  return guarded([&] {
    need(tr, re, im);
    const auto m = qrho::overlap_matrix(tr->traj, t, nmax);
    const size_t k = nmax + 1;
    for (size_t i = 0; i < k; ++i)
      for (size_t j = 0; j < k; ++j) {
        re[i * k + j] = m[i][j].real();
        im[i * k + j] = m[i][j].imag();
      }
  });
}

qrho_status qrho_transition(double lambda, double rho, double* p, double* re, double* im) {
  return guarded([&] {
    need(p, re, im);
    const auto r = qrho::s00_br(lambda, rho);
    *p = r.probability;
    *re = r.s00.real();
    *im = r.s00.imag();
  });
}

qrho_status qrho_s_elements(const qrho_trajectory* tr, const qrho_profile* prof, double t_final, double out[8]) {
  return guarded([&] {
    need(tr, prof, out);
    const auto s = qrho::s_elements_path(tr->traj, to_profile(*prof), t_final);
    const qrho::cplx v[4] = {s.s00.value, s.s11.value, s.s02.value, s.s20.value};
    for (int i = 0; i < 4; ++i) {
      out[2 * i] = v[i].real();
      out[2 * i + 1] = v[i].imag();
    }
  });
}

qrho_status qrho_s_mn_mc(unsigned m, unsigned n, const qrho_ensemble* e, const qrho_profile* prof, double t_final,
                         double* re, double* im, double* se) {
  return guarded([&] {
    need(e, prof, re, im, se);
    const auto r = qrho::s_mn_br_mc(m, n, e->paths, to_profile(*prof), t_final);
    *re = r.mean.real();
    *im = r.mean.imag();
    *se = std::abs(r.standard_error());
  });
}

qrho_status qrho_thermo(const qrho_params* p, qrho_thermo_report* out) {
  return guarded([&] {
    need(p, out);
    const auto r = qrho::thermo_report(to_params(*p));
    out->lambda = r.lambda;
    out->energy_shifted = r.energy_shift;
    out->shift_only = r.shift_only;
    out->width = r.level_width;
    out->decay_time = r.decay_time;
    out->internal_energy = r.internal_energy;
    out->free_energy = r.free_energy;
    out->entropy_over_k = r.entropy_over_k;
    out->width_quadrature = r.width_quadrature;
    out->divergent_vacuum_term = r.divergent_vacuum_term_flag ? 1 : 0;
  });
}

qrho_status qrho_entropy(double lambda, double* s) {
  return guarded([&] {
    need(s);
    *s = qrho::entropy(lambda);
  });
}

qrho_status qrho_density_matrix(double x, double xp, double th, double thp, double it, double itp, double w,
                                double* re, double* im) {
  return guarded([&] {
    need(re, im);
    const auto v = qrho::density_matrix_value(x, xp, th, thp, it, itp, w);
    *re = v.real();
    *im = v.imag();
  });
}

}  // extern "C"
