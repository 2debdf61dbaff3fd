#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>

#include <spdlog/spdlog.h>

namespace qrho_cli {
namespace {

void check(qrho_status s) {
  if (s != QRHO_OK) throw NumericalError(std::string(qrho_status_name(s)) + ": " + qrho_last_error());
}

// Evaluates body(i) for i < n on `workers` threads; results are indexed, so the
// output order never depends on scheduling.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, unsigned workers, F body) {
  std::vector<T> out(n);
  unsigned w = workers ? workers : std::max(1u, std::thread::hardware_concurrency());
  w = static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex m;
  auto run = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        out[i] = body(i);
      } catch (...) {
        std::lock_guard lock(m);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < w; ++k) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

Table stationary_table(const RunConfig& c, const std::string& name) {
  Table t{name, {"theta_bar", "density", "lambda"}, {}};
  for (double lg : c.lambda_grid) {
    qrho_stationary* d = nullptr;
    check(qrho_stationary_create(lg, 1.0, 0.0, &d));
    std::unique_ptr<qrho_stationary, decltype(&qrho_stationary_destroy)> guard(d, qrho_stationary_destroy);
    for (double tb : c.theta_grid) {
      double q = 0.0;
      check(qrho_stationary_density_at(d, tb, &q));
      t.rows.push_back({tb, q, lg});
    }
    spdlog::info("stationary lambda_gamma={} done", lg);
  }
  return t;
}

Table stationary_summary(const RunConfig& c) {
  Table t{"stationary_summary", {"lambda", "flux_integral", "flux_airy", "grid_mass", "tail_mass"}, {}};
  for (double lg : c.lambda_grid) {
    qrho_stationary* d = nullptr;
    check(qrho_stationary_create(lg, c.params.epsilon, 0.0, &d));
    std::unique_ptr<qrho_stationary, decltype(&qrho_stationary_destroy)> guard(d, qrho_stationary_destroy);
    double flux = 0, mass = 0, tail = 0, airy = 0;
    check(qrho_stationary_summary(d, &flux, &mass, &tail));
    check(qrho_flux_constant(lg, c.params.epsilon, QRHO_FLUX_AIRY, &airy));
    t.rows.push_back({lg, flux, airy, mass, tail});
  }
  return t;
}

Table barrier_table(const RunConfig& c) {
  Table t{"fig2", {"t", "omega", "width"}, {}};
  for (double width : {0.0, 0.25, 1.0}) {
    qrho_profile p = c.profile;
    p.omega_out = c.params.omega_out;
    p.kind = width == 0.0 ? QRHO_PROFILE_STEP : QRHO_PROFILE_SMOOTH_STEP;
    p.width = width;
    for (double tt : c.t_grid) {
      double w = 0.0;
      check(qrho_omega0(&p, tt, &w));
      t.rows.push_back({tt, w, width});
    }
  }
  return t;
}

qrho_sde_config sde_config(const RunConfig& c) {
  qrho_sde_config s{};
  check(qrho_sde_defaults(&c.params, &c.profile, c.seed, &s));
  if (c.dt > 0.0) s.dt = c.dt;
  if (c.theta_cut > 0.0) s.theta_cut = c.theta_cut;
  if (s.dt * s.theta_cut * s.theta_cut > 0.1) throw ConfigError("sde.dt", "dt * theta_cut^2 must not exceed 0.1");
  s.n_paths = c.n_paths;
  s.store_stride = c.stride;
  s.workers = c.workers;
  s.epsilon = c.params.epsilon;
  return s;
}

Table paths_table(const RunConfig& c) {
  const qrho_sde_config s = sde_config(c);
  spdlog::info("paths: dt={} cut={} n={}", s.dt, s.theta_cut, s.n_paths);
  qrho_ensemble* e = nullptr;
  check(qrho_simulate(&s, c.t0, c.t1, c.theta0, &e));
  std::unique_ptr<qrho_ensemble, decltype(&qrho_ensemble_destroy)> guard(e, qrho_ensemble_destroy);
  Table t{"paths", {"path", "t", "theta", "int_theta"}, {}};
  for (std::size_t k = 0; k < s.n_paths; ++k) {
    std::size_t n = 0, jumps = 0;
    check(qrho_path_size(e, k, &n));
    check(qrho_path_reinjections(e, k, &jumps));
    std::vector<double> tt(n), th(n), it(n);
    check(qrho_path_copy(e, k, tt.data(), th.data(), it.data(), n));
    for (std::size_t i = 0; i < n; ++i) t.rows.push_back({double(k), tt[i], th[i], it[i]});
    spdlog::debug("path {}: {} samples, {} reinjections", k, n, jumps);
  }
  return t;
}

Table fp_table(const RunConfig& c) {
  const std::size_t n = c.fp_n;
  const double h = (c.fp_theta_max - c.fp_theta_min) / double(n - 1);
  const double sd = 3.0 * h;
  std::vector<double> q(n);
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = c.fp_theta_min + h * double(i);
    q[i] = std::exp(-0.5 * x * x / (sd * sd));
    mass += h * q[i];
  }
  if (!(mass > 0.0)) throw ConfigError("fp.theta_min", "the start spike at theta = 0 lies outside the grid");
  for (double& v : q) v /= mass;

  Table t{"fp", {"t", "theta", "q"}, {}};
  auto emit = [&](double time) {
    for (std::size_t i = 0; i < n; ++i) t.rows.push_back({time, c.fp_theta_min + h * double(i), q[i]});
  };
  emit(0.0);
  double time = 0.0;
  while (time < c.fp_t_end - 1e-12) {
    const double span = std::min(c.fp_snapshot, c.fp_t_end - time);
    // each chunk starts at time 0 of a shifted profile
    qrho_profile p = c.profile;
    p.transition_time -= time;
    check(qrho_fp_evolve(c.fp_theta_min, c.fp_theta_max, n, q.data(), &p, c.params.epsilon, c.fp_dt, span,
                         QRHO_SCHEME_CN, QRHO_BOUNDARY_REINJECTION));
    time += span;
    emit(time);
    spdlog::debug("fp t={}", time);
  }
  return t;
}

Table wavefunction_table(const RunConfig& c) {
  const double width = c.profile.kind == QRHO_PROFILE_SMOOTH_STEP ? c.profile.width : 0.0;
  const double t0 = std::min(c.wf_t, c.profile.transition_time) - 20.0 - 40.0 * width;
  const double wmax = std::max(c.params.omega_in, c.params.omega_out);
  qrho_trajectory* tr = nullptr;
  check(qrho_trajectory_create(&c.profile, t0, c.wf_t + 1.0, 0.02 / wmax, &tr));
  std::unique_ptr<qrho_trajectory, decltype(&qrho_trajectory_destroy)> guard(tr, qrho_trajectory_destroy);
  Table t{"wavefunction", {"x", "re_psi", "im_psi", "abs2_psi"}, {}};
  for (double x : c.x_grid) {
    double re = 0, im = 0;
    check(qrho_psi_stc(tr, c.wf_n, x, c.wf_t, &re, &im));
    t.rows.push_back({x, re, im, re * re + im * im});
  }
  return t;
}

Table transition_table(const RunConfig& c, const std::string& name, bool with_rho) {
  struct Point {
    double lambda, rho;
  };
  std::vector<Point> pts;
  for (double l : c.lambda_grid)
    for (double r : c.rho_grid) pts.push_back({l, r});
  const auto probs = parallel_map<double>(pts.size(), c.workers, [&](std::size_t i) {
    double p = 0, re = 0, im = 0;
    check(qrho_transition(pts[i].lambda, pts[i].rho, &p, &re, &im));
    return p;
  });
  Table t{name, with_rho ? std::vector<std::string>{"lambda", "rho", "probability"}
                         : std::vector<std::string>{"lambda", "probability"}, {}};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (with_rho)
      t.rows.push_back({pts[i].lambda, pts[i].rho, probs[i]});
    else
      t.rows.push_back({pts[i].lambda, probs[i]});
  }
  return t;
}

// Thermodynamics at lambda with omega_as fixed: eps = (omega_as^2 / lambda)^(3/2).
qrho_thermo_report thermo_at(const RunConfig& c, double lambda) {
  qrho_params p = c.params;
  p.epsilon = std::pow(p.omega_as * p.omega_as / lambda, 1.5);
  qrho_thermo_report r{};
  check(qrho_thermo(&p, &r));
  return r;
}

Table fig5_table(const RunConfig& c) {
  Table t{"fig5", {"lambda", "energy_shifted", "shift_only", "entropy_over_k"}, {}};
  for (double l : c.lambda_grid) {
    const auto r = thermo_at(c, l);
    t.rows.push_back({l, r.energy_shifted, r.shift_only, r.entropy_over_k});
  }
  return t;
}

Table thermo_table(const RunConfig& c) {
  Table t{"thermo",
          {"lambda", "epsilon", "energy_shifted", "shift_only", "width", "decay_time", "internal_energy",
           "free_energy", "entropy_over_k", "width_quadrature"},
          {}};
  for (double l : c.lambda_grid) {
    const auto r = thermo_at(c, l);
    const double eps = std::pow(c.params.omega_as * c.params.omega_as / l, 1.5);
    t.rows.push_back({l, eps, r.energy_shifted, r.shift_only, r.width, r.decay_time, r.internal_energy,
                      r.free_energy, r.entropy_over_k, r.width_quadrature});
  }
  return t;
}

}  // namespace

std::vector<Table> run_command(const RunConfig& c) {
  const std::string& cmd = c.command;
  if (cmd == "stationary") return {stationary_table(c, "stationary"), stationary_summary(c)};
  if (cmd == "paths") return {paths_table(c)};
  if (cmd == "fp") return {fp_table(c)};
  if (cmd == "wavefunction") return {wavefunction_table(c)};
  if (cmd == "transition") return {transition_table(c, "fig3", true)};
  if (cmd == "thermo") return {thermo_table(c)};
  if (cmd == "figures") {
    switch (c.fig) {
      case 1: return {stationary_table(c, "fig1")};
      case 2: return {barrier_table(c)};
      case 3: return {transition_table(c, "fig3", true)};
      case 4: {
        RunConfig at_zero = c;
        at_zero.rho_grid = {0.0};
        return {transition_table(at_zero, "fig4", false)};
      }
      case 5: return {fig5_table(c)};
    }
  }
  throw ConfigError("command", "unknown command '" + cmd + "'");
}

}  // namespace qrho_cli
