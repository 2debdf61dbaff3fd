#include "qrho/fokker_planck.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <sstream>

#include "qrho/errors.hpp"
#include "tridiag.hpp"

namespace qrho {
namespace {

using detail::Tridiagonal;

// Bernoulli function x / (e^x - 1).
double bernoulli(double x) {
  if (std::fabs(x) < 1e-6) return 1.0 - 0.5 * x + x * x / 12.0;
  if (x > 700.0) return x * std::exp(-x);
  return x / std::expm1(x);
}

struct FpCoefficients {
  const Grid1D& grid;
  const BarrierProfile& profile;
  double epsilon;
  const FpOptions& opts;

  double velocity(double theta, double t) const {
    if (!opts.drift) return 0.0;
    return -(theta * theta + omega0_squared(profile, t));
  }

  Tridiagonal build(double t) const {
    const std::size_t n = grid.n;
    const double h = grid.spacing();
    Tridiagonal a(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double v = velocity(grid.x(i) + 0.5 * h, t);
      double al, be;
      if (epsilon > 0.0) {
        const double pe = v * h / epsilon;
        al = epsilon / h * bernoulli(-pe);
        be = epsilon / h * bernoulli(pe);
      } else {
        al = std::max(v, 0.0);
        be = -std::min(v, 0.0);
      }
      a.diag[i] -= al / h;
      a.upper[i] += be / h;
      a.lower[i + 1] += al / h;
      a.diag[i + 1] -= be / h;
    }
    if (opts.boundary == FpBoundary::reinjection) {
      const double vl = velocity(grid.theta_min - 0.5 * h, t);
      const double out = std::min(vl, 0.0) / h;  // outflow rate of cell 0
      a.diag[0] += out;
      a.corner -= out;
    }
    return a;
  }

  double max_speed(double t) const {
    const double m = std::max(std::fabs(grid.theta_min), std::fabs(grid.theta_max)) + grid.spacing();
    return std::fabs(velocity(m, t));
  }
};

void add_source(const FpOptions& opts, const Grid1D& g, double t, double weight, std::vector<double>& rhs) {
  if (!opts.source || weight == 0.0) return;
  for (std::size_t i = 0; i < g.n; ++i) rhs[i] += weight * opts.source(g.x(i), t);
}

// One theta-scheme step of size dt: (I - w dt A1) x1 = (I + (1-w) dt A0) x0 + dt (w s1 + (1-w) s0).
void theta_step(const Tridiagonal& a0, const Tridiagonal& a1, double w, double dt, const FpOptions& opts,
                const Grid1D& g, double t0, std::vector<double>& q) {
  std::vector<double> rhs;
  if (w < 1.0) {
    a0.apply(q, rhs);
    for (std::size_t i = 0; i < q.size(); ++i) rhs[i] = q[i] + (1.0 - w) * dt * rhs[i];
  } else {
    rhs = q;
  }
  add_source(opts, g, t0, (1.0 - w) * dt, rhs);
  add_source(opts, g, t0 + dt, w * dt, rhs);
  if (w == 0.0) {
    q.swap(rhs);
    return;
  }
  Tridiagonal m = a1;
  for (std::size_t i = 0; i < q.size(); ++i) {
    m.lower[i] *= -w * dt;
    m.upper[i] *= -w * dt;
    m.diag[i] = 1.0 - w * dt * m.diag[i];
  }
  m.corner *= -w * dt;
  detail::solve(m, rhs);
  q.swap(rhs);
}

std::size_t step_count(double span, double dt) {
  const double s = std::ceil(span / dt - 1e-9);
  if (!(s >= 1.0) || s > 1e9) fail(Errc::budget, "time step count outside [1, 1e9]");
  return std::size_t(s);
}

std::size_t snapshot_every(double interval, double dt) {
  if (!(interval > 0.0)) return 0;
  return std::max<std::size_t>(1, std::size_t(std::llround(interval / dt)));
}

}  // namespace

void Grid1D::validate() const {
  if (n < 64) fail(Errc::configuration, "grid.n must be at least 64");
  if (!(theta_max > theta_min) || !std::isfinite(theta_min) || !std::isfinite(theta_max))
    fail(Errc::configuration, "grid.theta_max must exceed grid.theta_min");
}

double DensityOnGrid::mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.spacing();
}

DensityOnGrid gaussian_spike(const Grid1D& grid, double center, double mass, double width_cells) {
  grid.validate();
  DensityOnGrid d;
  d.grid = grid;
  d.values.resize(grid.n);
  const double s = width_cells * grid.spacing();
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double z = (grid.x(i) - center) / s;
    d.values[i] = std::exp(-0.5 * z * z);
    sum += d.values[i];
  }
  const double scale = mass / (sum * grid.spacing());
  for (double& v : d.values) v *= scale;
  return d;
}

DensityOnGrid evolve_fp(const DensityOnGrid& q0, const BarrierProfile& profile, double epsilon, double dt,
                        double t_end, const FpOptions& opts, std::vector<DensityOnGrid>* snapshots) {
  q0.grid.validate();
  profile.validate();
  if (q0.values.size() != q0.grid.n) fail(Errc::configuration, "initial density size does not match grid");
  if (!(epsilon >= 0.0)) fail(Errc::configuration, "epsilon must be non-negative");
  if (!(dt > 0.0)) fail(Errc::configuration, "dt must be positive");
  if (!(t_end > q0.time)) fail(Errc::configuration, "t_end must exceed the initial time");

  const Grid1D& g = q0.grid;
  const FpCoefficients coef{g, profile, epsilon, opts};
  const std::size_t steps = step_count(t_end - q0.time, dt);
  const double h_t = (t_end - q0.time) / double(steps);

  if (opts.scheme == TimeScheme::explicit_euler) {
    const double h = g.spacing();
    double bound = std::numeric_limits<double>::infinity();
    if (epsilon > 0.0) bound = std::min(bound, h * h / (2.0 * epsilon));
    const double vmax = std::max(coef.max_speed(q0.time), coef.max_speed(t_end));
    if (vmax > 0.0) bound = std::min(bound, h / vmax);
    if (h_t > bound) {
      std::ostringstream msg;
      msg << "explicit scheme unstable: dt = " << h_t << " exceeds the bound " << bound;
      fail(Errc::configuration, msg.str());
    }
  }

  const bool frozen = profile.kind == ProfileKind::constant && !opts.source;
  const std::size_t every = snapshot_every(opts.snapshot_interval, h_t);
  std::vector<double> q = q0.values;
  double t = q0.time;
  Tridiagonal a_now = coef.build(t);
  if (snapshots && every) snapshots->push_back(q0);

  for (std::size_t k = 0; k < steps; ++k) {
    const double t_next = q0.time + h_t * double(k + 1);
    switch (opts.scheme) {
      case TimeScheme::explicit_euler:
        theta_step(a_now, a_now, 0.0, h_t, opts, g, t, q);
        break;
      case TimeScheme::implicit_euler: {
        const Tridiagonal a_next = frozen ? a_now : coef.build(t_next);
        theta_step(a_now, a_next, 1.0, h_t, opts, g, t, q);
        break;
      }
      case TimeScheme::crank_nicolson:
        if (int(k) < opts.rannacher_steps) {
          const double hh = 0.5 * h_t;
          const Tridiagonal a_mid = frozen ? a_now : coef.build(t + hh);
          theta_step(a_now, a_mid, 1.0, hh, opts, g, t, q);
          const Tridiagonal a_end = frozen ? a_now : coef.build(t_next);
          theta_step(a_mid, a_end, 1.0, hh, opts, g, t + hh, q);
        } else {
          const Tridiagonal a_next = frozen ? a_now : coef.build(t_next);
          theta_step(a_now, a_next, 0.5, h_t, opts, g, t, q);
        }
        break;
    }
    t = t_next;
    if (!frozen) a_now = coef.build(t);
    if (snapshots && every && ((k + 1) % every == 0)) snapshots->push_back(DensityOnGrid{g, q, t});
  }
  for (double v : q) {
    if (!std::isfinite(v)) fail(Errc::accuracy, "Fokker-Planck solution became non-finite");
  }
  return DensityOnGrid{g, std::move(q), t};
}

std::vector<double> discrete_stationary(const Grid1D& grid, double omega, double epsilon, double mass) {
  grid.validate();
  const BarrierProfile prof = BarrierProfile::constant(omega);
  FpOptions opts;
  const FpCoefficients coef{grid, prof, epsilon, opts};
  // Uniform flux J through every face, with the outflow face fixing Q_0 = J / v_L.
  const double h = grid.spacing();
  const std::size_t n = grid.n;
  const double J = -1.0;
  std::vector<double> q(n);
  q[0] = J / coef.velocity(grid.theta_min - 0.5 * h, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double v = coef.velocity(grid.x(i) + 0.5 * h, 0.0);
    double al, be;
    if (epsilon > 0.0) {
      const double pe = v * h / epsilon;
      al = epsilon / h * bernoulli(-pe);
      be = epsilon / h * bernoulli(pe);
    } else {
      al = std::max(v, 0.0);
      be = -std::min(v, 0.0);
    }
    q[i + 1] = (al * q[i] - J) / be;
  }
  double s = 0.0;
  for (double v : q) s += v;
  const double scale = mass / (s * h);
  for (double& v : q) v *= scale;
  return q;
}

double relaxation_rate(const std::vector<DensityOnGrid>& history, const std::vector<double>& reference) {
  if (history.size() < 3) fail(Errc::fit, "relaxation_rate needs at least 3 snapshots");
  std::vector<double> ts, ls;
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& s : history) {
    if (s.values.size() != reference.size()) fail(Errc::fit, "snapshot size does not match reference");
    double r = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) r = std::max(r, std::fabs(s.values[i] - reference[i]));
    if (!(r < prev) || !(r > 0.0)) {
      std::ostringstream msg;
      msg << "relaxation_rate: residual not strictly decreasing at t = " << s.time;
      fail(Errc::fit, msg.str());
    }
    prev = r;
    ts.push_back(s.time);
    ls.push_back(std::log(r));
  }
  const double n = double(ts.size());
  double st = 0, sl = 0, stt = 0, stl = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sl += ls[i];
    stt += ts[i] * ts[i];
    stl += ts[i] * ls[i];
  }
  const double slope = (n * stl - st * sl) / (n * stt - st * st);
  if (!(slope < 0.0)) fail(Errc::fit, "relaxation_rate: fitted rate is not positive");
  return -slope;
}

double feynman_kac_exact(double t, double s2) { return std::exp(0.5 * s2 * t * t + t * t * t / 6.0); }

B0Series feynman_kac_b0(const Grid1D& grid, double dt, double t_end, const FeynmanKacOptions& opts) {
  grid.validate();
  if (!(dt > 0.0) || !(t_end > 0.0)) fail(Errc::configuration, "feynman_kac_b0: dt and t_end must be positive");
  const std::size_t n = grid.n;
  const double h = grid.spacing();

  Tridiagonal a(n);
  if (opts.drift_variant) {
    const BarrierProfile prof = BarrierProfile::constant(opts.omega);
    FpOptions fo;
    const FpCoefficients coef{grid, prof, opts.epsilon, fo};
    a = coef.build(0.0);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      a.lower[i] = a.upper[i] = 0.5 / (h * h);
      a.diag[i] = -1.0 / (h * h);
    }
  }
  if (opts.potential) {
    for (std::size_t i = 0; i < n; ++i) a.diag[i] -= grid.x(i);
  }

  DensityOnGrid u = gaussian_spike(grid, 0.0, 1.0, opts.width_cells);
  const std::size_t steps = step_count(t_end, dt);
  const double h_t = t_end / double(steps);
  const std::size_t every = std::max<std::size_t>(1, snapshot_every(opts.snapshot_interval, h_t));
  FpOptions so;

  B0Series out;
  out.t.push_back(0.0);
  out.b0.push_back(u.mass());
  std::vector<double>& q = u.values;
  auto check_edges = [&](double t) {
    if (opts.drift_variant) return;
    double peak = 0.0;
    for (double v : q) peak = std::max(peak, std::fabs(v));
    const double edge = std::max(std::fabs(q.front()), std::fabs(q.back()));
    if (edge > 1e-12 * peak) {
      std::ostringstream msg;
      msg << "Feynman-Kac grid too small: boundary value " << edge / peak << " of the peak at t = " << t;
      fail(Errc::domain_size, msg.str());
    }
  };
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = h_t * double(k);
    if (k < 2) {
      theta_step(a, a, 1.0, 0.5 * h_t, so, grid, t, q);
      theta_step(a, a, 1.0, 0.5 * h_t, so, grid, t, q);
    } else {
      theta_step(a, a, 0.5, h_t, so, grid, t, q);
    }
    if ((k + 1) % every == 0 || k + 1 == steps) {
      check_edges(t + h_t);
      out.t.push_back(h_t * double(k + 1));
      out.b0.push_back(u.mass());
    }
  }
  out.limit_estimate = out.b0.back();
  const double t_ref = 0.9 * t_end;
  std::size_t j = 0;
  while (j + 1 < out.t.size() && out.t[j] < t_ref) ++j;
  const double change = std::fabs(out.b0.back() - out.b0[j]) / std::max(std::fabs(out.b0.back()), 1e-300);
  out.stabilised = std::isfinite(out.limit_estimate) && change < 1e-3;
  out.outcome = out.stabilised ? "converged" : "diverged";
  return out;
}

}  // namespace qrho
