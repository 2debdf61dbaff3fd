#include "qrho/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "parallel.hpp"
#include "qrho/errors.hpp"
#include "qrho/numerics.hpp"

namespace qrho {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxPhasePerStep = 0.1;
constexpr std::size_t kMinEnsemble = 1000;

// Forest-Ruth coefficients.
const double kFr = 1.0 / (2.0 - std::cbrt(2.0));
const double kDrift[4] = {0.5 * kFr, 0.5 * (1.0 - kFr), 0.5 * (1.0 - kFr), 0.5 * kFr};
const double kKick[3] = {kFr, 1.0 - 2.0 * kFr, kFr};

void check_order(unsigned n) {
  if (n > kMaxStateIndex)
    fail(Errc::unsupported_order, "state index " + std::to_string(n) + " exceeds 32");
}

double max_omega(const BarrierProfile& p) { return std::max(p.omega_in, p.omega_out); }

// Continuous arg: nearest branch to the previous value.
double unwrap(double prev, double raw) {
  const double two_pi = 2.0 * kPi;
  return raw + two_pi * std::round((prev - raw) / two_pi);
}

// Appends tau and phase for the newest sample using the derivative-corrected trapezoid.
void finish_sample(ComplexTrajectory& tr) {
  const std::size_t i = tr.size() - 1;
  tr.sigma.push_back(std::abs(tr.xi[i]));
  if (i == 0) {
    tr.tau.push_back(0.0);
    tr.phase.push_back(std::arg(tr.xi[0]));
    return;
  }
  const double h = tr.times[i] - tr.times[i - 1];
  auto f = [&](std::size_t k) { return 1.0 / std::norm(tr.xi[k]); };
  auto fp = [&](std::size_t k) {
    const double s2 = std::norm(tr.xi[k]);
    return -2.0 * std::real(std::conj(tr.xi[k]) * tr.xi_dot[k]) / (s2 * s2);
  };
  tr.tau.push_back(tr.tau[i - 1] + 0.5 * h * (f(i - 1) + f(i)) + h * h / 12.0 * (fp(i - 1) - fp(i)));
  tr.phase.push_back(unwrap(tr.phase[i - 1], std::arg(tr.xi[i])));
}

void push_state(ComplexTrajectory& tr, double t, cplx q, cplx p) {
  tr.times.push_back(t);
  tr.xi.push_back(q);
  tr.xi_dot.push_back(p);
  finish_sample(tr);
}

ComplexTrajectory start(const BarrierProfile& profile, double t0, std::size_t reserve) {
  const double w = profile.omega_in;
  if (std::fabs(omega0(profile, t0) - w) > 1e-10 * w) {
    std::ostringstream msg;
    msg << "solve_xi: t0 = " << t0 << " is not in the incoming asymptotic region";
    fail(Errc::precondition, msg.str());
  }
  ComplexTrajectory tr;
  tr.omega_in = w;
  tr.t0 = t0;
  tr.times.reserve(reserve);
  tr.xi.reserve(reserve);
  tr.xi_dot.reserve(reserve);
  const cplx e = std::polar(1.0, w * t0);
  push_state(tr, t0, e, cplx(0.0, w) * e);
  return tr;
}

// Integrates uniformly over [a, b] with steps no longer than dt.
void forest_ruth(const BarrierProfile& profile, double a, double b, double dt, ComplexTrajectory& tr) {
  if (!(b > a)) return;
  const std::size_t steps = std::size_t(std::ceil((b - a) / dt - 1e-9));
  const double h = (b - a) / double(steps);
  cplx q = tr.xi.back(), p = tr.xi_dot.back();
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = a + h * double(k);
    double s = t;
    for (int j = 0; j < 3; ++j) {
      q += kDrift[j] * h * p;
      s += kDrift[j] * h;
      p -= kKick[j] * h * omega0_squared(profile, s) * q;
    }
    q += kDrift[3] * h * p;
    push_state(tr, k + 1 == steps ? b : a + h * double(k + 1), q, p);
  }
}

// Hermite cubic on [0, 1] with end values and scaled end slopes.
template <class T>
T hermite_cubic(T y0, T d0, T y1, T d1, double s, double h) {
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * d1;
}

}  // namespace

ComplexTrajectory::State ComplexTrajectory::at(double t) const {
  if (times.empty() || t < times.front() - 1e-12 || t > times.back() + 1e-12) {
    std::ostringstream msg;
    msg << "time " << t << " outside the trajectory range";
    fail(Errc::timing, msg.str());
  }
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t j = std::size_t(it - times.begin());
  if (j == 0) j = 1;
  if (j >= times.size()) j = times.size() - 1;
  const std::size_t i = j - 1;
  const double h = times[j] - times[i];
  const double s = h > 0.0 ? std::clamp((t - times[i]) / h, 0.0, 1.0) : 0.0;
  if (s == 0.0) return {xi[i], xi_dot[i], sigma[i], tau[i], phase[i]};
  if (s == 1.0) return {xi[j], xi_dot[j], sigma[j], tau[j], phase[j]};
  // xi'' is not stored; use slope of xi_dot from the chord for its interpolation.
  const cplx q = hermite_cubic(xi[i], xi_dot[i], xi[j], xi_dot[j], s, h);
  const cplx chord = (xi_dot[j] - xi_dot[i]) / h;
  const cplx p = hermite_cubic(xi_dot[i], chord, xi_dot[j], chord, s, h);
  const double f0 = 1.0 / (sigma[i] * sigma[i]), f1 = 1.0 / (sigma[j] * sigma[j]);
  // tau by integrating the linear interpolant of 1/sigma^2 (accurate enough inside a step)
  const double ta = tau[i] + h * (s * f0 + 0.5 * s * s * (f1 - f0));
  const double ph = unwrap(phase[i], std::arg(q));
  return {q, p, std::abs(q), ta, ph};
}

ComplexTrajectory solve_xi(const BarrierProfile& profile, double t0, double t1, double dt) {
  profile.validate();
  if (!(t1 > t0)) fail(Errc::precondition, "solve_xi: t1 must exceed t0");
  if (!(dt > 0.0)) fail(Errc::configuration, "solve_xi: dt must be positive");
  if (max_omega(profile) * dt > kMaxPhasePerStep) {
    std::ostringstream msg;
    msg << "solve_xi: phase advance " << max_omega(profile) * dt << " per step exceeds 0.1";
    fail(Errc::resolution, msg.str());
  }
  ComplexTrajectory tr = start(profile, t0, std::size_t((t1 - t0) / dt) + 4);
  const double tt = profile.transition_time;
  if (profile.kind == ProfileKind::step && tt > t0 && tt < t1) {
    forest_ruth(profile, t0, tt, dt, tr);
    forest_ruth(profile, tt, t1, dt, tr);
  } else {
    forest_ruth(profile, t0, t1, dt, tr);
  }
  return tr;
}

ComplexTrajectory solve_xi(const BarrierProfile& profile, const ThetaPath& path) {
  profile.validate();
  if (path.size() < 2) fail(Errc::precondition, "solve_xi: path has fewer than two samples");
  ComplexTrajectory tr = start(profile, path.times.front(), path.size());
  cplx q = tr.xi.back(), p = tr.xi_dot.back();
  const double wmax = max_omega(profile);
  for (std::size_t k = 1; k < path.size(); ++k) {
    const double ta = path.times[k - 1], h = path.times[k] - ta;
    if (wmax * h > kMaxPhasePerStep && !path.excised(k - 1)) {
      std::ostringstream msg;
      msg << "solve_xi: path interval " << h << " too coarse for omega " << wmax;
      fail(Errc::resolution, msg.str());
    }
    // integral of Omega^2 over the interval: Omega0^2 h + int F, with int F = -noise
    const double impulse = omega0_squared(profile, ta + 0.5 * h) * h - path.noise[k];
    if (path.excised(k - 1) && wmax * h > kMaxPhasePerStep) {
      // long excursion: split deterministic propagation
      const std::size_t m = std::size_t(std::ceil(wmax * h / kMaxPhasePerStep));
      const double hs = h / double(m);
      for (std::size_t j = 0; j < m; ++j) {
        const double w2 = omega0_squared(profile, ta + (j + 0.5) * hs);
        p -= 0.5 * w2 * hs * q;
        q += hs * p;
        p -= 0.5 * w2 * hs * q;
      }
    } else {
      p -= 0.5 * impulse * q;
      q += h * p;
      p -= 0.5 * impulse * q;
    }
    push_state(tr, path.times[k], q, p);
  }
  return tr;
}

cplx psi_in(unsigned n, double x, double t, double omega_in) {
  check_order(n);
  if (!(omega_in > 0.0)) fail(Errc::domain, "psi_in: omega_in must be positive");
  const double y = std::sqrt(omega_in) * x;
  const double amp = std::pow(omega_in / kPi, 0.25) * hermite_normalized(n, y) * std::exp(-0.5 * y * y);
  return std::polar(amp, -(n + 0.5) * omega_in * t);
}

cplx psi_stc(unsigned n, double x, double t, const ComplexTrajectory& traj) {
  check_order(n);
  const auto s = traj.at(t);
  if (s.sigma < 1e-12) {
    std::ostringstream msg;
    msg << "psi_stc: |xi| = " << s.sigma << " at t = " << t << " (node of xi)";
    fail(Errc::evaluation_point, msg.str());
  }
  const double w = traj.omega_in;
  const double y = std::sqrt(w) * x / s.sigma;
  const double pref = std::pow(w / kPi, 0.25) / std::sqrt(s.sigma) * hermite_normalized(n, y);
  const double tau_abs = traj.t0 + s.tau;
  const cplx expo = cplx(0.0, 0.5) * (s.xi_dot / s.xi) * x * x + cplx(0.0, -(n + 0.5) * w * tau_abs);
  return pref * std::exp(expo);
}

double psi_edge(unsigned n, double t, const ComplexTrajectory& traj) {
  const auto s = traj.at(t);
  return 6.0 * s.sigma * std::sqrt((2.0 * n + 1.0) / traj.omega_in);
}

std::vector<std::vector<cplx>> overlap_matrix(const ComplexTrajectory& traj, double t, unsigned nmax) {
  check_order(nmax);
  const auto s = traj.at(t);
  const GaussRule rule = gauss_hermite(2 * nmax + 24);
  const double scale = s.sigma / std::sqrt(traj.omega_in);
  std::vector<std::vector<cplx>> values(nmax + 1, std::vector<cplx>(rule.nodes.size()));
  for (unsigned n = 0; n <= nmax; ++n)
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) values[n][k] = psi_stc(n, scale * rule.nodes[k], t, traj);
  std::vector<std::vector<cplx>> m(nmax + 1, std::vector<cplx>(nmax + 1));
  for (unsigned a = 0; a <= nmax; ++a)
    for (unsigned b = 0; b <= nmax; ++b) {
      cplx sum = 0.0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double y = rule.nodes[k];
        sum += rule.weights[k] * std::exp(y * y) * std::conj(values[a][k]) * values[b][k];
      }
      m[a][b] = sum * scale;
    }
  return m;
}

McEstimate summarize(const std::vector<cplx>& samples) {
  McEstimate e;
  e.samples = samples.size();
  if (samples.empty()) fail(Errc::sampling, "no samples to average");
  cplx sum = 0.0;
  for (const cplx& v : samples) sum += v;
  e.mean = sum / double(samples.size());
  if (samples.size() > 1) {
    double vr = 0.0, vi = 0.0;
    for (const cplx& v : samples) {
      const cplx d = v - e.mean;
      vr += d.real() * d.real();
      vi += d.imag() * d.imag();
    }
    const double nn = double(samples.size());
    e.se_re = std::sqrt(vr / (nn - 1.0) / nn);
    e.se_im = std::sqrt(vi / (nn - 1.0) / nn);
  }
  const double mag = std::abs(e.mean);
  const double se = std::hypot(e.se_re, e.se_im);
  e.precision_warning = mag > 0.0 ? se / mag > 0.2 : se > 0.0;
  return e;
}

McEstimate psi_br_estimate(unsigned n, double x, double t, const std::vector<ThetaPath>& ensemble,
                           const BarrierProfile& profile, unsigned workers) {
  check_order(n);
  if (ensemble.size() < kMinEnsemble) {
    std::ostringstream msg;
    msg << "psi_br_estimate: ensemble of " << ensemble.size() << " paths is below 1000";
    fail(Errc::precondition, msg.str());
  }
  std::vector<cplx> values(ensemble.size());
  detail::parallel_for(ensemble.size(), workers, [&](std::size_t k, unsigned) {
    const ComplexTrajectory tr = solve_xi(profile, ensemble[k]);
    values[k] = psi_stc(n, x, t, tr);
  });
  return summarize(values);
}

}  // namespace qrho
