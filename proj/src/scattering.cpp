#include "qrho/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qrho/errors.hpp"
#include "qrho/numerics.hpp"
#include "qrho/stationary.hpp"

namespace qrho {
namespace {

constexpr double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
constexpr cplx kI{0.0, 1.0};
constexpr std::size_t kCauchyPoints = 16;
constexpr double kCauchyRadius = 0.3;

void check_asymptotic(const BarrierProfile& profile, double t) {
  const double w = omega0(profile, t);
  if (std::fabs(w - profile.omega_out) > 1e-8 * profile.omega_out) {
    std::ostringstream msg;
    msg << "t_final = " << t << " is not in the outgoing asymptotic region (omega0 = " << w << ")";
    fail(Errc::timing, msg.str());
  }
}

struct XiTerms {
  cplx A;          // w_out - i xi_dot / xi
  cplx inv_sqrt;   // (A xi)^(-1/2) on the continuous branch
  cplx xi;
  double phase;    // continuous arg xi
  double sigma2;
};

XiTerms xi_terms(const ComplexTrajectory& traj, double t, double omega_out) {
  const auto s = traj.at(t);
  if (s.sigma < 1e-300) fail(Errc::evaluation_point, "xi vanishes at the evaluation time");
  XiTerms x;
  x.xi = s.xi;
  x.phase = s.phase;
  x.sigma2 = s.sigma * s.sigma;
  x.A = omega_out - kI * s.xi_dot / s.xi;
  if (std::abs(x.A) < 1e-14 * omega_out) fail(Errc::singular_configuration, "generating functional: A = 0");
  const double mod = std::abs(x.A) * s.sigma;
  const double arg = s.phase + std::arg(x.A);
  x.inv_sqrt = std::polar(1.0 / std::sqrt(mod), -0.5 * arg);
  return x;
}

double factorial(unsigned k) {
  double f = 1.0;
  for (unsigned j = 2; j <= k; ++j) f *= j;
  return f;
}

}  // namespace

cplx SElementSet::get(unsigned m, unsigned n) const {
  if ((m + n) % 2 == 1) return 0.0;
  for (const SElement* e : {&s00, &s11, &s02, &s20})
    if (e->m == m && e->n == n) return e->value;
  return 0.0;
}

cplx generating_I(cplx w, cplx z2, const ComplexTrajectory& traj, double t, double omega_out) {
  if (std::abs(w) > 1.0 + 1e-12 || std::abs(z2) > 1.0 + 1e-12)
    fail(Errc::domain, "generating_I: |z1| and |z2| must not exceed 1");
  const XiTerms x = xi_terms(traj, t, omega_out);
  const double win = traj.omega_in;
  const cplx B = std::sqrt(2.0 * win) * z2 / x.xi + std::sqrt(2.0 * omega_out) * std::polar(1.0, omega_out * t) * w;
  const cplx C = std::polar(1.0, -2.0 * x.phase) * z2 * z2 + std::polar(1.0, 2.0 * omega_out * t) * w * w -
                 kI * omega_out * t;
  return std::pow(win * omega_out, 0.25) * std::sqrt(2.0) * x.inv_sqrt * std::exp(B * B / (2.0 * x.A) - 0.5 * C);
}

cplx generating_coefficient(unsigned m, unsigned n, const ComplexTrajectory& traj, double t, double omega_out) {
  const std::size_t N = kCauchyPoints;
  cplx sum = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    const double a = 2.0 * kPi * double(j) / double(N);
    for (std::size_t k = 0; k < N; ++k) {
      const double b = 2.0 * kPi * double(k) / double(N);
      const cplx val = generating_I(std::polar(kCauchyRadius, a), std::polar(kCauchyRadius, b), traj, t, omega_out);
      sum += val * std::polar(1.0, -(double(m) * a + double(n) * b));
    }
  }
  const cplx c = sum / double(N * N) / std::pow(kCauchyRadius, double(m + n));
  return std::sqrt(factorial(m) * factorial(n)) * c;
}

SElementSet s_elements_path(const ComplexTrajectory& traj, const BarrierProfile& profile, double t) {
  check_asymptotic(profile, t);
  const double wout = profile.omega_out, win = traj.omega_in;
  const XiTerms x = xi_terms(traj, t, wout);
  SElementSet s;
  s.s00.value = std::pow(win * wout, 0.25) * std::sqrt(2.0) * x.inv_sqrt * std::polar(1.0, 0.5 * wout * t);
  s.s11.value = s.s00.value * s.s00.value * s.s00.value;
  s.s20.value = s.s00.value * kInvSqrt2 * std::polar(1.0, 2.0 * wout * t) * (2.0 * wout / x.A - 1.0);
  s.s02.value = s.s00.value * kInvSqrt2 * std::polar(1.0, -2.0 * x.phase) * (2.0 * win / (x.A * x.sigma2) - 1.0);
  return s;
}

double theta_at(const ThetaPath& p, double t, double omega) {
  if (p.times.empty() || t < p.times.front() || t > p.times.back()) fail(Errc::timing, "time outside the path");
  auto it = std::upper_bound(p.times.begin(), p.times.end(), t);
  std::size_t j = std::size_t(it - p.times.begin());
  if (j >= p.times.size()) return p.values.back();
  const std::size_t i = j - 1;
  if (p.excised(i)) {
    // theta(t) = -omega tan(omega (t - t_cross) + atan(cut / omega)), from -cut through infinity to +cut
    const double phi = omega * (t - p.times[i]) + std::atan(p.theta_cut / omega);
    const double c = std::cos(phi);
    if (std::fabs(c) < 1e-300) return -1e300;
    return -omega * std::sin(phi) / c;
  }
  const double f = (t - p.times[i]) / (p.times[j] - p.times[i]);
  return p.values[i] + f * (p.values[j] - p.values[i]);
}

namespace {
double interp_series(const ThetaPath& p, const std::vector<double>& v, double t) {
  if (p.times.empty() || t < p.times.front() || t > p.times.back()) fail(Errc::timing, "time outside the path");
  auto it = std::upper_bound(p.times.begin(), p.times.end(), t);
  std::size_t j = std::size_t(it - p.times.begin());
  if (j >= p.times.size()) return v.back();
  const std::size_t i = j - 1;
  const double f = (t - p.times[i]) / (p.times[j] - p.times[i]);
  return v[i] + f * (v[j] - v[i]);
}
}  // namespace

double int_theta_at(const ThetaPath& p, double t) { return interp_series(p, p.int_theta, t); }
double int_exp_at(const ThetaPath& p, double t) { return interp_series(p, p.int_exp, t); }

SElementSet s_elements_path(const ThetaPath& path, const BarrierProfile& profile, double t) {
  check_asymptotic(profile, t);
  const double wout = profile.omega_out, win = profile.omega_in;
  const double rho = rho_from_frequencies(win, wout);
  const double th = std::fabs(theta_at(path, t, wout));
  const cplx A = cplx(wout, th);
  SElementSet s;
  s.s00.value = std::pow(1.0 - rho, 0.25) / std::sqrt(cplx(1.0, th / wout));
  s.s11.value = s.s00.value * s.s00.value * s.s00.value;
  s.s20.value = s.s00.value * kInvSqrt2 * std::polar(1.0, 2.0 * wout * t) * (2.0 * wout / A - 1.0);
  const double damp = std::exp(-2.0 * int_theta_at(path, t));
  s.s02.value = s.s00.value * kInvSqrt2 * std::polar(1.0, -2.0 * win * int_exp_at(path, t)) * (2.0 * win * damp / A - 1.0);
  return s;
}

cplx s00_theta_literal(const ThetaPath& path, const BarrierProfile& profile, double t) {
  check_asymptotic(profile, t);
  const double wout = profile.omega_out, win = profile.omega_in;
  const double th = theta_at(path, t, wout);
  return std::sqrt(2.0) * std::pow(win / wout, 0.25) / std::sqrt(cplx(1.0, -th / wout)) *
         std::exp(-0.5 * int_theta_at(path, t));
}

TransitionResult s00_br(double lambda, double rho) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) fail(Errc::domain, "s00_br: lambda must be positive");
  if (!(rho >= 0.0) || !(rho < 1.0)) fail(Errc::domain, "s00_br: rho must lie in [0, 1)");
  const double gamma = gamma_from_rho(rho);
  const double lg = lambda * gamma;
  const double mass = qs_mass(lg);
  const double a = std::sqrt(lg);
  IntegrationOptions opts;
  opts.tol = 1e-10;
  // tb = a v, d = sqrt(1 + v^2)
  auto weight = [&](double v) { return a * qs_unnormalized(a * v, lg) / mass; };
  const double i1 = integrate(
                        [&](double v) {
                          const double d = std::sqrt(1.0 + v * v);
                          return std::sqrt(0.5 * (d + 1.0)) / d * weight(v);
                        },
                        -kInf, kInf, opts)
                        .value;
  const double i2 = integrate(
                        [&](double v) {
                          const double d = std::sqrt(1.0 + v * v);
                          // sqrt((d - 1)/2) without cancellation: (d - 1) = v^2 / (d + 1)
                          return std::sqrt(0.5 * v * v / (d + 1.0)) / d * weight(v);
                        },
                        -kInf, kInf, opts)
                        .value;
  TransitionResult r;
  r.lambda = lambda;
  r.rho = rho;
  r.i1 = i1;
  r.i2 = i2;
  r.s00 = std::pow(1.0 - rho, 0.25) * cplx(i1, -i2);
  r.probability = std::sqrt(1.0 - rho) * (i1 * i1 + i2 * i2);
  return r;
}

double transition_probability(double lambda, double rho) {
  if (rho == 1.0) return 0.0;
  return s00_br(lambda, rho).probability;
}

McEstimate s_mn_br_mc(unsigned m, unsigned n, const std::vector<ThetaPath>& ensemble, const BarrierProfile& profile,
                      double t_final) {
  if (ensemble.size() < 1000) {
    std::ostringstream msg;
    msg << "s_mn_br_mc: ensemble of " << ensemble.size() << " paths is below 1000";
    fail(Errc::precondition, msg.str());
  }
  check_asymptotic(profile, t_final);
  std::vector<cplx> values(ensemble.size(), 0.0);
  if ((m + n) % 2 == 0) {
    for (std::size_t k = 0; k < ensemble.size(); ++k)
      values[k] = s_elements_path(ensemble[k], profile, t_final).get(m, n);
  }
  McEstimate e = summarize(values);
  if ((m + n) % 2 == 1) e.precision_warning = false;
  return e;
}

}  // namespace qrho
