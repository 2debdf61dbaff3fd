#include "qrho/thermo.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qrho/errors.hpp"
#include "qrho/numerics.hpp"
#include "qrho/scattering.hpp"
#include "qrho/stationary.hpp"

namespace qrho {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;

void check_lambda(double lambda, bool allow_zero) {
  if (!std::isfinite(lambda) || lambda < 0.0 || (!allow_zero && lambda == 0.0)) {
    std::ostringstream msg;
    msg << "lambda = " << lambda << (allow_zero ? " must be non-negative" : " must be positive");
    fail(Errc::domain, msg.str());
  }
}

// For lambda >= 8 the products Ai Ai' + Bi Bi' cancel to about 1e-10 relative.
// There ln A(-z) = -ln pi - ln(z)/2 + ln S(z) with the modulus series
// S(z) = sum_k (-1)^k (6k - 1)!! / (k! 96^k) z^(-3k), truncated at its smallest term.
constexpr double kModulusSwitch = 8.0;

struct LogDerivs {
  double first, second;  // d/da and d^2/da^2 of ln A(-lambda + a)
};

LogDerivs modulus_log_derivs(double z) {
  long double c = 1.0L, s = 1.0L, s1 = 0.0L, s2 = 0.0L;
  const long double zi3 = 1.0L / ((long double)z * z * z);
  long double zp = 1.0L, prev = 1.0L;
  for (int k = 1; k < 60; ++k) {
    c *= (6.0L * k - 5.0L) * (6.0L * k - 3.0L) * (6.0L * k - 1.0L) / (96.0L * k);
    zp *= zi3;
    const long double mag = c * zp;
    if (mag > prev) break;
    prev = mag;
    const long double term = (k % 2 ? -1.0L : 1.0L) * mag;
    s += term;
    s1 += -3.0L * k * term / z;
    s2 += 3.0L * k * (3.0L * k + 1.0L) * term / ((long double)z * z);
    if (mag < 1e-22L) break;
  }
  // a shifts z = lambda - a, so odd z-derivatives change sign
  const long double r1 = s1 / s;
  LogDerivs d;
  d.first = static_cast<double>(0.5L / z - r1);
  d.second = static_cast<double>(0.5L / ((long double)z * z) + s2 / s - r1 * r1);
  return d;
}

void check_epsilon(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) fail(Errc::domain, "epsilon must be positive");
}

}  // namespace

double airy_log_derivative(double lambda) {
  check_lambda(lambda, true);
  if (lambda >= kModulusSwitch) return modulus_log_derivs(lambda).first;
  const AiryValues a = airy(-lambda);
  return 2.0 * (a.ai * a.ai_prime + a.bi * a.bi_prime) / (a.ai * a.ai + a.bi * a.bi);
}

double airy_log_second_derivative(double lambda) {
  check_lambda(lambda, true);
  if (lambda >= kModulusSwitch) return modulus_log_derivs(lambda).second;
  const AiryValues a = airy(-lambda);
  const double A = a.ai * a.ai + a.bi * a.bi;
  const double L = 2.0 * (a.ai * a.ai_prime + a.bi * a.bi_prime) / A;
  return (2.0 * (a.ai_prime * a.ai_prime + a.bi_prime * a.bi_prime) - 2.0 * lambda * A) / A - L * L;
}

double thermo_lambda(const ModelParams& p) {
  p.validate();
  const double r = p.omega_as / p.eps_third();
  return r * r;
}

GroundStateEnergy ground_state_energy(double lambda, double w) {
  check_lambda(lambda, false);
  if (!(w > 0.0)) fail(Errc::domain, "omega_as must be positive");
  const double L = airy_log_derivative(lambda);
  const double M = airy_log_second_derivative(lambda);
  GroundStateEnergy g;
  g.energy = 0.5 * w * (1.0 - (L + M) / lambda);
  g.shift = g.energy - 0.5 * w;
  g.decay_time = 2.0 * std::sqrt(lambda) * L / w;
  g.width = 1.0 / g.decay_time;
  g.divergent_flag = true;

  IntegrationOptions opts;
  opts.tol = 1e-12;
  const double k = 1.0 / (1.0 + lambda);
  const double z_half = std::pow(k, 1.5) * integrate(
                                              [&](double u) {
                                                const double z = u * k;
                                                return std::sqrt(u) * std::exp(-z * z * z / 12.0 - lambda * z);
                                              },
                                              0.0, kInf, opts)
                                              .value;
  g.width_quadrature = w / (2.0 * std::sqrt(lambda)) * flux_constant_integral(lambda, 1.0) * z_half;
  return g;
}

GroundStateEnergy ground_state_energy(const ModelParams& p) { return ground_state_energy(thermo_lambda(p), p.omega_as); }

double internal_energy(double lambda, double eps) {
  check_lambda(lambda, true);
  check_epsilon(eps);
  return (1.0 + 2.0 * lambda * airy_log_derivative(lambda)) / (3.0 * eps);
}

double internal_energy(const ModelParams& p) { return internal_energy(thermo_lambda(p), p.epsilon); }

double free_energy(double eps) {
  check_epsilon(eps);
  return kLn2 / (3.0 * eps);
}

double free_energy(const ModelParams& p) {
  p.validate();
  return free_energy(p.epsilon);
}

double entropy(double lambda) {
  check_lambda(lambda, true);
  return 2.0 * lambda / 3.0 * airy_log_derivative(lambda) + (1.0 - kLn2) / 3.0;
}

double entropy(const ModelParams& p) { return entropy(thermo_lambda(p)); }

double internal_energy_from_density(const ModelParams& p) {
  p.validate();
  auto mass = [&](double eps) {
    const double e3 = std::cbrt(eps);
    const double lg = (p.omega_as / e3) * (p.omega_as / e3);
    // Q(theta) = J q(theta / e3) / e3, so its theta-mass is J * qs_mass / e3.
    return flux_constant_integral(lg, eps) * qs_mass(lg) / e3;
  };
  const double h = 1e-4 * p.epsilon;
  return -(mass(p.epsilon + h) - mass(p.epsilon - h)) / (2.0 * h);
}

ThermoReport thermo_report(const ModelParams& p) {
  p.validate();
  ThermoReport r;
  r.lambda = thermo_lambda(p);
  r.omega_as = p.omega_as;
  r.epsilon = p.epsilon;
  const GroundStateEnergy g = ground_state_energy(r.lambda, p.omega_as);
  r.energy_shift = g.energy;
  r.shift_only = g.shift;
  r.level_width = g.width;
  r.decay_time = g.decay_time;
  r.divergent_vacuum_term_flag = g.divergent_flag;
  r.width_quadrature = g.width_quadrature;
  r.internal_energy = internal_energy(r.lambda, p.epsilon);
  r.free_energy = free_energy(p.epsilon);
  r.entropy_over_k = entropy(r.lambda);
  return r;
}

cplx density_matrix_value(double x, double xp, double theta, double theta_p, double I, double Ip, double w) {
  const cplx expo(-0.5 * w * (x * x + xp * xp) - 0.5 * I - 0.5 * Ip, -(theta * x * x - theta_p * xp * xp));
  return std::sqrt(w / kPi) * std::exp(expo);
}

cplx stochastic_density_matrix(double x, double t, double xp, double tp, const ThetaPath& path,
                               const BarrierProfile& profile, double w) {
  for (double tt : {t, tp}) {
    if (std::fabs(omega0(profile, tt) - w) > 1e-8 * w) {
      std::ostringstream msg;
      msg << "density matrix at t = " << tt << " is outside the asymptotic region";
      fail(Errc::timing, msg.str());
    }
  }
  return density_matrix_value(x, xp, theta_at(path, t, w), theta_at(path, tp, w), int_theta_at(path, t),
                              int_theta_at(path, tp), w);
}

namespace {

// Gauss-Hermite trace of a kernel diagonal g(x) * rho(x, x) with rho(x, x) = c e^(-w x^2).
template <class G>
cplx trace_with(double theta, double I, double w, G g) {
  static const GaussRule rule = gauss_hermite(40);
  const double s = 1.0 / std::sqrt(w);
  cplx sum = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double x = s * rule.nodes[k];
    const double y = rule.nodes[k];
    sum += rule.weights[k] * std::exp(y * y) * g(x) * density_matrix_value(x, x, theta, theta, I, I, w);
  }
  return sum * s;
}

}  // namespace

cplx density_matrix_trace(double theta, double I, double w) {
  return trace_with(theta, I, w, [](double) { return cplx(1.0); });
}

McEstimate vacuum_expectation(VacuumOperator op, const std::vector<ThetaPath>& ensemble, const BarrierProfile& profile,
                              double t, double w) {
  if (ensemble.empty()) fail(Errc::sampling, "vacuum_expectation: empty ensemble");
  if (std::fabs(omega0(profile, t) - w) > 1e-8 * w) fail(Errc::timing, "vacuum_expectation: non-asymptotic time");
  const std::size_t n = ensemble.size();
  std::vector<cplx> num(n), den(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double th = theta_at(ensemble[k], t, w);
    const double I = int_theta_at(ensemble[k], t);
    den[k] = density_matrix_trace(th, I, w);
    switch (op) {
      case VacuumOperator::identity:
        num[k] = den[k];
        break;
      case VacuumOperator::parity: {
        // kernel rho(-x, x): the x-dependence is even, so only the sign of x flips
        static const GaussRule rule = gauss_hermite(40);
        const double s = 1.0 / std::sqrt(w);
        cplx sum = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
          const double x = s * rule.nodes[j], y = rule.nodes[j];
          sum += rule.weights[j] * std::exp(y * y) * density_matrix_value(-x, x, th, th, I, I, w);
        }
        num[k] = sum * s;
        break;
      }
      case VacuumOperator::hamiltonian: {
        // (-1/2 d^2/dx^2 + w^2 x^2 / 2) acting on the unprimed argument, a = w/2 + i theta
        const cplx a(0.5 * w, th);
        num[k] = trace_with(th, I, w, [&](double x) {
          return -0.5 * (4.0 * a * a * x * x - 2.0 * a) + 0.5 * w * w * x * x;
        });
        break;
      }
    }
  }
  cplx sn = 0.0, sd = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sn += num[k];
    sd += den[k];
  }
  McEstimate e;
  e.samples = n;
  if (std::abs(sd) == 0.0) fail(Errc::sampling, "vacuum_expectation: vanishing trace");
  e.mean = sn / sd;
  if (n > 1) {
    // ratio estimator: residuals num - R den
    const cplx mean_den = sd / double(n);
    double vr = 0.0, vi = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const cplx r = (num[k] - e.mean * den[k]) / mean_den;
      vr += r.real() * r.real();
      vi += r.imag() * r.imag();
    }
    const double nn = double(n);
    e.se_re = std::sqrt(vr / (nn - 1.0) / nn);
    e.se_im = std::sqrt(vi / (nn - 1.0) / nn);
  }
  const double se = std::hypot(e.se_re, e.se_im);
  e.precision_warning = std::abs(e.mean) > 0.0 ? se / std::abs(e.mean) > 0.2 : se > 0.0;
  return e;
}

}  // namespace qrho
