#include "qrho/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qrho/errors.hpp"
#include "qrho/numerics.hpp"

namespace qrho {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxTailMass = 1e-4;

double airy_envelope(double x) {
  const AiryValues a = airy(x);
  return a.ai * a.ai + a.bi * a.bi;
}

void check_lambda_gamma(double lg) {
  if (!(lg >= 0.0) || !std::isfinite(lg)) {
    std::ostringstream msg;
    msg << "lambda*gamma must be finite and non-negative (got " << lg << ")";
    fail(Errc::domain, msg.str());
  }
}

// int_T^inf dx / (x^2 + c)
double lorentz_tail(double T, double c) {
  if (c <= 0.0) return 1.0 / T;
  const double r = std::sqrt(c);
  return (0.5 * kPi - std::atan(T / r)) / r;
}

}  // namespace

double qs_unnormalized(double tb, double lg) {
  check_lambda_gamma(lg);
  if (!std::isfinite(tb)) fail(Errc::domain, "qs_unnormalized: theta_bar must be finite");
  // s = h u keeps the linear decay rate of order one in u.
  const double h = 1.0 / (1.0 + tb * tb + lg);
  const double c1 = tb * h * h, c0 = (tb * tb + lg) * h, c3 = h * h * h / 3.0;
  auto f = [=](double u) { return std::exp(u * (-c0 + u * (c1 - c3 * u))); };
  IntegrationOptions opts;
  opts.tol = 1e-13;
  return h * integrate(f, 0.0, kInf, opts).value;
}

double qs_mass(double lg) {
  check_lambda_gamma(lg);
  IntegrationOptions opts;
  opts.tol = 1e-12;
  // tb = a v puts the bulk of the mass at |v| of order one
  const double a = std::max(1.0, std::sqrt(lg));
  return a * integrate([lg, a](double v) { return qs_unnormalized(a * v, lg); }, -kInf, kInf, opts).value;
}

double flux_constant_integral(double lg, double epsilon) {
  check_lambda_gamma(lg);
  if (!(epsilon > 0.0)) fail(Errc::domain, "flux_constant_integral: epsilon must be positive");
  IntegrationOptions opts;
  opts.tol = 1e-13;
  opts.lower = EndpointBehaviour::inverse_sqrt;
  // Rescale z = w / (1 + lg) so the exponential decay is order one.
  const double k = 1.0 / (1.0 + lg);
  auto f = [=](double w) {
    const double z = w * k;
    return std::exp(-z * z * z / 12.0 - lg * z) / std::sqrt(w);
  };
  const double integral = std::sqrt(k) * integrate(f, 0.0, kInf, opts).value;
  return std::cbrt(epsilon) / (std::sqrt(kPi) * integral);
}

double flux_constant_airy(double lg, double epsilon) {
  check_lambda_gamma(lg);
  if (!(epsilon > 0.0)) fail(Errc::domain, "flux_constant_airy: epsilon must be positive");
  return std::cbrt(epsilon) / (kPi * airy_envelope(-lg));
}

double analytic_tail_mass(double T, double lg, double flux) { return 2.0 * flux * lorentz_tail(T, lg); }

double StationaryDistribution::density_at(double tb) const { return qs_unnormalized(tb, lambda_gamma) / mass; }

double StationaryDistribution::density_theta(double theta) const {
  const double e3 = std::cbrt(epsilon);
  return density_at(theta / e3) / e3;
}

double StationaryDistribution::mass_between(double a, double b) const {
  IntegrationOptions opts;
  opts.tol = 1e-11;
  const double lg = lambda_gamma;
  return integrate([lg](double t) { return qs_unnormalized(t, lg); }, a, b, opts).value / mass;
}

double StationaryDistribution::grid_mass() const {
  // Trapezoid in u, where d(tb) = a cosh(u) du.
  double sum = 0.0;
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double u = std::asinh(grid[i] / scale);
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    sum += w * density[i] * scale * std::cosh(u);
  }
  sum *= du;
  // Two-term tail law J/g + 2 J tb / g^3: the odd terms cancel between the two sides,
  // so only asymmetric grid ends leave a remainder.
  const double J = scaled_flux();
  const double lo = -grid.front(), hi = grid.back();
  const double g_lo = lo * lo + lambda_gamma, g_hi = hi * hi + lambda_gamma;
  sum += J * (lorentz_tail(lo, lambda_gamma) + lorentz_tail(hi, lambda_gamma));
  sum += J * (0.5 / (g_hi * g_hi) - 0.5 / (g_lo * g_lo));
  return sum;
}

StationaryDistribution build_stationary(double lg, double epsilon, const StationaryGridSpec& spec) {
  check_lambda_gamma(lg);
  if (!(epsilon > 0.0)) fail(Errc::configuration, "epsilon must be positive");
  if (!(spec.du > 0.0) || spec.du > 0.1) fail(Errc::configuration, "grid du must lie in (0, 0.1]");

  StationaryDistribution d;
  d.lambda_gamma = lg;
  d.epsilon = epsilon;
  d.mass = qs_mass(lg);
  d.flux = std::cbrt(epsilon) / d.mass;
  d.scale = std::max(1.0, std::sqrt(lg));

  const double J = d.scaled_flux();
  double T = spec.theta_bar_max;
  if (T > 0.0) {
    const double tail = analytic_tail_mass(T, lg, J);
    if (tail > kMaxTailMass) {
      std::ostringstream msg;
      msg << "stationary grid too narrow: tail mass " << tail << " beyond theta_bar_max = " << T
          << " exceeds 1e-4";
      fail(Errc::tail_mass, msg.str());
    }
  } else {
    // smallest T with tail mass at the target, found by bisection on the monotone tail law
    double lo = 1.0, hi = 1.0;
    while (analytic_tail_mass(hi, lg, J) > spec.tail_mass_target) hi *= 2.0;
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (lo + hi);
      (analytic_tail_mass(mid, lg, J) > spec.tail_mass_target ? lo : hi) = mid;
    }
    T = std::max(hi, 10.0 + 2.0 * std::sqrt(lg));
  }
  d.tail_mass = analytic_tail_mass(T, lg, J);

  const double umax = std::asinh(T / d.scale);
  const std::size_t n = std::max<std::size_t>(65, 2 * static_cast<std::size_t>(std::ceil(umax / spec.du)) + 1);
  d.du = 2.0 * umax / double(n - 1);
  d.grid.resize(n);
  d.density.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = -umax + d.du * double(i);
    d.grid[i] = d.scale * std::sinh(u);
  }
  d.grid[(n - 1) / 2] = 0.0;
  for (std::size_t i = 0; i < n; ++i) d.density[i] = qs_unnormalized(d.grid[i], lg) / d.mass;
  return d;
}

StationaryDistribution build_stationary(const ModelParams& p, const StationaryGridSpec& spec) {
  p.validate();
  return build_stationary(p.lambda() * p.gamma(), p.epsilon, spec);
}

double lorentzian_deviation(const StationaryDistribution& d, double omega_out) {
  double worst = 0.0;
  for (int i = 0; i <= 600; ++i) {
    const double theta = omega_out * (-3.0 + 0.01 * i);
    const double lor = omega_out / kPi / (theta * theta + omega_out * omega_out);
    worst = std::max(worst, std::fabs(d.density_theta(theta) / lor - 1.0));
  }
  return worst;
}

double physical_peak_height(const StationaryDistribution& d) {
  const auto it = std::max_element(d.density.begin(), d.density.end());
  return *it / std::cbrt(d.epsilon);
}

}  // namespace qrho
