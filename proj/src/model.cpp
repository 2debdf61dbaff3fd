#include "qrho/model.hpp"

#include <cmath>
#include <sstream>

#include "qrho/errors.hpp"

namespace qrho {
namespace {

void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << field << " must be positive and finite (got " << v << ")";
    fail(Errc::configuration, msg.str());
  }
}

}  // namespace

double ModelParams::eps_third() const { return std::cbrt(epsilon); }

double ModelParams::lambda() const {
  const double r = omega_in / eps_third();
  return r * r;
}

double ModelParams::gamma() const {
  const double r = omega_out / omega_in;
  return r * r;
}

double ModelParams::rho() const { return rho_from_frequencies(omega_in, omega_out); }

void ModelParams::validate() const {
  require_positive(epsilon, "epsilon");
  require_positive(omega_in, "omega_in");
  require_positive(omega_out, "omega_out");
  require_positive(omega_as, "omega_as");
}

BarrierProfile BarrierProfile::constant(double omega) {
  BarrierProfile p;
  p.kind = ProfileKind::constant;
  p.omega_in = p.omega_out = omega;
  return p;
}

BarrierProfile BarrierProfile::step(double omega_in, double omega_out, double t_transition) {
  BarrierProfile p;
  p.kind = ProfileKind::step;
  p.omega_in = omega_in;
  p.omega_out = omega_out;
  p.transition_time = t_transition;
  return p;
}

BarrierProfile BarrierProfile::smooth_step(double omega_in, double omega_out, double t_transition,
                                           double width) {
  BarrierProfile p = step(omega_in, omega_out, t_transition);
  p.kind = ProfileKind::smooth_step;
  p.width = width;
  return p;
}

void BarrierProfile::validate() const {
  require_positive(omega_in, "profile.omega_in");
  if (kind != ProfileKind::constant) require_positive(omega_out, "profile.omega_out");
  if (!std::isfinite(transition_time)) fail(Errc::configuration, "profile.transition_time must be finite");
  if (kind == ProfileKind::smooth_step && !(width > 0.0))
    fail(Errc::configuration, "profile.width must be positive for a smooth step (degenerate profile)");
}

double gamma_from_rho(double rho) {
  if (!(rho >= 0.0) || !(rho < 1.0)) {
    std::ostringstream msg;
    msg << "gamma_from_rho: rho = " << rho << " outside [0, 1)";
    fail(Errc::domain, msg.str());
  }
  const double s = std::sqrt(rho);
  const double g = (1.0 + s) / (1.0 - s);
  return g * g;
}

double rho_from_frequencies(double omega_in, double omega_out) {
  if (!(omega_in > 0.0) || !(omega_out > 0.0))
    fail(Errc::domain, "rho_from_frequencies: frequencies must be positive");
  const double r = (omega_out - omega_in) / (omega_out + omega_in);
  return r * r;
}

double omega0(const BarrierProfile& p, double t) {
  switch (p.kind) {
    case ProfileKind::constant:
      return p.omega_in;
    case ProfileKind::step:
      return t < p.transition_time ? p.omega_in : p.omega_out;
    case ProfileKind::smooth_step:
      if (!(p.width > 0.0)) fail(Errc::configuration, "smooth step with zero width is degenerate");
      return p.omega_in +
             (p.omega_out - p.omega_in) * 0.5 * (1.0 + std::tanh((t - p.transition_time) / p.width));
  }
  return p.omega_in;
}

}  // namespace qrho
