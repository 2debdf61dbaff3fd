#pragma once

namespace qrho {

struct ModelParams {
  double epsilon = 1.0;    // noise strength
  double omega_in = 1.0;
  double omega_out = 1.0;
  double omega_as = 1.0;   // asymptotic frequency used by the thermodynamics

  double lambda() const;   // (omega_in / epsilon^(1/3))^2
  double gamma() const;    // (omega_out / omega_in)^2
  double rho() const;      // reflection coefficient of the sudden step
  double eps_third() const;  // epsilon^(1/3), the theta scale

  /// Throws configuration errors naming the offending field.
  void validate() const;
};

enum class ProfileKind { constant, step, smooth_step };

struct BarrierProfile {
  ProfileKind kind = ProfileKind::constant;
  double omega_in = 1.0;
  double omega_out = 1.0;
  double transition_time = 0.0;
  double width = 0.0;  // smooth_step only

  static BarrierProfile constant(double omega);
  static BarrierProfile step(double omega_in, double omega_out, double t_transition = 0.0);
  static BarrierProfile smooth_step(double omega_in, double omega_out, double t_transition, double width);

  void validate() const;
};

/// gamma = ((1 + sqrt rho) / (1 - sqrt rho))^2 for 0 <= rho < 1.
double gamma_from_rho(double rho);

/// rho = ((omega_out - omega_in) / (omega_out + omega_in))^2.
double rho_from_frequencies(double omega_in, double omega_out);

double omega0(const BarrierProfile& profile, double t);

/// Squared frequency, the quantity the dynamics actually uses.
inline double omega0_squared(const BarrierProfile& p, double t) {
  const double w = omega0(p, t);
  return w * w;
}

}  // namespace qrho
