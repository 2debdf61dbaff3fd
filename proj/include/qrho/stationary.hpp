#pragma once

#include <vector>

#include "qrho/model.hpp"

namespace qrho {

/// Unnormalised stationary solution in scaled units theta_bar = theta / eps^(1/3):
///   q(tb) = int_0^inf exp(-s^3/3 + tb s^2 - (tb^2 + lg) s) ds.
/// It solves (tb^2 + lg) q + q' = 1 and behaves like 1/(tb^2 + lg) in both tails.
double qs_unnormalized(double theta_bar, double lambda_gamma);

/// Total mass of qs_unnormalized over the real line by adaptive quadrature.
double qs_mass(double lambda_gamma);

/// Flux from the inverse-square-root integral representation:
///   1/J = sqrt(pi) eps^(-1/3) int_0^inf z^(-1/2) exp(-z^3/12 - lg z) dz.
/// This is the flux of the unit-mass density.
double flux_constant_integral(double lambda_gamma, double epsilon);

/// Flux from the Airy representation: 1/J = pi eps^(-1/3) (Ai^2 + Bi^2)(-lg).
/// Differs from flux_constant_integral by exactly a factor pi.
double flux_constant_airy(double lambda_gamma, double epsilon);

/// Mass of both tails |tb| > T of the leading 1/(tb^2 + lg) law, times `flux`.
double analytic_tail_mass(double T, double lambda_gamma, double flux);

struct StationaryGridSpec {
  double theta_bar_max = 0.0;     // 0 selects the smallest T with tail mass below tail_mass_target
  double du = 2.5e-3;             // spacing in the sinh-mapped coordinate
  double tail_mass_target = 1e-5;
};

/// Unit-mass stationary density on a sinh-mapped grid tb = a sinh(u), a = max(1, sqrt(lg)).
class StationaryDistribution {
 public:
  double lambda_gamma = 0.0;
  double epsilon = 1.0;
  std::vector<double> grid;     // theta_bar, increasing
  std::vector<double> density;  // normalised density in theta_bar
  double flux = 0.0;            // physical flux J0f (theta units)
  double mass = 0.0;            // mass of qs_unnormalized
  double scale = 1.0;           // sinh map parameter a
  double du = 0.0;
  double tail_mass = 0.0;       // analytic mass outside the grid

  /// Normalised density in theta_bar at any point (direct evaluation).
  double density_at(double theta_bar) const;

  /// Density in physical theta: Q(theta) = density_at(theta / eps^(1/3)) / eps^(1/3).
  double density_theta(double theta) const;

  /// Mass of the normalised density over [a, b] in theta_bar (may be infinite).
  double mass_between(double a, double b) const;

  /// Trapezoidal mass on the grid plus the analytic tail corrections.
  double grid_mass() const;

  /// Scaled flux J = (tb^2 + lg) Q + dQ/dtb, which is constant for the exact density.
  double scaled_flux() const { return 1.0 / mass; }
};

/// Builds the unit-mass stationary density for lambda*gamma of `params`.
/// Throws tail_mass if an explicit theta_bar_max leaves more than 1e-4 outside the grid.
StationaryDistribution build_stationary(const ModelParams& params, const StationaryGridSpec& spec = {});
StationaryDistribution build_stationary(double lambda_gamma, double epsilon, const StationaryGridSpec& spec = {});

/// Sup-relative deviation of the physical density from the small-noise
/// Lorentzian (omega_out/pi)/(theta^2 + omega_out^2) over |theta| <= 3 omega_out.
double lorentzian_deviation(const StationaryDistribution& dist, double omega_out);

/// Peak value of the physical density Q(theta) at theta_bar = argmax. The
/// large-noise limit flattens it as eps^(-1/3); reported as a diagnostic only.
double physical_peak_height(const StationaryDistribution& dist);

}  // namespace qrho
