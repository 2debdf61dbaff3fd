#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "qrho/model.hpp"

namespace qrho {

struct Grid1D {
  double theta_min = -20.0;
  double theta_max = 20.0;
  std::size_t n = 2048;

  double spacing() const { return (theta_max - theta_min) / double(n - 1); }
  double x(std::size_t i) const { return theta_min + spacing() * double(i); }
  void validate() const;  // n >= 64, theta_max > theta_min
};

struct DensityOnGrid {
  Grid1D grid;
  std::vector<double> values;
  double time = 0.0;

  /// Cell-sum mass h * sum(values).
  double mass() const;
};

enum class FpBoundary {
  reinjection,  // upwind outflow at theta_min re-enters the last cell with the same flux
  zero_flux,
};

enum class TimeScheme { crank_nicolson, implicit_euler, explicit_euler };

struct FpOptions {
  FpBoundary boundary = FpBoundary::reinjection;
  TimeScheme scheme = TimeScheme::crank_nicolson;
  bool drift = true;               // false drops the -(theta^2 + omega^2) advection
  int rannacher_steps = 2;         // leading CN steps done as implicit Euler half steps
  double snapshot_interval = 0.0;  // 0: no snapshots
  /// Optional source s(theta, t) added to the right-hand side.
  std::function<double(double, double)> source;
};

/// Finite-volume solve of dQ/dt = -dJ/dtheta, J = -(theta^2 + omega0^2) Q - eps dQ/dtheta,
/// with Scharfetter-Gummel fluxes (pure upwind when eps = 0).
/// Explicit Euler checks dt <= min(h^2 / (2 eps), h / max|v|) and throws a
/// configuration error when violated.
DensityOnGrid evolve_fp(const DensityOnGrid& q0, const BarrierProfile& profile, double epsilon, double dt,
                        double t_end, const FpOptions& opts = {}, std::vector<DensityOnGrid>* snapshots = nullptr);

/// Narrow Gaussian of standard deviation `width_cells` grid spacings with the given cell mass.
DensityOnGrid gaussian_spike(const Grid1D& grid, double center, double mass, double width_cells = 3.0);

/// Null vector of the reinjection operator for constant omega, scaled to `mass`.
std::vector<double> discrete_stationary(const Grid1D& grid, double omega, double epsilon, double mass);

/// Slowest decay rate from a log-linear fit of ||Q(t) - reference||_inf over the snapshots.
/// Throws fit if the residual norms are not strictly decreasing.
double relaxation_rate(const std::vector<DensityOnGrid>& history, const std::vector<double>& reference);

struct FeynmanKacOptions {
  bool potential = true;        // false drops the -theta u term
  bool drift_variant = false;   // add the Fokker-Planck drift and eps diffusion
  double epsilon = 1.0;         // drift variant only
  double omega = 1.0;           // drift variant only
  double snapshot_interval = 0.1;
  double width_cells = 3.0;
};

struct B0Series {
  std::vector<double> t;
  std::vector<double> b0;
  double limit_estimate = 0.0;  // last value
  bool stabilised = false;      // relative change over the last 10% of time below 1e-3
  std::string outcome;          // "converged" or "diverged"
};

/// du/dt = u''/2 - theta u (verbatim form, Dirichlet ends) from a unit-mass
/// narrow Gaussian at theta = 0; B0(t) = integral of u. Throws domain_size when the
/// boundary values exceed 1e-12 of the maximum.
B0Series feynman_kac_b0(const Grid1D& grid, double dt, double t_end, const FeynmanKacOptions& opts = {});

/// Closed form of the verbatim problem for a Gaussian start of variance s2:
/// B0(t) = exp(s2 t^2 / 2 + t^3 / 6).
double feynman_kac_exact(double t, double s2);

}  // namespace qrho
