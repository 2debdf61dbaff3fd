#pragma once

#include <complex>
#include <vector>

#include "qrho/langevin.hpp"
#include "qrho/model.hpp"
#include "qrho/wavefunction.hpp"

namespace qrho {

/// L(lambda) = d/da ln A(-lambda + a) at a = 0 with A = Ai^2 + Bi^2.
double airy_log_derivative(double lambda);

/// M(lambda) = d^2/da^2 ln A(-lambda + a) at a = 0, using y'' = x y.
double airy_log_second_derivative(double lambda);

/// The dimensionless group of the asymptotic space, (omega_as / eps^(1/3))^2.
double thermo_lambda(const ModelParams& params);

struct GroundStateEnergy {
  double energy = 0.0;        // (w/2)(1 - (L + M)/lambda)
  double shift = 0.0;         // energy - w/2
  double width = 0.0;         // 1 / decay_time
  double decay_time = 0.0;    // 2 sqrt(lambda) L / w
  bool divergent_flag = true; // the vacuum term of the energy is never finite
  /// Imaginary term evaluated by quadrature, (w / (2 sqrt lambda)) J int z^(1/2) e^(-z^3/12 - lambda z) dz,
  /// with J the unit-mass flux at eps = 1. Reported next to `width`, not asserted.
  double width_quadrature = 0.0;
};

GroundStateEnergy ground_state_energy(double lambda, double omega_as);
GroundStateEnergy ground_state_energy(const ModelParams& params);

/// U = (1 + 2 lambda L) / (3 eps).
double internal_energy(double lambda, double epsilon);
double internal_energy(const ModelParams& params);

/// F = ln 2 / (3 eps).
double free_energy(double epsilon);
double free_energy(const ModelParams& params);

/// S / k = (2 lambda / 3) L + (1 - ln 2) / 3.
double entropy(double lambda);
double entropy(const ModelParams& params);

/// -d/d eps of the mass of the stationary density normalised by the
/// inverse-square-root flux formula, at fixed omega_as (central difference).
/// That normalisation is exact, so the result is zero up to round-off.
double internal_energy_from_density(const ModelParams& params);

struct ThermoReport {
  double lambda = 0.0;
  double omega_as = 0.0;
  double epsilon = 0.0;
  double energy_shift = 0.0;  // shifted ground-state energy
  double shift_only = 0.0;
  double level_width = 0.0;
  double decay_time = 0.0;
  double internal_energy = 0.0;
  double free_energy = 0.0;
  double entropy_over_k = 0.0;
  bool divergent_vacuum_term_flag = true;
  double width_quadrature = 0.0;
};

ThermoReport thermo_report(const ModelParams& params);

/// Per-path vacuum density matrix in the asymptotic space:
///   (w/pi)^(1/2) exp(-w (x^2 + x'^2)/2 - I/2 - I'/2 - i (theta x^2 - theta' x'^2)).
cplx density_matrix_value(double x, double xp, double theta, double theta_p, double int_theta, double int_theta_p,
                          double omega_as);

/// Same, reading theta and its integral from a path at t and t'.
/// Throws timing unless omega0 equals omega_as at both times.
cplx stochastic_density_matrix(double x, double t, double xp, double tp, const ThetaPath& path,
                               const BarrierProfile& profile, double omega_as);

/// Trace over x of the density matrix at theta, integral I (Gauss-Hermite).
cplx density_matrix_trace(double theta, double int_theta, double omega_as);

enum class VacuumOperator { identity, parity, hamiltonian };

/// Tr_x <A rho> / Tr_x <rho> over the paths at time t; standard error from the ratio
/// estimator. Precision warning when the relative standard error exceeds 0.2.
McEstimate vacuum_expectation(VacuumOperator op, const std::vector<ThetaPath>& ensemble,
                              const BarrierProfile& profile, double t, double omega_as);

}  // namespace qrho
