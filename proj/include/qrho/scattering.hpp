#pragma once

#include <complex>
#include <vector>

#include "qrho/langevin.hpp"
#include "qrho/model.hpp"
#include "qrho/wavefunction.hpp"

namespace qrho {

struct SElement {
  unsigned m = 0;
  unsigned n = 0;
  cplx value{0.0, 0.0};
};

/// The four lowest even elements {00, 11, 02, 20}.
struct SElementSet {
  SElement s00{0, 0}, s11{1, 1}, s02{0, 2}, s20{2, 0};
  /// Element (m, n); zero for odd m + n and for elements outside the set.
  cplx get(unsigned m, unsigned n) const;
};

/// Overlap generating functional of the outgoing coherent family (in the
/// conjugate variable w = conj(z1)) with the stochastic packet (z2):
///   I = (w_in w_out)^(1/4) (2 / (A xi))^(1/2) exp(B^2 / (2A) - C / 2),
///   A = w_out - i xi_dot / xi,
///   B = sqrt(2 w_in) z2 / xi + sqrt(2 w_out) e^(i w_out t) w,
///   C = e^(-2ir) z2^2 + e^(2 i w_out t) w^2 - i w_out t.
/// (A xi)^(1/2) follows the continuous phase of xi. Throws singular_configuration when A = 0.
cplx generating_I(cplx w, cplx z2, const ComplexTrajectory& traj, double t, double omega_out);

/// S_mn = sqrt(m! n!) [w^m z2^n] I, by a 16 x 16 discrete Cauchy sum on radius 0.3.
cplx generating_coefficient(unsigned m, unsigned n, const ComplexTrajectory& traj, double t, double omega_out);

/// Closed-form elements from xi at t_final (no phases dropped):
///   S00 = I(0, 0), S11 = S00^3,
///   S20 = S00 e^(2 i w_out t) (2 w_out / A - 1) / sqrt 2,
///   S02 = S00 e^(-2ir) (2 w_in / (A |xi|^2) - 1) / sqrt 2.
/// Throws timing unless omega0(t_final) equals omega_out to 1e-8.
SElementSet s_elements_path(const ComplexTrajectory& traj, const BarrierProfile& profile, double t_final);

/// Theta-form elements of one Langevin path at t_final, with A = w_out + i|theta|:
///   S00 = (1 - rho)^(1/4) (1 + i|theta| / w_out)^(-1/2), S11 = S00^3,
///   S20 = S00 e^(2 i w_out t) (2 w_out / A - 1) / sqrt 2,
///   S02 = S00 e^(-2 i w_in K) (2 w_in e^(-2 int theta) / A - 1) / sqrt 2, K = int exp(-2 int theta).
SElementSet s_elements_path(const ThetaPath& path, const BarrierProfile& profile, double t_final);

/// Unnormalised theta-form vacuum element with the literal prefactor
/// sqrt 2 (w_in / w_out)^(1/4) (1 - i theta / w_out)^(-1/2) exp(-int theta / 2). Diagnostic.
cplx s00_theta_literal(const ThetaPath& path, const BarrierProfile& profile, double t_final);

/// theta at any time of a path: linear between samples, deterministic Riccati sweep
/// inside an excised excursion (|theta| beyond the cut there).
double theta_at(const ThetaPath& path, double t, double omega);

/// int_theta at time t of a path (linear between samples, unchanged across excursions).
double int_theta_at(const ThetaPath& path, double t);
double int_exp_at(const ThetaPath& path, double t);

struct TransitionResult {
  double lambda = 0.0;
  double rho = 0.0;
  double i1 = 0.0;
  double i2 = 0.0;
  cplx s00{0.0, 0.0};
  double probability = 0.0;
};

/// Averaged vacuum amplitude over the unit-mass stationary density with
/// d = sqrt(1 + tb^2 / (lambda gamma)), gamma from the sudden-step relation.
TransitionResult s00_br(double lambda, double rho);

/// sqrt(1 - rho) (I1^2 + I2^2); 0 at rho = 1.
double transition_probability(double lambda, double rho);

/// Path average of theta-form elements at t_final. Needs >= 1000 paths.
McEstimate s_mn_br_mc(unsigned m, unsigned n, const std::vector<ThetaPath>& ensemble,
                      const BarrierProfile& profile, double t_final);

}  // namespace qrho
