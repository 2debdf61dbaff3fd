#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qrho/langevin.hpp"
#include "qrho/model.hpp"

namespace qrho {

using cplx = std::complex<double>;

inline constexpr unsigned kMaxStateIndex = 32;

/// Complex classical solution of xi'' = -Omega^2(t) xi with xi -> exp(i omega_in t) in the past.
struct ComplexTrajectory {
  double omega_in = 1.0;
  double t0 = 0.0;
  std::vector<double> times;
  std::vector<cplx> xi;
  std::vector<cplx> xi_dot;
  std::vector<double> sigma;  // |xi|
  std::vector<double> tau;    // integral of dt / sigma^2 from t0
  std::vector<double> phase;  // continuous arg xi

  std::size_t size() const { return times.size(); }
  double wronskian(std::size_t i) const { return std::imag(std::conj(xi[i]) * xi_dot[i]); }

  struct State {
    cplx xi, xi_dot;
    double sigma, tau, phase;
  };
  /// Cubic Hermite interpolation inside the sampled range; throws timing outside it.
  State at(double t) const;
};

/// Forest-Ruth integration on a grid that contains the transition time of a step
/// profile, so the piecewise-constant frequency is handled without loss of order.
/// Throws resolution when Omega * dt > 0.1 and precondition when omega0(t0) has
/// not reached omega_in to 1e-10.
ComplexTrajectory solve_xi(const BarrierProfile& profile, double t0, double t1, double dt);

/// Same equation with the realised squared frequency Omega0^2 + F(t), where the
/// noise integral over each stored interval is minus path.noise (the increment
/// the Langevin step added to theta). Velocity Verlet on the path's time grid.
ComplexTrajectory solve_xi(const BarrierProfile& profile, const ThetaPath& path);

/// Oscillator eigenstate with phase exp(-i (n + 1/2) omega_in t). n <= 32.
cplx psi_in(unsigned n, double x, double t, double omega_in);

/// Exact stochastic basis functional built from |xi|, tau and xi_dot / xi.
/// Throws evaluation_point when |xi| < 1e-12.
cplx psi_stc(unsigned n, double x, double t, const ComplexTrajectory& traj);

/// Spatial extent 6 sigma sqrt((2n + 1) / omega_in) used as the grid edge.
double psi_edge(unsigned n, double t, const ComplexTrajectory& traj);

/// Overlap matrix <psi_m | psi_n> for m, n <= nmax by Gauss-Hermite quadrature
/// scaled to the instantaneous width.
std::vector<std::vector<cplx>> overlap_matrix(const ComplexTrajectory& traj, double t, unsigned nmax);

struct McEstimate {
  cplx mean{0.0, 0.0};
  double se_re = 0.0;
  double se_im = 0.0;
  std::size_t samples = 0;
  bool precision_warning = false;  // relative standard error above 0.2

  cplx standard_error() const { return {se_re, se_im}; }
};

/// Mean and standard error of complex samples; sets the precision warning.
McEstimate summarize(const std::vector<cplx>& samples);

/// Ensemble average of psi_stc over trajectories rebuilt from the paths' noise.
/// Needs at least 1000 paths.
McEstimate psi_br_estimate(unsigned n, double x, double t, const std::vector<ThetaPath>& ensemble,
                           const BarrierProfile& profile, unsigned workers = 0);

}  // namespace qrho
