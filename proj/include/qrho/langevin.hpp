#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qrho/model.hpp"
#include "qrho/numerics.hpp"

namespace qrho {

struct SdeConfig {
  double dt = 1e-4;
  double theta_cut = 20.0;
  std::size_t n_paths = 1;
  RandomStream stream;  // seed source; path k uses stream.split(k)
  BarrierProfile profile;
  double epsilon = 1.0;
  std::size_t store_stride = 1;  // keep every k-th step in ThetaPath
  unsigned workers = 0;          // 0: hardware concurrency

  /// Default cut max(20 eps^(1/3), 10 omega_out) and the largest dt with dt*cut^2 <= 0.1.
  static SdeConfig defaults_for(const ModelParams& params, const BarrierProfile& profile, std::uint64_t seed);

  /// Checks positivity and the stability bound dt * theta_cut^2 <= 0.1.
  void validate() const;
};

/// A sampled path. Interval [i, i+1] is an excised blow-up excursion when
/// reinjection_index contains i: values[i] = -theta_cut, values[i+1] = +theta_cut and the
/// accumulators do not change across it.
struct ThetaPath {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> int_theta;  // running integral of theta
  std::vector<double> int_exp;    // running integral of exp(-2 int_theta)
  std::vector<double> noise;      // noise increment added to theta over (t[i-1], t[i]]; noise[0] = 0
  std::vector<double> reinjections;             // crossing times of -theta_cut
  std::vector<std::size_t> reinjection_index;   // interval index of each excursion
  double theta_cut = 0.0;

  std::size_t size() const { return times.size(); }
  bool excised(std::size_t interval) const;
};

struct StepResult {
  double theta;
  bool reinjected;
};

/// One Euler-Maruyama step of size cfg.dt with the given standard normal deviate.
/// Values below -theta_cut come back as +theta_cut with reinjected = true;
/// values above +theta_cut are reflected.
StepResult step(double theta, double t, const SdeConfig& cfg, double deviate);

/// Deterministic sweep time from +cut to -cut through infinity for constant omega.
double excursion_time(double theta_cut, double omega);

/// Integrates one path over [t0, t1] using `stream`.
ThetaPath simulate(const SdeConfig& cfg, double t0, double t1, double theta0, RandomStream stream);

/// Same, with the configured stream (path index 0).
ThetaPath simulate(const SdeConfig& cfg, double t0, double t1, double theta0);

/// cfg.n_paths independent paths; path k uses cfg.stream.split(k). Parallel across workers.
std::vector<ThetaPath> simulate_ensemble(const SdeConfig& cfg, double t0, double t1, double theta0);

struct Histogram {
  std::vector<double> edges;          // bin edges in theta
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;            // all retained samples, including excursions
  std::uint64_t excursion = 0;        // samples taken while |theta| was beyond the cut

  double bin_width(std::size_t i) const { return edges[i + 1] - edges[i]; }
  /// counts[i] / (total * width): integrates to the in-range fraction.
  std::vector<double> density() const;
};

struct HistogramSpec {
  std::size_t bins = 80;
  double theta_min = 0.0;  // range defaults to [-theta_cut, theta_cut] when min == max
  double theta_max = 0.0;
  double sample_interval = 0.05;
};

/// Time-averaged occupation histogram over all paths, sampled every
/// sample_interval on [burn_in, burn_in + sample_window] after starting at theta = 0.
/// burn_in must be at least 5 relaxation times (5 pi / omega_out).
Histogram ensemble_histogram(const SdeConfig& cfg, double burn_in, double sample_window,
                             const HistogramSpec& spec = {});

/// sum_i |counts_i / total - mass_i| with mass_i the exact bin masses.
double histogram_l1(const Histogram& h, const std::vector<double>& bin_masses);

}  // namespace qrho
