#include "qrho/langevin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "parallel.hpp"
#include "qrho/errors.hpp"

namespace qrho {
namespace {

constexpr double kStabilityBound = 0.1;
constexpr std::uint64_t kMaxSteps = 1000000000ull;

// Advances one outer step of length h (<= dt) from (t, theta). One Philox block
// per outer step (none when the noise is off): a single combined deviate, or
// two half steps when |theta| is beyond half the cut.
struct Advance {
  double t_end = 0.0;
  double theta = 0.0;
  double noise = 0.0;       // noise added before any crossing
  bool crossed = false;
  double t_cross = 0.0;     // time theta reached -cut
  double theta_before = 0.0;  // value at the start of the crossing substep
  double t_before = 0.0;
};

class Engine {
 public:
  explicit Engine(const SdeConfig& cfg)
      : cfg_(cfg), cut_(cfg.theta_cut), noise_scale_(std::sqrt(2.0 * cfg.epsilon)) {}

  Advance advance(double t, double theta, double h, RandomStream& rng) const {
    Advance r;
    double z1 = 0.0, z2 = 0.0;
    if (noise_scale_ > 0.0) gaussian_pair(rng.next_block(), z1, z2);
    if (std::fabs(theta) > 0.5 * cut_) {
      const double hh = 0.5 * h;
      if (substep(t, theta, hh, z1, r)) return r;
      if (substep(t + hh, r.theta, hh, z2, r)) return r;
      r.t_end = t + h;
      return r;
    }
    substep(t, theta, h, (z1 + z2) * 0.70710678118654752440, r);
    r.t_end = t + h;
    return r;
  }

  double cut() const { return cut_; }

 private:
  static void gaussian_pair(const std::array<std::uint32_t, 4>& b, double& z1, double& z2) {
    auto unit = [](std::uint32_t hi, std::uint32_t lo) {
      const std::uint64_t bits = ((std::uint64_t(hi) << 32) | lo) >> 11;
      return (double(bits) + 1.0) * 0x1.0p-53;
    };
    const double u1 = unit(b[0], b[1]), u2 = unit(b[2], b[3]);
    const double rr = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    z1 = rr * std::cos(phi);
    z2 = rr * std::sin(phi);
  }

  // Returns true when the substep crossed -cut (r is then final).
  bool substep(double t, double theta, double h, double z, Advance& r) const {
    const double w2 = omega0_squared(cfg_.profile, t);
    const double dn = noise_scale_ * std::sqrt(h) * z;
    double next = theta - (theta * theta + w2) * h + dn;
    r.noise += dn;
    if (next < -cut_) {
      const double frac = (theta + cut_) / (theta - next);
      r.crossed = true;
      r.theta_before = theta;
      r.t_before = t;
      r.t_cross = t + std::clamp(frac, 0.0, 1.0) * h;
      r.t_end = r.t_cross + excursion_time(cut_, std::sqrt(omega0_squared(cfg_.profile, r.t_cross)));
      r.theta = cut_;
      return true;
    }
    if (next > cut_) next = 2.0 * cut_ - next;
    r.theta = next;
    return false;
  }

  const SdeConfig& cfg_;
  double cut_;
  double noise_scale_;
};

void check_span(const SdeConfig& cfg, double t0, double t1) {
  if (!(t1 > t0)) fail(Errc::precondition, "simulate: t1 must exceed t0");
  const double steps = (t1 - t0) / cfg.dt;
  if (!(steps < double(kMaxSteps))) {
    std::ostringstream msg;
    msg << "simulate: " << steps << " steps exceed the budget of 1e9";
    fail(Errc::budget, msg.str());
  }
}

}  // namespace

SdeConfig SdeConfig::defaults_for(const ModelParams& params, const BarrierProfile& profile, std::uint64_t seed) {
  params.validate();
  SdeConfig c;
  c.epsilon = params.epsilon;
  c.profile = profile;
  c.stream = RandomStream(seed, 0);
  c.theta_cut = std::max(20.0 * params.eps_third(), 10.0 * params.omega_out);
  c.dt = kStabilityBound / (c.theta_cut * c.theta_cut);
  return c;
}

void SdeConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) fail(Errc::configuration, "sde.dt must be positive");
  if (!(theta_cut > 0.0) || !std::isfinite(theta_cut)) fail(Errc::configuration, "sde.theta_cut must be positive");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) fail(Errc::configuration, "sde.epsilon must be non-negative");
  if (store_stride == 0) fail(Errc::configuration, "sde.store_stride must be at least 1");
  if (dt * theta_cut * theta_cut > kStabilityBound * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "sde.dt = " << dt << " violates dt * theta_cut^2 <= 0.1 (theta_cut = " << theta_cut << ")";
    fail(Errc::configuration, msg.str());
  }
  profile.validate();
}

bool ThetaPath::excised(std::size_t interval) const {
  return std::binary_search(reinjection_index.begin(), reinjection_index.end(), interval);
}

double excursion_time(double cut, double omega) {
  if (omega <= 0.0) return 2.0 / cut;
  return 2.0 * (0.5 * std::numbers::pi - std::atan(cut / omega)) / omega;
}

StepResult step(double theta, double t, const SdeConfig& cfg, double deviate) {
  const double w2 = omega0_squared(cfg.profile, t);
  double next = theta - (theta * theta + w2) * cfg.dt + std::sqrt(2.0 * cfg.epsilon * cfg.dt) * deviate;
  if (next < -cfg.theta_cut) return {cfg.theta_cut, true};
  if (next > cfg.theta_cut) next = 2.0 * cfg.theta_cut - next;
  return {next, false};
}

ThetaPath simulate(const SdeConfig& cfg, double t0, double t1, double theta0, RandomStream rng) {
  cfg.validate();
  check_span(cfg, t0, t1);
  const Engine engine(cfg);
  const double cut = cfg.theta_cut;
  if (std::fabs(theta0) > cut) fail(Errc::precondition, "simulate: |theta0| exceeds theta_cut");

  ThetaPath p;
  p.theta_cut = cut;
  const std::size_t expect = std::size_t((t1 - t0) / cfg.dt / double(cfg.store_stride)) + 2;
  p.times.reserve(expect);
  p.values.reserve(expect);
  p.int_theta.reserve(expect);
  p.int_exp.reserve(expect);
  p.noise.reserve(expect);

  double t = t0, theta = theta0, I = 0.0, E = 0.0, pending_noise = 0.0;
  auto push = [&](double tt, double v) {
    p.times.push_back(tt);
    p.values.push_back(v);
    p.int_theta.push_back(I);
    p.int_exp.push_back(E);
    p.noise.push_back(pending_noise);
    pending_noise = 0.0;
  };
  // trapezoid update of both accumulators
  auto accumulate = [&](double ta, double va, double tb, double vb) {
    const double h = tb - ta;
    const double I_new = I + 0.5 * h * (va + vb);
    E += 0.5 * h * (std::exp(-2.0 * I) + std::exp(-2.0 * I_new));
    I = I_new;
  };
  push(t, theta);
  std::size_t since_store = 0;
  while (t < t1) {
    const double h = std::min(cfg.dt, t1 - t);
    if (h <= 1e-15 * std::max(1.0, std::fabs(t))) break;
    const Advance a = engine.advance(t, theta, h, rng);
    pending_noise += a.noise;
    if (a.crossed) {
      // Accumulate up to the start of the crossing substep at full resolution;
      // the substep before the crossing ends at -cut.
      accumulate(t, theta, a.t_before, a.theta_before);
      accumulate(a.t_before, a.theta_before, a.t_cross, -cut);
      push(a.t_cross, -cut);
      p.reinjections.push_back(a.t_cross);
      p.reinjection_index.push_back(p.times.size() - 1);
      t = a.t_end;
      theta = cut;
      push(t, theta);
      since_store = 0;
      continue;
    }
    accumulate(t, theta, a.t_end, a.theta);
    t = a.t_end;
    theta = a.theta;
    if (++since_store == cfg.store_stride || t >= t1) {
      push(t, theta);
      since_store = 0;
    }
  }
  if (p.times.back() < t) push(t, theta);
  return p;
}

ThetaPath simulate(const SdeConfig& cfg, double t0, double t1, double theta0) {
  return simulate(cfg, t0, t1, theta0, cfg.stream.split(cfg.stream.stream_id()));
}

std::vector<ThetaPath> simulate_ensemble(const SdeConfig& cfg, double t0, double t1, double theta0) {
  cfg.validate();
  check_span(cfg, t0, t1);
  std::vector<ThetaPath> out(cfg.n_paths);
  detail::parallel_for(cfg.n_paths, cfg.workers, [&](std::size_t k, unsigned) {
    out[k] = simulate(cfg, t0, t1, theta0, cfg.stream.split(k));
  });
  return out;
}

std::vector<double> Histogram::density() const {
  std::vector<double> d(counts.size(), 0.0);
  if (total == 0) return d;
  for (std::size_t i = 0; i < counts.size(); ++i) d[i] = double(counts[i]) / (double(total) * bin_width(i));
  return d;
}

Histogram ensemble_histogram(const SdeConfig& cfg, double burn_in, double window, const HistogramSpec& spec) {
  cfg.validate();
  const double w_out = omega0(cfg.profile, 1e300);
  const double relax = std::numbers::pi / w_out;
  if (burn_in < 5.0 * relax * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "burn_in = " << burn_in << " is shorter than 5 relaxation times (" << 5.0 * relax << ")";
    fail(Errc::precondition, msg.str());
  }
  if (!(window > 0.0) || !(spec.sample_interval > 0.0) || spec.bins == 0)
    fail(Errc::configuration, "histogram window, sample_interval and bins must be positive");
  check_span(cfg, 0.0, burn_in + window);

  Histogram hist;
  double lo = spec.theta_min, hi = spec.theta_max;
  if (!(hi > lo)) {
    lo = -cfg.theta_cut;
    hi = cfg.theta_cut;
  }
  hist.edges.resize(spec.bins + 1);
  for (std::size_t i = 0; i <= spec.bins; ++i) hist.edges[i] = lo + (hi - lo) * double(i) / double(spec.bins);
  hist.counts.assign(spec.bins, 0);

  struct Tally {
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0, excursion = 0;
  };
  const unsigned workers = detail::resolve_workers(cfg.workers);
  std::vector<Tally> tallies(workers);
  for (auto& tl : tallies) tl.counts.assign(spec.bins, 0);

  const double cut = cfg.theta_cut;
  const double t_end = burn_in + window;
  const double bin_scale = double(spec.bins) / (hi - lo);

  detail::parallel_for(cfg.n_paths, workers, [&](std::size_t k, unsigned w) {
    Tally& tl = tallies[w];
    auto record = [&](double v) {
      ++tl.total;
      if (v < lo || v >= hi) return;
      const std::size_t b = std::min<std::size_t>(spec.bins - 1, std::size_t((v - lo) * bin_scale));
      ++tl.counts[b];
    };
    RandomStream rng = cfg.stream.split(k);
    const Engine engine(cfg);
    double t = 0.0, theta = 0.0;
    std::uint64_t sample_no = 0;
    double next_sample = burn_in;
    while (next_sample <= t_end) {
      const Advance a = engine.advance(t, theta, cfg.dt, rng);
      if (a.crossed) {
        while (next_sample <= a.t_cross && next_sample <= t_end) {
          const double f = (next_sample - t) / std::max(a.t_cross - t, 1e-300);
          record(theta + std::clamp(f, 0.0, 1.0) * (-cut - theta));
          next_sample = burn_in + double(++sample_no) * spec.sample_interval;
        }
        while (next_sample <= a.t_end && next_sample <= t_end) {
          ++tl.total;
          ++tl.excursion;
          next_sample = burn_in + double(++sample_no) * spec.sample_interval;
        }
      } else {
        while (next_sample <= a.t_end && next_sample <= t_end) {
          record(a.theta);
          next_sample = burn_in + double(++sample_no) * spec.sample_interval;
        }
      }
      t = a.t_end;
      theta = a.theta;
    }
  });
  for (const auto& tl : tallies) {
    for (std::size_t i = 0; i < spec.bins; ++i) hist.counts[i] += tl.counts[i];
    hist.total += tl.total;
    hist.excursion += tl.excursion;
  }
  if (hist.total == 0) fail(Errc::sampling, "ensemble_histogram: no samples retained");
  return hist;
}

double histogram_l1(const Histogram& h, const std::vector<double>& bin_masses) {
  if (h.total == 0) fail(Errc::sampling, "histogram_l1: empty histogram");
  if (bin_masses.size() != h.counts.size()) fail(Errc::precondition, "histogram_l1: bin count mismatch");
  double l1 = 0.0;
  for (std::size_t i = 0; i < h.counts.size(); ++i)
    l1 += std::fabs(double(h.counts[i]) / double(h.total) - bin_masses[i]);
  return l1;
}

}  // namespace qrho
