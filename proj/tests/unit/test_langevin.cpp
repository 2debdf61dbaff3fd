#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qrho/errors.hpp"
#include "qrho/langevin.hpp"
#include "qrho/stationary.hpp"

using namespace qrho;

namespace {

SdeConfig deterministic(double omega, double dt, double cut) {
  SdeConfig c;
  c.profile = BarrierProfile::constant(omega);
  c.epsilon = 0.0;
  c.dt = dt;
  c.theta_cut = cut;
  return c;
}

}  // namespace

TEST_CASE("defaults respect the stability bound") {
  ModelParams p;
  p.epsilon = 0.5;
  p.omega_out = 3.0;
  const auto c = SdeConfig::defaults_for(p, BarrierProfile::step(1.0, 3.0), 1);
  CHECK(c.theta_cut == doctest::Approx(30.0));
  CHECK(c.dt * c.theta_cut * c.theta_cut <= 0.1 + 1e-15);
  CHECK_NOTHROW(c.validate());
  SdeConfig bad = c;
  bad.dt *= 2.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("excursion time of the Riccati sweep") {
  // From +cut through infinity to -cut: 2 (pi/2 - atan(cut / omega)) / omega.
  CHECK(excursion_time(1e12, 1.0) == doctest::Approx(0.0).epsilon(1e-11));
  CHECK(excursion_time(1.0, 1.0) == doctest::Approx(std::numbers::pi / 2.0));
}

TEST_CASE("deterministic path follows -omega tan(omega t)") {
  const double w = 1.3;
  auto cfg = deterministic(w, 1e-5, 50.0);
  const auto path = simulate(cfg, 0.0, 1.0, 0.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const double t = path.times[i];
    if (std::fabs(std::cos(w * t)) < 0.2) continue;
    worst = std::max(worst, std::fabs(path.values[i] + w * std::tan(w * t)));
  }
  CHECK(worst < 1e-3);
  CHECK(path.noise.size() == path.size());
}

TEST_CASE("reinjection repeats with period pi / omega") {
  const double w = 2.0;
  auto cfg = deterministic(w, 2e-6, 40.0);
  const auto path = simulate(cfg, 0.0, 4.0, 0.0);
  REQUIRE(path.reinjections.size() >= 3);
  for (std::size_t k = 1; k < path.reinjections.size(); ++k)
    CHECK(std::fabs(path.reinjections[k] - path.reinjections[k - 1] - std::numbers::pi / w) < 4 * cfg.dt);
  // the excised interval keeps the accumulators fixed
  for (auto i : path.reinjection_index) {
    CHECK(path.values[i] == doctest::Approx(-cfg.theta_cut));
    CHECK(path.values[i + 1] == doctest::Approx(cfg.theta_cut));
    CHECK(path.int_theta[i] == path.int_theta[i + 1]);
    CHECK(path.excised(i));
  }
}

TEST_CASE("same seed reproduces a path, different stream does not") {
  ModelParams p;
  auto cfg = SdeConfig::defaults_for(p, BarrierProfile::constant(1.0), 11);
  const auto a = simulate(cfg, 0.0, 2.0, 0.0, RandomStream(11, 4));
  const auto b = simulate(cfg, 0.0, 2.0, 0.0, RandomStream(11, 4));
  const auto c = simulate(cfg, 0.0, 2.0, 0.0, RandomStream(11, 5));
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
}

TEST_CASE("ensemble is independent of the worker count") {
  ModelParams p;
  auto cfg = SdeConfig::defaults_for(p, BarrierProfile::constant(1.0), 3);
  cfg.n_paths = 6;
  cfg.store_stride = 50;
  cfg.workers = 1;
  const auto one = simulate_ensemble(cfg, 0.0, 1.0, 0.0);
  cfg.workers = 3;
  const auto three = simulate_ensemble(cfg, 0.0, 1.0, 0.0);
  REQUIRE(one.size() == 6);
  for (std::size_t k = 0; k < 6; ++k) CHECK(one[k].values == three[k].values);
}

TEST_CASE("pure diffusion has variance 2 eps t") {
  SdeConfig cfg;
  cfg.profile = BarrierProfile::constant(1e-3);
  cfg.epsilon = 0.5;
  cfg.dt = 1e-3;
  cfg.theta_cut = 10.0;
  cfg.n_paths = 2000;
  cfg.store_stride = 1000;
  cfg.stream = RandomStream(5, 0);
  // Short horizon so the theta^2 drift stays small: E[theta] ~ -eps t^2.
  const auto ens = simulate_ensemble(cfg, 0.0, 0.1, 0.0);
  double s2 = 0.0;
  for (const auto& p : ens) s2 += p.values.back() * p.values.back();
  s2 /= double(ens.size());
  CHECK(s2 == doctest::Approx(2 * 0.5 * 0.1).epsilon(0.1));
}

TEST_CASE("histogram refuses a short burn-in") {
  ModelParams p;
  auto cfg = SdeConfig::defaults_for(p, BarrierProfile::constant(1.0), 1);
  try {
    ensemble_histogram(cfg, 1.0, 10.0);
    FAIL("expected precondition");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::precondition);
  }
}

TEST_CASE("stationary histogram is close to the exact density") {
  ModelParams p;
  auto cfg = SdeConfig::defaults_for(p, BarrierProfile::constant(1.0), 9);
  cfg.n_paths = 4;
  HistogramSpec spec;
  spec.bins = 40;
  spec.theta_min = -8.0;
  spec.theta_max = 8.0;
  spec.sample_interval = 0.5;
  const auto h = ensemble_histogram(cfg, 5 * std::numbers::pi, 2000.0, spec);
  const auto d = build_stationary(1.0, 1.0);
  std::vector<double> mass;
  for (std::size_t i = 0; i < spec.bins; ++i) mass.push_back(d.mass_between(h.edges[i], h.edges[i + 1]));
  CHECK(histogram_l1(h, mass) < 0.12);
}
