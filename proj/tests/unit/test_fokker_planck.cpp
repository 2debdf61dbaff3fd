#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qrho/errors.hpp"
#include "qrho/fokker_planck.hpp"
#include "qrho/stationary.hpp"

using namespace qrho;

namespace {

Grid1D grid(double a, double b, std::size_t n) {
  Grid1D g;
  g.theta_min = a;
  g.theta_max = b;
  g.n = n;
  return g;
}

double linf(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(grid(-1, 1, 10).validate(), Error);
  CHECK_THROWS_AS(grid(1, -1, 100).validate(), Error);
  CHECK_NOTHROW(grid(-1, 1, 64).validate());
}

TEST_CASE("spike has the requested mass") {
  const auto q = gaussian_spike(grid(-20, 20, 1024), 0.0, 2.5);
  CHECK(q.mass() == doctest::Approx(2.5).epsilon(1e-13));
}

TEST_CASE("reinjection and zero-flux boundaries conserve mass") {
  const auto g = grid(-20, 20, 512);
  const auto q0 = gaussian_spike(g, 0.0, 1.0);
  for (auto bc : {FpBoundary::reinjection, FpBoundary::zero_flux}) {
    for (auto scheme : {TimeScheme::crank_nicolson, TimeScheme::implicit_euler}) {
      FpOptions o;
      o.boundary = bc;
      o.scheme = scheme;
      const auto q = evolve_fp(q0, BarrierProfile::constant(1.0), 1.0, 0.01, 5.0, o);
      CHECK(q.mass() == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(*std::min_element(q.values.begin(), q.values.end()) > -1e-8);
    }
  }
}

TEST_CASE("explicit Euler enforces its stability limit") {
  const auto q0 = gaussian_spike(grid(-20, 20, 512), 0.0, 1.0);
  FpOptions o;
  o.scheme = TimeScheme::explicit_euler;
  try {
    evolve_fp(q0, BarrierProfile::constant(1.0), 1.0, 0.01, 1.0, o);
    FAIL("expected configuration error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::configuration);
  }
  CHECK_NOTHROW(evolve_fp(q0, BarrierProfile::constant(1.0), 1.0, 1e-4, 0.01, o));
}

TEST_CASE("discrete null vector is close to the analytic density") {
  const auto g = grid(-20, 20, 2048);
  const auto q = discrete_stationary(g, 1.0, 1.0, 1.0);
  const auto d = build_stationary(1.0, 1.0);
  // The box holds only part of the heavy-tailed mass; compare with the
  // analytic density conditioned on the box.
  const double inside = d.mass_between(g.theta_min, g.theta_max);
  CHECK(inside == doctest::Approx(0.966).epsilon(1e-2));
  std::vector<double> ref(g.n);
  for (std::size_t i = 0; i < g.n; ++i) ref[i] = d.density_theta(g.x(i)) / inside;
  CHECK(linf(q, ref) < 1e-4);
}

TEST_CASE("evolution relaxes to the stationary density") {
  const auto g = grid(-20, 20, 1024);
  const auto q0 = gaussian_spike(g, 0.0, 1.0);
  FpOptions o;
  o.snapshot_interval = 1.0;
  std::vector<DensityOnGrid> snaps;
  const auto q = evolve_fp(q0, BarrierProfile::constant(1.0), 1.0, 0.01, 15.0, o, &snaps);
  const auto ref = discrete_stationary(g, 1.0, 1.0, 1.0);
  CHECK(linf(q.values, ref) < 1e-4);
  REQUIRE(snaps.size() >= 10);
  std::vector<DensityOnGrid> late(snaps.begin() + 3, snaps.end());
  const double rate = relaxation_rate(late, ref);
  CHECK(rate > 0.3);
}

TEST_CASE("relaxation fit rejects a non-monotone history") {
  const auto g = grid(-20, 20, 64);
  std::vector<double> ref(g.n, 0.0);
  std::vector<DensityOnGrid> h(3);
  for (int k = 0; k < 3; ++k) {
    h[k].grid = g;
    h[k].time = k;
    h[k].values.assign(g.n, k == 1 ? 3.0 : 1.0);
  }
  try {
    relaxation_rate(h, ref);
    FAIL("expected fit error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::fit);
  }
}

TEST_CASE("Feynman-Kac verbatim form matches its closed form") {
  const auto g = grid(-40, 15, 2001);
  const double h = g.spacing();
  FeynmanKacOptions o;
  const auto s = feynman_kac_b0(g, 1e-3, 2.0, o);
  const double exact = feynman_kac_exact(2.0, 9.0 * h * h);
  CHECK(s.limit_estimate == doctest::Approx(exact).epsilon(2e-3));
  CHECK_FALSE(s.stabilised);
  CHECK(s.outcome == "diverged");
}

TEST_CASE("Feynman-Kac detects a grid that is too small") {
  try {
    feynman_kac_b0(grid(-5, 5, 401), 1e-3, 3.0);
    FAIL("expected domain_size");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::domain_size);
  }
}

TEST_CASE("Feynman-Kac without the potential keeps unit mass") {
  FeynmanKacOptions o;
  o.potential = false;
  const auto s = feynman_kac_b0(grid(-20, 20, 801), 1e-3, 1.0, o);
  CHECK(s.limit_estimate == doctest::Approx(1.0).epsilon(1e-8));
}
