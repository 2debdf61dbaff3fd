// L, M and S/k references from mpmath (numerical derivatives of log(Ai^2 + Bi^2)).

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qrho/errors.hpp"
#include "qrho/langevin.hpp"
#include "qrho/thermo.hpp"

using namespace qrho;

TEST_CASE("log derivatives of Ai^2 + Bi^2") {
  struct Ref {
    double lambda, L, M;
  };
  const Ref refs[] = {
      {0.0, 0.72901113294722698, 0.53145723196099945},
      {0.5, 0.51401408033431315, 0.34026388184261589},
      {1.0, 0.37739378756072458, 0.21620206232768951},
      {10.0, 0.049953450466492259, 0.0049814762004089534},
      {100.0, 0.0049999953125331049, 4.9999812502317325e-5},
  };
  for (const auto& r : refs) {
    CAPTURE(r.lambda);
    CHECK(airy_log_derivative(r.lambda) == doctest::Approx(r.L).epsilon(1e-11));
    CHECK(airy_log_second_derivative(r.lambda) == doctest::Approx(r.M).epsilon(1e-9));
  }
  CHECK_THROWS_AS(airy_log_derivative(-1.0), Error);
}

TEST_CASE("entropy values") {
  CHECK(entropy(0.0) == doctest::Approx(0.1022842731466849).epsilon(1e-12));
  CHECK(entropy(1.0) == doctest::Approx(0.35388013152050128).epsilon(1e-12));
  CHECK(entropy(100.0) == doctest::Approx(0.43561729398222522).epsilon(1e-12));
  CHECK(std::fabs(entropy(1e4) - (2.0 - std::numbers::ln2) / 3.0) < 1e-3);
}

TEST_CASE("entropy is non-decreasing on a log grid") {
  double prev = -1.0;
  for (int i = 0; i < 50; ++i) {
    const double lam = std::pow(10.0, -2.0 + 6.0 * i / 49.0);
    const double s = entropy(lam);
    CHECK(s >= prev);
    prev = s;
  }
}

TEST_CASE("S = eps (U - F) with the module's own U and F") {
  for (double eps : {0.01, 0.3, 1.0, 7.0}) {
    for (int i = 0; i < 20; ++i) {
      const double lam = std::pow(10.0, -2.0 + 6.0 * i / 19.0);
      CHECK(std::fabs(entropy(lam) - eps * (internal_energy(lam, eps) - free_energy(eps))) < 1e-10);
    }
  }
  CHECK(free_energy(2.0) == std::numbers::ln2 / 6.0);
}

TEST_CASE("ground state energy limits") {
  const auto g = ground_state_energy(1e4, 1.0);
  CHECK(g.energy == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(g.decay_time == doctest::Approx(0.01).epsilon(0.05));
  CHECK(g.width == doctest::Approx(1.0 / g.decay_time));
  CHECK(g.divergent_flag);
  CHECK(std::isfinite(g.width_quadrature));
  CHECK(g.width_quadrature > 0.0);
  CHECK_THROWS_AS(ground_state_energy(0.0, 1.0), Error);
}

TEST_CASE("asymptotic lambda comes from omega_as") {
  ModelParams p;
  p.epsilon = 8.0;
  p.omega_as = 6.0;
  CHECK(thermo_lambda(p) == doctest::Approx(9.0));
  const auto r = thermo_report(p);
  CHECK(r.entropy_over_k == doctest::Approx(entropy(9.0)));
  CHECK(r.free_energy == doctest::Approx(std::numbers::ln2 / 24.0));
}

TEST_CASE("density-based internal energy vanishes for the unit-mass density") {
  ModelParams p;
  p.omega_as = 2.0;
  CHECK(std::fabs(internal_energy_from_density(p)) < 1e-8);
}

TEST_CASE("density matrix structure") {
  const double w = 1.4;
  // theta = 0: regular ground-state density on the diagonal
  for (double x : {-1.0, 0.0, 0.7}) {
    const cplx v = density_matrix_value(x, x, 0.0, 0.0, 0.0, 0.0, w);
    CHECK(v.real() == doctest::Approx(std::sqrt(w / std::numbers::pi) * std::exp(-w * x * x)));
    CHECK(v.imag() == doctest::Approx(0.0));
  }
  // hermiticity
  const cplx a = density_matrix_value(0.3, -0.8, 1.1, 1.1, 0.2, 0.5, w);
  const cplx b = density_matrix_value(-0.8, 0.3, 1.1, 1.1, 0.5, 0.2, w);
  CHECK(std::abs(a - std::conj(b)) < 1e-15);
  // the trace of the theta = 0 kernel is one
  CHECK(std::abs(density_matrix_trace(0.0, 0.0, w) - 1.0) < 1e-13);
  CHECK(std::abs(density_matrix_trace(2.0, 0.4, w) - std::exp(-0.4)) < 1e-13);
}

TEST_CASE("density matrix needs asymptotic times") {
  ThetaPath p;
  p.times = {-1.0, 0.0, 1.0};
  p.values = {0.0, 0.0, 0.0};
  p.int_theta = {0.0, 0.0, 0.0};
  p.int_exp = {0.0, 0.0, 0.0};
  p.noise = {0.0, 0.0, 0.0};
  const auto prof = BarrierProfile::step(1.0, 2.0, 0.0);
  CHECK_NOTHROW(stochastic_density_matrix(0.0, 0.5, 0.0, 1.0, p, prof, 2.0));
  try {
    stochastic_density_matrix(0.0, -0.5, 0.0, 1.0, p, prof, 2.0);
    FAIL("expected timing");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::timing);
  }
}

TEST_CASE("vacuum expectations over an ensemble") {
  ThetaPath flat;
  flat.times = {0.0, 1.0};
  flat.values = {0.0, 0.0};
  flat.int_theta = {0.0, 0.0};
  flat.int_exp = {0.0, 0.0};
  flat.noise = {0.0, 0.0};
  const std::vector<ThetaPath> still(20, flat);
  const auto prof = BarrierProfile::constant(1.5);
  const auto h = vacuum_expectation(VacuumOperator::hamiltonian, still, prof, 0.5, 1.5);
  CHECK(h.mean.real() == doctest::Approx(0.75).epsilon(1e-12));

  ModelParams p;
  auto cfg = SdeConfig::defaults_for(p, prof, 21);
  cfg.profile = prof;
  cfg.n_paths = 50;
  cfg.store_stride = 100;
  const auto ens = simulate_ensemble(cfg, 0.0, 3.0, 0.0);
  const auto id = vacuum_expectation(VacuumOperator::identity, ens, prof, 2.0, 1.5);
  CHECK(std::abs(id.mean - 1.0) < 1e-12);
  const auto par = vacuum_expectation(VacuumOperator::parity, ens, prof, 2.0, 1.5);
  CHECK(std::abs(par.mean - 1.0) < 1e-12);
  // per path the kernel gives w/2 + theta^2/w, never below w/2
  const auto ham = vacuum_expectation(VacuumOperator::hamiltonian, ens, prof, 2.0, 1.5);
  CHECK(ham.mean.real() >= 0.75 - 1e-12);
  CHECK(std::fabs(ham.mean.imag()) < 1e-10);
}
