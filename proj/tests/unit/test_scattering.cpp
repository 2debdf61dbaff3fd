// Transition references from mpmath: nested quadrature of the stationary
// density against sqrt((d +- 1)/2)/d.

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qrho/errors.hpp"
#include "qrho/langevin.hpp"
#include "qrho/scattering.hpp"

using namespace qrho;

namespace {

cplx sudden_s00(double wi, double wo) { return std::sqrt(2.0 * std::sqrt(wi * wo) / (wi + wo)); }

}  // namespace

TEST_CASE("sudden step vacuum persistence") {
  const auto prof = BarrierProfile::step(1.0, 3.0, 0.0);
  const auto tr = solve_xi(prof, -10.0, 3.0, 1e-3);
  const auto s = s_elements_path(tr, prof, 2.0);
  CHECK(std::norm(s.s00.value) == doctest::Approx(std::norm(sudden_s00(1.0, 3.0))).epsilon(1e-9));
  CHECK(std::abs(s.s11.value - std::pow(s.s00.value, 3)) < 1e-12);
  // |S20 / S00| = r / sqrt 2 with r = (wo - wi) / (wo + wi)
  const double p20 = std::norm(s.s20.value), p00 = std::norm(s.s00.value);
  const double r = (3.0 - 1.0) / (3.0 + 1.0);
  CHECK(p20 == doctest::Approx(0.5 * r * r * p00).epsilon(1e-8));
  CHECK(std::norm(s.s02.value) == doctest::Approx(p20).epsilon(1e-8));
}

TEST_CASE("generating functional coefficients match the closed forms") {
  const auto prof = BarrierProfile::smooth_step(1.0, 2.0, 0.0, 0.4);
  const auto tr = solve_xi(prof, -30.0, 12.0, 1e-3);
  const auto s = s_elements_path(tr, prof, 11.0);
  CHECK(std::abs(generating_coefficient(0, 0, tr, 11.0, 2.0) - s.s00.value) < 1e-10);
  CHECK(std::abs(generating_coefficient(1, 1, tr, 11.0, 2.0) - s.s11.value) < 1e-10);
  CHECK(std::abs(generating_coefficient(2, 0, tr, 11.0, 2.0) - s.s20.value) < 1e-10);
  CHECK(std::abs(generating_coefficient(0, 2, tr, 11.0, 2.0) - s.s02.value) < 1e-10);
  CHECK(std::abs(generating_coefficient(1, 0, tr, 11.0, 2.0)) < 1e-12);
  CHECK(s.get(1, 2) == cplx(0.0, 0.0));
}

TEST_CASE("constant frequency scatters nothing") {
  const auto prof = BarrierProfile::constant(1.3);
  const auto tr = solve_xi(prof, -5.0, 5.0, 1e-3);
  const auto s = s_elements_path(tr, prof, 4.0);
  CHECK(std::abs(s.s00.value) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(s.s20.value) < 1e-9);
}

TEST_CASE("evaluation time must be asymptotic") {
  const auto prof = BarrierProfile::smooth_step(1.0, 2.0, 0.0, 1.0);
  const auto tr = solve_xi(prof, -40.0, 5.0, 1e-3);
  try {
    s_elements_path(tr, prof, 1.0);
    FAIL("expected timing");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::timing);
  }
}

TEST_CASE("averaged transition probability against references") {
  struct Ref {
    double lambda, rho, i1, i2, p;
  };
  const Ref refs[] = {
      {1.0, 0.0, 0.679820788454272, 0.254438522111466, 0.526895265948855},
      {0.1, 0.5, 0.705376377218676, 0.241218768461539, 0.392969168577122},
      {4.0, 0.25, 0.707105181036293, 0.239863615193799, 0.482837127386088},
  };
  for (const auto& r : refs) {
    CAPTURE(r.lambda);
    CAPTURE(r.rho);
    const auto t = s00_br(r.lambda, r.rho);
    CHECK(t.i1 == doctest::Approx(r.i1).epsilon(1e-8));
    CHECK(t.i2 == doctest::Approx(r.i2).epsilon(1e-8));
    CHECK(t.probability == doctest::Approx(r.p).epsilon(1e-8));
  }
}

TEST_CASE("transition probability domain") {
  CHECK(transition_probability(1.0, 1.0) == 0.0);
  CHECK_THROWS_AS(s00_br(-1.0, 0.0), Error);
  CHECK_THROWS_AS(s00_br(1.0, 1.2), Error);
  for (double rho : {0.0, 0.3, 0.9}) {
    const double p = transition_probability(2.0, rho);
    CHECK(p > 0.0);
    CHECK(p <= 1.0);
  }
}

TEST_CASE("theta-form element is unimodular in the no-noise limit") {
  ThetaPath p;
  for (int i = 0; i <= 100; ++i) {
    p.times.push_back(0.01 * i);
    p.values.push_back(0.0);
    p.int_theta.push_back(0.0);
    p.int_exp.push_back(0.01 * i);
    p.noise.push_back(0.0);
  }
  const auto s = s_elements_path(p, BarrierProfile::constant(1.0), 0.5);
  CHECK(std::abs(s.s00.value) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("path interpolation helpers") {
  ThetaPath p;
  p.times = {0.0, 1.0, 2.0};
  p.values = {0.0, 2.0, 4.0};
  p.int_theta = {0.0, 1.0, 4.0};
  p.int_exp = {0.0, 0.5, 0.7};
  p.noise = {0.0, 0.0, 0.0};
  CHECK(theta_at(p, 0.5, 1.0) == doctest::Approx(1.0));
  CHECK(int_theta_at(p, 1.5) == doctest::Approx(2.5));
  CHECK(int_exp_at(p, 2.0) == doctest::Approx(0.7));
}
