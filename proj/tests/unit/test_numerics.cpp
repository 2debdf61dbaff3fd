// Reference values computed with mpmath at 30 digits; Gauss-Hermite entries
// with numpy.polynomial.hermite.hermgauss.

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "qrho/errors.hpp"
#include "qrho/numerics.hpp"

using namespace qrho;

namespace {

struct AiryRef {
  double x, ai, bi, aip, bip;
};

constexpr AiryRef kAiry[] = {
    {-30.0, -0.087968188456842163, -0.22444694220056632, 1.2286206026374851, -0.48369472582768149},
    {-10.0, 0.040241238486443191, -0.31467982964383863, 0.99626504413279006, 0.11941411339990924},
    {-3.7, -0.2820130618419314, 0.29235261007145209, -0.58272780365295816, -0.5246136149096833},
    {-1.0, 0.53556088329235212, 0.10399738949694461, -0.010160567116645209, 0.59237562642279235},
    {0.0, 0.35502805388781724, 0.61492662744600074, -0.2588194037928068, 0.44828835735382636},
    {0.5, 0.23169360648083349, 0.85427704310315549, -0.22491053266468389, 0.5445725641405923},
    {2.5, 0.01572592338047049, 6.4816607384605786, -0.02625088103590323, 9.4214233173343018},
    {5.0, 0.00010834442813607442, 657.79204417117118, -0.00024741389086846248, 1435.8190802179825},
    {10.0, 1.1047532552898686e-10, 455641153.54822514, -3.5206336767389236e-10, 1429236134.4828658},
};

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

}  // namespace

TEST_CASE("airy matches reference values") {
  for (const auto& r : kAiry) {
    CAPTURE(r.x);
    const auto a = airy(r.x);
    // Oscillatory region: error relative to the envelope.
    const double env = r.x < 0 ? std::hypot(r.ai, r.bi) : 0.0;
    const double envp = r.x < 0 ? std::hypot(r.aip, r.bip) : 0.0;
    CHECK(std::fabs(a.ai - r.ai) <= 1e-12 * std::max(std::fabs(r.ai), env));
    CHECK(std::fabs(a.bi - r.bi) <= 1e-12 * std::max(std::fabs(r.bi), env));
    CHECK(std::fabs(a.ai_prime - r.aip) <= 1e-12 * std::max(std::fabs(r.aip), envp));
    CHECK(std::fabs(a.bi_prime - r.bip) <= 1e-12 * std::max(std::fabs(r.bip), envp));
  }
}

TEST_CASE("airy wronskian is 1/pi") {
  for (double x = -30.0; x <= 5.0; x += 0.0625) {
    const auto a = airy(x);
    CHECK(std::fabs(a.ai * a.bi_prime - a.ai_prime * a.bi - 1.0 / std::numbers::pi) < 1e-12);
  }
}

TEST_CASE("airy is continuous across the region switches") {
  for (double x : {-8.0, 2.0, 12.0}) {
    const auto lo = airy(std::nextafter(x, -100.0));
    const auto hi = airy(std::nextafter(x, 100.0));
    CHECK(rel(lo.ai, hi.ai) < 1e-12);
    CHECK(rel(lo.bi, hi.bi) < 1e-12);
  }
}

TEST_CASE("airy rejects arguments beyond 1e4") {
  CHECK_THROWS_AS(airy(1.5e4), Error);
  CHECK_THROWS_AS(airy(std::nan("")), Error);
  CHECK_NOTHROW(airy(-1e4));
}

TEST_CASE("hermite values and order limit") {
  CHECK(hermite(0, 0.3) == 1.0);
  CHECK(hermite(1, 0.3) == doctest::Approx(0.6));
  CHECK(rel(hermite(5, 0.7), 34.49824) < 1e-14);
  CHECK(rel(hermite(10, 0.7), 38802.826035097599) < 1e-13);
  CHECK(rel(hermite(20, -1.3), -634265763221.86543) < 1e-12);
  CHECK(rel(hermite(40, 2.1), 3.0619009441501278e+30) < 1e-12);
  CHECK_NOTHROW(hermite(64, 1.0));
  try {
    hermite(65, 1.0);
    FAIL("expected unsupported_order");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unsupported_order);
  }
}

TEST_CASE("normalized hermite matches the plain polynomial") {
  for (unsigned n = 0; n <= 20; ++n) {
    const double scale = std::sqrt(std::ldexp(std::tgamma(n + 1.0), int(n)));
    CHECK(rel(hermite_normalized(n, 0.9), hermite(n, 0.9) / scale) < 1e-12);
  }
}

TEST_CASE("gauss-hermite rule") {
  const auto g = gauss_hermite(20);
  REQUIRE(g.nodes.size() == 20);
  CHECK(rel(g.nodes[19], 5.387480890011233) < 1e-13);
  CHECK(rel(g.weights[19], 2.2293936455341447e-13) < 1e-10);
  CHECK(rel(g.nodes[10], 0.24534070830090124) < 1e-13);
  CHECK(rel(g.weights[10], 0.4622436696006101) < 1e-13);
  double m0 = 0, m4 = 0;
  for (std::size_t i = 0; i < 20; ++i) {
    m0 += g.weights[i];
    m4 += g.weights[i] * std::pow(g.nodes[i], 4);
  }
  const double sp = std::sqrt(std::numbers::pi);
  CHECK(rel(m0, sp) < 1e-14);
  CHECK(rel(m4, 0.75 * sp) < 1e-13);
}

TEST_CASE("integrate: smooth, infinite and singular ranges") {
  CHECK(rel(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value, 2.0) < 1e-12);
  CHECK(rel(integrate([](double x) { return std::exp(-x * x); }, -kInf, kInf).value, std::sqrt(std::numbers::pi)) <
        1e-10);
  IntegrationOptions o;
  o.lower = EndpointBehaviour::inverse_sqrt;
  o.tol = 1e-12;
  const double v = integrate([](double x) { return std::exp(-x) / std::sqrt(x); }, 0.0, kInf, o).value;
  CHECK(rel(v, std::sqrt(std::numbers::pi)) < 1e-11);
  o.upper = EndpointBehaviour::inverse_sqrt;
  // int_0^1 dx / sqrt(x (1 - x)) = pi
  const double w = integrate([](double x) { return 1.0 / std::sqrt(x * (1.0 - x)); }, 0.0, 1.0, o).value;
  CHECK(rel(w, std::numbers::pi) < 1e-11);
}

TEST_CASE("integrate reports its best estimate when the budget runs out") {
  IntegrationOptions o;
  o.max_intervals = 3;
  o.tol = 1e-14;
  try {
    integrate([](double x) { return std::sin(1.0 / (x + 1e-3)); }, 0.0, 1.0, o);
    FAIL("expected accuracy error");
  } catch (const AccuracyError& e) {
    CHECK(e.code() == Errc::accuracy);
    CHECK(std::isfinite(e.best_estimate()));
    CHECK(e.error_estimate() > 0.0);
  }
}

TEST_CASE("random streams: reproducible and distinct") {
  RandomStream a(42, 0), b(42, 0), c(42, 1);
  std::set<double> seen;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x > 0.0);
    CHECK(x <= 1.0);
    seen.insert(c.uniform());
  }
  CHECK(seen.size() == 1000);
  // Philox4x32-10 known-answer vector: counter 0, key 0.
  RandomStream z(0, 0);
  const auto blk = z.next_block();
  CHECK(blk[0] == 0x6627e8d5u);
  CHECK(blk[1] == 0xe169c58du);
  CHECK(blk[2] == 0xbc57ac4cu);
  CHECK(blk[3] == 0x9b00dbd8u);
}

TEST_CASE("normal deviates have unit variance") {
  RandomStream s(7, 3);
  double m = 0, v = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    m += z;
    v += z * z;
  }
  m /= n;
  v = v / n - m * m;
  CHECK(std::fabs(m) < 5.0 / std::sqrt(double(n)));
  CHECK(std::fabs(v - 1.0) < 0.02);
  CHECK(s.blocks_used() == std::uint64_t(n / 2));
}
