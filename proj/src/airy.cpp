#include "qrho/numerics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qrho/errors.hpp"

namespace qrho {
namespace {

using ld = long double;

constexpr ld kAi0 = 0.355028053887817239260063186004183176L;   // Ai(0)
constexpr ld kAip0 = 0.258819403792806798405183560189203963L;  // -Ai'(0)
constexpr ld kSqrt3 = 1.73205080756887729352744634150587237L;

constexpr double kSeriesNegLimit = -8.0;
constexpr double kAiSeriesPosLimit = 2.0;
constexpr double kBiSeriesPosLimit = 12.0;

// f, g and derivatives of the two Maclaurin solutions of y'' = x y.
struct SeriesParts {
  ld f, g, fp, gp;
};

SeriesParts maclaurin(ld x) {
  const ld x3 = x * x * x;
  ld tf = 1.0L, tg = x, tfp = 0.5L * x * x, tgp = 1.0L;
  SeriesParts s{tf, tg, tfp, tgp};
  for (int k = 1; k < 400; ++k) {
    const ld k3 = 3.0L * k;
    tf *= x3 / ((k3 - 1.0L) * k3);
    tg *= x3 / (k3 * (k3 + 1.0L));
    if (k > 1) tfp *= x3 / ((k3 - 1.0L) * (k3 - 3.0L));
    tgp *= x3 / (k3 * (k3 - 2.0L));
    s.f += tf;
    s.g += tg;
    if (k > 1) s.fp += tfp;
    s.gp += tgp;
    const ld scale = std::fabs(s.f) + std::fabs(s.g) + std::fabs(s.fp) + std::fabs(s.gp);
    const ld last = std::fabs(tf) + std::fabs(tg) + std::fabs(tfp) + std::fabs(tgp);
    if (last <= 1e-22L * scale) break;
  }
  return s;
}

// u_k coefficients of the Airy asymptotic expansions.
ld u_coefficient_ratio(int k) {
  const ld a = 6.0L * k;
  return (a - 5.0L) * (a - 3.0L) * (a - 1.0L) / ((2.0L * k - 1.0L) * 216.0L * k);
}

// Oscillatory expansion for x = -z, z >= 8.
AiryValues airy_negative_asymptotic(double z) {
  const ld zz = z;
  const ld zeta = 2.0L / 3.0L * zz * std::sqrt(zz);
  // Even / odd partial sums with alternating signs, truncated at the smallest term.
  ld u = 1.0L, v = 1.0L;
  ld pu = 1.0L, qu = 0.0L, pv = 1.0L, qv = 0.0L;
  ld zeta_pow = 1.0L;
  ld prev = 1.0L;
  for (int k = 1; k < 200; ++k) {
    u *= u_coefficient_ratio(k);
    const ld vk = -(6.0L * k + 1.0L) / (6.0L * k - 1.0L) * u;
    v = vk;
    zeta_pow *= zeta;
    const ld tu = u / zeta_pow;
    const ld tv = v / zeta_pow;
    const ld mag = std::fabs(tu) + std::fabs(tv);
    if (mag > prev) break;
    prev = mag;
    // (-1)^j applied to index 2j (even) or 2j+1 (odd).
    const int j = k / 2;
    const ld sign = (j % 2 == 0) ? 1.0L : -1.0L;
    if (k % 2 == 0) {
      pu += sign * tu;
      pv += sign * tv;
    } else {
      qu += sign * tu;
      qv += sign * tv;
    }
    if (mag < 1e-21L) break;
  }
  const ld phase = zeta - std::numbers::pi_v<ld> / 4.0L;
  const ld c = std::cos(phase), s = std::sin(phase);
  const ld root_pi = std::sqrt(std::numbers::pi_v<ld>);
  const ld z4 = std::pow(zz, 0.25L);
  AiryValues out;
  out.ai = static_cast<double>((c * pu + s * qu) / (root_pi * z4));
  out.bi = static_cast<double>((-s * pu + c * qu) / (root_pi * z4));
  out.ai_prime = static_cast<double>(z4 * (s * pv - c * qv) / root_pi);
  out.bi_prime = static_cast<double>(z4 * (c * pv + s * qv) / root_pi);
  return out;
}

// exp(zeta) * K_nu(zeta) by the trapezoidal rule on K_nu = int_0^inf exp(-zeta cosh t) cosh(nu t) dt.
ld scaled_bessel_k(ld nu, ld zeta) {
  const ld h = std::min(0.2L, 0.55L / std::sqrt(zeta));
  ld sum = 0.5L;  // t = 0 term: exp(0) * cosh(0) / 2
  for (int k = 1; k < 100000; ++k) {
    const ld t = h * k;
    const ld expo = -zeta * (std::cosh(t) - 1.0L);
    const ld term = std::exp(expo) * std::cosh(nu * t);
    sum += term;
    if (expo < -60.0L) break;
  }
  return h * sum;
}

AiryValues airy_positive_bessel(double x) {
  const ld xx = x;
  const ld zeta = 2.0L / 3.0L * xx * std::sqrt(xx);
  const ld decay = std::exp(-zeta);
  const ld pi = std::numbers::pi_v<ld>;
  AiryValues out;
  out.ai = static_cast<double>(std::sqrt(xx / 3.0L) / pi * scaled_bessel_k(1.0L / 3.0L, zeta) * decay);
  out.ai_prime = static_cast<double>(-xx / (pi * kSqrt3) * scaled_bessel_k(2.0L / 3.0L, zeta) * decay);
  return out;
}

// Bi, Bi' for large positive x from the exponential expansion.
void bi_positive_asymptotic(double x, AiryValues& out) {
  const ld xx = x;
  const ld zeta = 2.0L / 3.0L * xx * std::sqrt(xx);
  ld u = 1.0L, su = 1.0L, sv = 1.0L, zeta_pow = 1.0L, prev = 1.0L;
  for (int k = 1; k < 200; ++k) {
    u *= u_coefficient_ratio(k);
    const ld v = -(6.0L * k + 1.0L) / (6.0L * k - 1.0L) * u;
    zeta_pow *= zeta;
    const ld tu = u / zeta_pow, tv = v / zeta_pow;
    const ld mag = std::fabs(tu) + std::fabs(tv);
    if (mag > prev) break;
    prev = mag;
    su += tu;
    sv += tv;
    if (mag < 1e-21L) break;
  }
  const ld root_pi = std::sqrt(std::numbers::pi_v<ld>);
  const ld z4 = std::pow(xx, 0.25L);
  const ld grow = std::exp(zeta);
  out.bi = static_cast<double>(grow * su / (root_pi * z4));
  out.bi_prime = static_cast<double>(grow * z4 * sv / root_pi);
}

}  // namespace

AiryValues airy(double x) {
  if (!std::isfinite(x) || std::fabs(x) > 1e4) {
    std::ostringstream msg;
    msg << "airy: argument " << x << " outside [-1e4, 1e4]";
    fail(Errc::domain, msg.str());
  }
  if (x <= kSeriesNegLimit) return airy_negative_asymptotic(-x);

  AiryValues out;
  if (x <= kBiSeriesPosLimit) {
    const SeriesParts s = maclaurin(x);
    out.bi = static_cast<double>(kSqrt3 * (kAi0 * s.f + kAip0 * s.g));
    out.bi_prime = static_cast<double>(kSqrt3 * (kAi0 * s.fp + kAip0 * s.gp));
    if (x <= kAiSeriesPosLimit) {
      out.ai = static_cast<double>(kAi0 * s.f - kAip0 * s.g);
      out.ai_prime = static_cast<double>(kAi0 * s.fp - kAip0 * s.gp);
      return out;
    }
  } else {
    bi_positive_asymptotic(x, out);
  }
  const AiryValues k = airy_positive_bessel(x);
  out.ai = k.ai;
  out.ai_prime = k.ai_prime;
  return out;
}

}  // namespace qrho
