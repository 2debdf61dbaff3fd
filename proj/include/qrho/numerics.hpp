#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace qrho {

// ---------------------------------------------------------------------------
// Airy functions
// ---------------------------------------------------------------------------

struct AiryValues {
  double ai = 0.0;
  double bi = 0.0;
  double ai_prime = 0.0;
  double bi_prime = 0.0;
};

/// Ai, Bi and their derivatives for real x with |x| <= 1e4.
///
/// Evaluation regions:
///   x <= -8        oscillatory asymptotic expansion (modulus/phase form)
///   -8 < x <= 2    Maclaurin series in extended precision
///   x > 2          Ai, Ai' from K_{1/3}, K_{2/3} by trapezoidal quadrature of
///                  the cosh integral; Bi, Bi' from the Maclaurin series up to
///                  x = 12 and the exponential asymptotic expansion beyond.
///
/// Relative error is below 1e-12 for |x| <= 30 (relative to the envelope
/// sqrt(Ai^2 + Bi^2) for x < 0). Outside that range the routine stays within
/// the asymptotic truncation error; Ai underflows to 0 for x > ~104 and Bi
/// overflows to +inf for x > ~104.
AiryValues airy(double x);

// ---------------------------------------------------------------------------
// Hermite polynomials
// ---------------------------------------------------------------------------

inline constexpr unsigned kMaxHermiteOrder = 64;

/// Physicists' Hermite polynomial H_n(x), n <= 64, by three-term recurrence.
double hermite(unsigned n, double x);

/// Normalised Hermite value H_n(x) / sqrt(2^n n!), stable for large n.
double hermite_normalized(unsigned n, double x);

/// Gauss-Hermite nodes and weights for weight exp(-x^2).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_hermite(std::size_t n);

// ---------------------------------------------------------------------------
// Adaptive quadrature
// ---------------------------------------------------------------------------

enum class EndpointBehaviour {
  regular,
  inverse_sqrt,  // integrand ~ (z - endpoint)^(-1/2); handled by z = endpoint + u^2
};

struct IntegrationOptions {
  double tol = 1e-10;  // target: |err| <= tol * max(1, |value|)
  std::size_t max_intervals = 4000;
  EndpointBehaviour lower = EndpointBehaviour::regular;
  EndpointBehaviour upper = EndpointBehaviour::regular;
};

struct IntegrationResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
};

using RealFunction = std::function<double(double)>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Globally adaptive Gauss-Kronrod (7/15) quadrature over [a, b].
///
/// Either limit may be infinite. Semi-infinite ranges use x = a + t/(1-t),
/// the doubly infinite range uses x = t/(1-t^2). Inverse square-root endpoint
/// singularities are removed by z = a + u^2 before any range mapping.
/// Throws AccuracyError (with the best estimate) when the subdivision budget
/// runs out before the tolerance is met.
IntegrationResult integrate(const RealFunction& f, double a, double b,
                            const IntegrationOptions& opts = {});

inline IntegrationResult integrate(const RealFunction& f, double a, double b, double tol) {
  IntegrationOptions o;
  o.tol = tol;
  return integrate(f, a, b, o);
}

// ---------------------------------------------------------------------------
// Random streams
// ---------------------------------------------------------------------------

/// Counter-based Philox-4x32-10 stream.
///
/// The key is the 64-bit seed, the upper counter half is the stream id and
/// the lower half is the block index, so distinct (seed, stream_id) pairs
/// never share a counter. Each block yields two uniforms and, by the
/// Box-Muller transform, exactly two normal deviates; consumption never
/// depends on the values drawn.
class RandomStream {
 public:
  RandomStream() = default;
  RandomStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t blocks_used() const noexcept { return block_; }

  /// Stream with the same seed and a different id.
  RandomStream split(std::uint64_t stream_id) const { return RandomStream(seed_, stream_id); }

  /// Raw Philox block for the next counter value.
  std::array<std::uint32_t, 4> next_block();

  /// Uniform deviate in (0, 1].
  double uniform();

  double normal();

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  std::uint64_t block_ = 0;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

inline double normal_deviate(RandomStream& stream) { return stream.normal(); }

}  // namespace qrho
