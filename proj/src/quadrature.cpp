#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "qrho/errors.hpp"
#include "qrho/numerics.hpp"

namespace qrho {
namespace {

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const RealFunction& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = fc * wgk[7];
  double resg = fc * wg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * xgk[j];
    const double f1 = f(c - dx), f2 = f(c + dx);
    resk += wgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += wg[j / 2] * (f1 + f2);
  }
  const double value = resk * h;
  const double err = std::fabs((resk - resg) * h);
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << "integrate: non-finite integrand on [" << a << ", " << b << "]";
    throw AccuracyError(msg.str(), value, kInf);
  }
  return {a, b, value, err};
}

IntegrationResult adapt(const RealFunction& f, double a, double b, double tol, std::size_t max_intervals) {
  std::priority_queue<Segment> heap;
  Segment first = gk15(f, a, b);
  double total = first.value, error = first.error;
  heap.push(first);
  std::size_t evals = 15;
  while (error > tol * std::max(1.0, std::fabs(total))) {
    if (heap.size() >= max_intervals) {
      std::ostringstream msg;
      msg << "integrate: tolerance " << tol << " not reached with " << max_intervals
          << " subintervals (estimate " << total << ", error " << error << ")";
      throw AccuracyError(msg.str(), total, error);
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw AccuracyError("integrate: interval underflow", total, error);
    }
    const Segment l = gk15(f, worst.a, mid), r = gk15(f, mid, worst.b);
    evals += 30;
    total += l.value + r.value - worst.value;
    error += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
    if (heap.size() % 64 == 0) {
      // refresh sums to limit accumulated cancellation
      auto copy = heap;
      total = error = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        error += copy.top().error;
        copy.pop();
      }
    }
  }
  return {total, error, evals};
}

// Maps an (a, b) range with possibly infinite ends onto a finite one.
IntegrationResult integrate_range(const RealFunction& f, double a, double b, double tol, std::size_t cap) {
  const bool ia = std::isinf(a), ib = std::isinf(b);
  if (!ia && !ib) return adapt(f, a, b, tol, cap);
  if (ia && ib) {
    auto g = [&](double t) {
      const double d = 1.0 - t * t;
      if (d <= 0.0) return 0.0;
      const double x = t / d;
      const double v = f(x);
      return v == 0.0 ? 0.0 : v * (1.0 + t * t) / (d * d);
    };
    return adapt(g, -1.0, 1.0, tol, cap);
  }
  if (ib) {
    auto g = [&](double t) {
      const double d = 1.0 - t;
      if (d <= 0.0) return 0.0;
      const double v = f(a + t / d);
      return v == 0.0 ? 0.0 : v / (d * d);
    };
    return adapt(g, 0.0, 1.0, tol, cap);
  }
  auto g = [&](double t) {
    const double d = 1.0 - t;
    if (d <= 0.0) return 0.0;
    const double v = f(b - t / d);
    return v == 0.0 ? 0.0 : v / (d * d);
  };
  return adapt(g, 0.0, 1.0, tol, cap);
}

}  // namespace

IntegrationResult integrate(const RealFunction& f, double a, double b, const IntegrationOptions& opts) {
  if (std::isnan(a) || std::isnan(b) || !(opts.tol > 0.0))
    fail(Errc::domain, "integrate: invalid limits or tolerance");
  if (a == b) return {};
  if (a > b) {
    IntegrationOptions flipped = opts;
    std::swap(flipped.lower, flipped.upper);
    IntegrationResult r = integrate(f, b, a, flipped);
    r.value = -r.value;
    return r;
  }
  const bool sl = opts.lower == EndpointBehaviour::inverse_sqrt;
  const bool su = opts.upper == EndpointBehaviour::inverse_sqrt;
  if ((sl && std::isinf(a)) || (su && std::isinf(b)))
    fail(Errc::domain, "integrate: singular endpoint must be finite");

  if (sl && su) {
    const double mid = 0.5 * (a + b);
    IntegrationOptions lo = opts, hi = opts;
    lo.upper = EndpointBehaviour::regular;
    hi.lower = EndpointBehaviour::regular;
    IntegrationResult r1 = integrate(f, a, mid, lo);
    IntegrationResult r2 = integrate(f, mid, b, hi);
    return {r1.value + r2.value, r1.error + r2.error, r1.evaluations + r2.evaluations};
  }
  if (sl) {
    auto g = [&](double u) { return u == 0.0 ? 0.0 : 2.0 * u * f(a + u * u); };
    const double ub = std::isinf(b) ? kInf : std::sqrt(b - a);
    return integrate_range(g, 0.0, ub, opts.tol, opts.max_intervals);
  }
  if (su) {
    auto g = [&](double u) { return u == 0.0 ? 0.0 : 2.0 * u * f(b - u * u); };
    const double ub = std::isinf(a) ? kInf : std::sqrt(b - a);
    return integrate_range(g, 0.0, ub, opts.tol, opts.max_intervals);
  }
  return integrate_range(f, a, b, opts.tol, opts.max_intervals);
}

}  // namespace qrho
