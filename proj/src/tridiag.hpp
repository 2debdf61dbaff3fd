#pragma once

#include <cstddef>
#include <vector>

namespace qrho::detail {

// Row i: lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1], plus corner * x[0] in the last row.
struct Tridiagonal {
  std::vector<double> lower, diag, upper;
  double corner = 0.0;

  explicit Tridiagonal(std::size_t n = 0) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
  std::size_t size() const { return diag.size(); }

  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    const std::size_t n = size();
    y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      double v = diag[i] * x[i];
      if (i > 0) v += lower[i] * x[i - 1];
      if (i + 1 < n) v += upper[i] * x[i + 1];
      y[i] = v;
    }
    y[n - 1] += corner * x[0];
  }
};

// Thomas algorithm, in place on rhs.
inline void thomas(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& c,
                   std::vector<double>& rhs, std::vector<double>& work) {
  const std::size_t n = b.size();
  work.resize(n);
  double beta = b[0];
  rhs[0] /= beta;
  for (std::size_t i = 1; i < n; ++i) {
    work[i] = c[i - 1] / beta;
    beta = b[i] - a[i] * work[i];
    rhs[i] = (rhs[i] - a[i] * rhs[i - 1]) / beta;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= work[i + 1] * rhs[i + 1];
}

// Solves M x = rhs with the corner entry by Sherman-Morrison; rhs is overwritten with x.
inline void solve(const Tridiagonal& m, std::vector<double>& rhs) {
  std::vector<double> work;
  thomas(m.lower, m.diag, m.upper, rhs, work);
  if (m.corner == 0.0) return;
  const std::size_t n = m.size();
  std::vector<double> z(n, 0.0);
  z[n - 1] = m.corner;
  thomas(m.lower, m.diag, m.upper, z, work);
  const double f = rhs[0] / (1.0 + z[0]);
  for (std::size_t i = 0; i < n; ++i) rhs[i] -= f * z[i];
}

}  // namespace qrho::detail
