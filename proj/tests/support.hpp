#pragma once

// Test-only numerical references, deliberately independent of the library
// code paths they check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace support {

inline double rel(double value, double expected) {
  return std::abs(value - expected) / std::max(std::abs(expected), 1e-300);
}

/// Trapezoid rule in long double. Spectrally accurate for integrands that
/// decay to zero at both ends, so it serves as a reference for the Simpson
/// based library quadrature on oscillator states.
inline long double trapezoid(const std::function<long double(long double)>& f, long double lo,
                             long double hi, int intervals) {
  const long double h = (hi - lo) / intervals;
  long double sum = 0.5L * (f(lo) + f(hi));
  for (int i = 1; i < intervals; ++i) sum += f(lo + i * h);
  return sum * h;
}

/// Cyclic Jacobi rotations for a small dense symmetric matrix. Returns the
/// eigenvalues in ascending order.
inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace support
