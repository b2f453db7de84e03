#include "qnodes/special.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace qnodes::special {

namespace {
// Rescale threshold for the scaled recurrence; 2^400 keeps products of two
// consecutive terms well inside the double range.
constexpr int rescale_bits = 400;
const double rescale_limit = std::ldexp(1.0, rescale_bits);
}  // namespace

double hermite(int n, double x) {
  if (n < 0) throw DomainError("hermite: degree must be >= 0");
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
    if (!std::isfinite(cur))
      throw OverflowError("hermite: H_" + std::to_string(k + 1) + "(" + std::to_string(x) +
                          ") exceeds double range");
  }
  return cur;
}

ScaledHermite hermite_scaled(int n, double x) {
  if (n < 0) throw DomainError("hermite: degree must be >= 0");
  double prev = 1.0;
  double cur = n == 0 ? 1.0 : 2.0 * x;
  int exponent = 0;  // value = cur * 2^exponent
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > rescale_limit) {
      cur = std::ldexp(cur, -rescale_bits);
      prev = std::ldexp(prev, -rescale_bits);
      exponent += rescale_bits;
    }
  }
  if (cur == 0.0) return {0, -std::numeric_limits<double>::infinity()};
  return {cur > 0 ? 1 : -1, std::log(std::abs(cur)) + exponent * std::log(2.0)};
}

double log_factorial(int n) {
  double sum = 0.0;
  for (int k = 2; k <= n; ++k) sum += std::log(static_cast<double>(k));
  return sum;
}

double oscillator_length(const SystemSpec& spec) {
  const auto& osc = spec.as_oscillator();
  return std::sqrt(spec.hbar() / (osc.mass * osc.omega));
}

double oscillator_psi(const SystemSpec& spec, int n, double x) {
  validate_state(spec, StateIndex{n});
  if (n > max_oscillator_level)
    throw OverflowError("oscillator_psi: level " + std::to_string(n) + " beyond supported " +
                        std::to_string(max_oscillator_level));
  const double ell = oscillator_length(spec);
  const double xi = x / ell;
  const auto h = hermite_scaled(n, xi);
  if (h.sign == 0) return 0.0;
  const double log_norm =
      -0.5 * std::log(ell) - 0.25 * std::log(pi) - 0.5 * (n * std::log(2.0) + log_factorial(n));
  return h.sign * std::exp(log_norm + h.log_abs - 0.5 * xi * xi);
}

}  // namespace qnodes::special
