#pragma once

#include "qnodes/core.hpp"

namespace qnodes::special {

/// Highest oscillator level whose eigenfunction is supported.
inline constexpr int max_oscillator_level = 200;

/// Physicists' Hermite polynomial H_n(x) by forward recurrence
/// H_{k+1} = 2x H_k - 2k H_{k-1}. Throws OverflowError when the value
/// leaves the double range.
double hermite(int n, double x);

/// H_n(x) = sign * exp(log_abs), computed with a rescaled recurrence so it
/// never overflows. sign is 0 (and log_abs -inf) at an exact zero.
struct ScaledHermite {
  int sign = 0;
  double log_abs = 0.0;
};
ScaledHermite hermite_scaled(int n, double x);

/// sum_{k=1}^{n} log k.
double log_factorial(int n);

/// Oscillator length scale sqrt(hbar / (m omega)).
double oscillator_length(const SystemSpec& spec);

/// Normalized oscillator eigenfunction
/// (m w / pi hbar)^{1/4} (2^n n!)^{-1/2} H_n(xi) exp(-xi^2/2), xi = x / oscillator_length.
/// Supported for 0 <= n <= max_oscillator_level; OverflowError beyond.
double oscillator_psi(const SystemSpec& spec, int n, double x);

}  // namespace qnodes::special
