#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include "qnodes/errors.hpp"

namespace qnodes {

enum class Boundary { dirichlet, periodic, open };

std::string_view to_string(Boundary b);

/// Uniform grid over [lower, upper]. Dirichlet and open grids include both
/// endpoints and need an odd point count (composite Simpson). Periodic grids
/// exclude the upper endpoint, which duplicates the lower one; their point
/// count must be even so that the closed node set is odd.
class GridSpec {
 public:
  GridSpec(double lower, double upper, int points, Boundary boundary);

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  int points() const { return points_; }
  Boundary boundary() const { return boundary_; }
  bool periodic() const { return boundary_ == Boundary::periodic; }

  double spacing() const;
  double node(int i) const { return lower_ + i * spacing(); }
  std::vector<double> nodes() const;

  /// Same bounds and boundary with `points` replaced.
  GridSpec with_points(int points) const { return {lower_, upper_, points, boundary_}; }

 private:
  double lower_;
  double upper_;
  int points_;
  Boundary boundary_;
};

/// Complex samples of a wavefunction on a grid.
class SampledFunction {
 public:
  SampledFunction(GridSpec grid, std::vector<std::complex<double>> values);

  const GridSpec& grid() const { return grid_; }
  const std::vector<std::complex<double>>& values() const { return values_; }

  std::vector<double> real_part() const;
  std::vector<double> density() const;

 private:
  GridSpec grid_;
  std::vector<std::complex<double>> values_;
};

/// Composite Simpson rule over equally spaced samples; GridError unless the
/// sample count is odd and at least 3.
double simpson(std::span<const double> samples, double spacing);

/// Integral of `integrand` (one value per grid point) over the grid's
/// domain. On periodic grids the integrand is taken to be periodic and the
/// closing node reuses the first sample.
double quad(const GridSpec& grid, std::span<const double> integrand);

/// Finite-difference weights for the `derivative`-th derivative at `x0`
/// from arbitrary nodes (Fornberg's recursion).
std::vector<double> fd_weights(int derivative, double x0, std::span<const double> nodes);

/// Derivative of sampled values using a (2 * half_width + 1)-point stencil:
/// centered with wraparound on periodic grids, shifted one-sided near the
/// ends otherwise. half_width = 1 is the classic three-point formula.
std::vector<std::complex<double>> differentiate(const SampledFunction& f, int derivative,
                                                int half_width);

}  // namespace qnodes
