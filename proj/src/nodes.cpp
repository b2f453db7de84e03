#include "qnodes/nodes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qnodes::nodes {

namespace {

double interpolate_zero(double x0, double f0, double x1, double f1) {
  return x0 + (x1 - x0) * f0 / (f0 - f1);
}

}  // namespace

NodeReport count_nodes(std::span<const double> values, const GridSpec& grid) {
  const int n = static_cast<int>(values.size());
  if (n != grid.points()) throw GridError("sample count does not match grid");

  double peak = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw DegenerateError("non-finite sample");
    peak = std::max(peak, std::abs(v));
  }
  if (peak == 0.0) throw DegenerateError("function is identically zero");
  const double eps = zero_threshold * peak;

  std::vector<int> significant;
  for (int i = 0; i < n; ++i)
    if (std::abs(values[i]) > eps) significant.push_back(i);

  const int first = significant.front();
  const int last = significant.back();
  const int span = grid.periodic() ? n : last - first + 1;
  const int below = span - static_cast<int>(significant.size());
  if (2 * below > span)
    throw DegenerateError(std::to_string(below) + " of " + std::to_string(span) +
                          " samples inside the support are numerically zero");

  const auto x = grid.nodes();
  const double h = grid.spacing();
  NodeReport report;
  std::vector<double> found;
  for (std::size_t k = 1; k < significant.size(); ++k) {
    const int i = significant[k - 1];
    const int j = significant[k];
    if ((values[i] > 0) != (values[j] > 0))
      found.push_back(interpolate_zero(x[i], values[i], x[j], values[j]));
  }
  if (grid.periodic() && significant.size() > 1 && (values[last] > 0) != (values[first] > 0)) {
    const double period = grid.upper() - grid.lower();
    double loc = interpolate_zero(x[last], values[last], x[first] + period, values[first]);
    if (loc >= grid.upper()) loc -= period;
    found.push_back(loc);
  }
  std::sort(found.begin(), found.end());

  for (double loc : found) {
    if (grid.boundary() == Boundary::dirichlet &&
        (loc - grid.lower() < h || grid.upper() - loc < h)) {
      ++report.boundary_excluded;
      continue;
    }
    report.locations.push_back(loc);
  }
  report.count = static_cast<int>(report.locations.size());
  return report;
}

NodeReport count_nodes(const SampledFunction& psi) {
  const auto re = psi.real_part();
  return count_nodes(re, psi.grid());
}

Flatness density_flatness(std::span<const double> density) {
  Flatness out;
  if (density.empty()) return out;
  const auto [lo, hi] = std::minmax_element(density.begin(), density.end());
  const double lowest = *lo, highest = *hi;
  // Shifted mean: exactly `lowest` when every sample is identical.
  double excess = 0.0;
  for (double r : density) excess += r - lowest;
  const double mean = lowest + excess / static_cast<double>(density.size());
  for (double r : density) out.max_deviation = std::max(out.max_deviation, std::abs(r - mean));
  out.is_nodeless = lowest > zero_threshold * highest;
  return out;
}

}  // namespace qnodes::nodes
