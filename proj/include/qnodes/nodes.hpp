#pragma once

#include <span>
#include <vector>

#include "qnodes/grid.hpp"

namespace qnodes::nodes {

/// Samples with |f| <= zero_threshold * max|f| count as zero.
inline constexpr double zero_threshold = 1e-9;

struct NodeReport {
  int count = 0;
  std::vector<double> locations;
  int boundary_excluded = 0;
};

/// Counts sign changes of real samples on `grid`. Samples below the zero
/// threshold are bridged, so a touching zero without a sign change is not a
/// node. Node positions are linearly interpolated. On dirichlet grids,
/// zeros within one cell of a wall are dropped and tallied separately; on
/// periodic grids the last-to-first pair is checked as well.
///
/// Throws DegenerateError when the samples are identically zero or when more
/// than half of the samples between the first and last significant ones are
/// below the threshold.
NodeReport count_nodes(std::span<const double> values, const GridSpec& grid);

/// Node count of Re(psi).
NodeReport count_nodes(const SampledFunction& psi);

struct Flatness {
  double max_deviation = 0.0;
  bool is_nodeless = false;
};

/// max |rho - mean(rho)|, and whether min(rho) stays above the zero
/// threshold relative to max(rho).
Flatness density_flatness(std::span<const double> density);

}  // namespace qnodes::nodes
