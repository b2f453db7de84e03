#pragma once

#include "qnodes/analytic.hpp"
#include "qnodes/core.hpp"
#include "qnodes/grid.hpp"

namespace qnodes::oracle {

inline constexpr int default_points = 4001;
inline constexpr int default_ring_points = 4096;

/// Allowed |norm - 1| before moments refuse a state.
inline constexpr double normalization_tolerance = 1e-6;

/// Half width of the derivative stencil (9 points, eighth order).
inline constexpr int stencil_half_width = 4;

/// Relative gap between the three-point and the nine-point <p^2> above which
/// the grid is declared too coarse for the state.
inline constexpr double coarse_grid_tolerance = 5e-2;

/// Half width of the oscillator domain in units of the oscillator length:
/// max(8 sqrt(2n + 1), 12).
double oscillator_half_width(int n);

/// Default grid able to resolve every level up to `highest`:
/// box [0, a] dirichlet, oscillator [-L, L] open, ring [0, 2 pi) periodic.
GridSpec default_grid(const SystemSpec& spec, StateIndex highest, int points = 0);

/// GridError unless the grid topology suits the system (box dirichlet,
/// oscillator open, ring periodic).
void check_grid(const SystemSpec& spec, const GridSpec& grid);

SampledFunction sample_state(const SystemSpec& spec, StateIndex idx, const GridSpec& grid);
SampledFunction sample_superposition(const RingSuperposition& state, const GridSpec& grid);

/// Integral of |psi|^2.
double norm(const SampledFunction& psi);

struct Moments {
  double mean = 0.0;
  double mean_sq = 0.0;
  /// sqrt(<(A - <A>)^2>), integrated in centered form.
  double spread = 0.0;
};

/// <x>, <x^2> and Delta x by quadrature of |psi|^2. On periodic grids the
/// coordinate is the angle on the branch [lower, upper).
Moments position_moments(const SampledFunction& psi);

/// <p>, <p^2> = hbar^2 int |psi'|^2 and Delta p from finite differences.
/// Throws GridError when the grid under-resolves the state.
Moments momentum_moments(const SampledFunction& psi, const Constants& constants);

/// -hbar^2 int psi* psi'' dx; the integration-by-parts partner of
/// momentum_moments().mean_sq.
double momentum_square_laplacian_form(const SampledFunction& psi, const Constants& constants);

/// Uncertainties of an arbitrary sampled state of `spec`. nodes_predicted
/// is left at zero.
UncertaintyRecord uncertainties_from_samples(const SystemSpec& spec, const SampledFunction& psi);

UncertaintyRecord oracle_uncertainties(const SystemSpec& spec, StateIndex idx, const GridSpec& grid);

}  // namespace qnodes::oracle
