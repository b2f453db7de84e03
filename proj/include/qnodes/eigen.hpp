#pragma once

#include <span>
#include <vector>

#include "qnodes/analytic.hpp"
#include "qnodes/core.hpp"
#include "qnodes/grid.hpp"

namespace qnodes::eigen {

enum class Topology { tridiagonal, periodic_tridiagonal };

/// Three-point finite-difference Hamiltonian -hbar^2/(2 mu) d^2/dq^2 + V(q).
/// Dirichlet and open grids drop the two end nodes (psi = 0 there); the
/// periodic grid couples its first and last nodes.
struct Hamiltonian {
  GridSpec grid;
  std::vector<double> diagonal;
  double off_diagonal = 0.0;
  Topology topology = Topology::tridiagonal;
  /// Grid index of the first unknown.
  int first_node = 0;

  int dimension() const { return static_cast<int>(diagonal.size()); }

  /// y = H x.
  std::vector<double> apply(std::span<const double> x) const;

  /// Row-major dense copy; for inspection and tests.
  std::vector<std::vector<double>> dense() const;

  /// max_i sum_j |H_ij|.
  double norm_inf() const;
};

/// GridError when the grid topology does not match the system.
Hamiltonian build_hamiltonian(const SystemSpec& spec, const GridSpec& grid);

/// Number of eigenvalues of H strictly below `shift` (Sylvester inertia).
int count_below(const Hamiltonian& h, double shift);

struct EigenResult {
  std::vector<double> energies;
  std::vector<SampledFunction> states;
  std::vector<double> residuals;
};

/// The k lowest eigenpairs by Sturm bisection and inverse iteration. States
/// are normalized by quadrature on the full grid with their leading lobe
/// positive; residuals are ||H v - E v|| for unit Euclidean v.
/// GridError if k exceeds the dimension, ConvergenceError if inverse
/// iteration stalls.
EigenResult solve_lowest(const Hamiltonian& h, int k);

/// Position of a level in the ascending spectrum. Ring: m = 0 -> 0,
/// m > 0 -> 2m - 1, m < 0 -> 2|m|; the two members of a degenerate pair are
/// arbitrary orthonormal combinations of psi_{+m} and psi_{-m}.
int spectrum_index(const SystemSpec& spec, StateIndex idx);
StateIndex level_at(const SystemSpec& spec, int index);

/// True when the eigenvector at `index` belongs to a degenerate subspace.
bool degenerate(const SystemSpec& spec, int index);

/// Uncertainties of eigenvector `index` by the oracle moment routines, with
/// the eigenvalue as energy and a measured node count (omitted inside
/// degenerate subspaces).
UncertaintyRecord eigen_uncertainties(const SystemSpec& spec, const EigenResult& r, int index);

}  // namespace qnodes::eigen
