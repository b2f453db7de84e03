#include "qnodes/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qnodes/special.hpp"

namespace qnodes::oracle {

namespace {

// Closed node set and |psi|^2 on it; periodic grids repeat the first sample
// at the upper end.
struct ClosedDensity {
  std::vector<double> x;
  std::vector<double> rho;
};

ClosedDensity closed_density(const SampledFunction& psi) {
  ClosedDensity d{psi.grid().nodes(), psi.density()};
  if (psi.grid().periodic()) {
    d.x.push_back(psi.grid().upper());
    d.rho.push_back(d.rho.front());
  }
  return d;
}

void require_normalized(const SampledFunction& psi) {
  const double n = norm(psi);
  if (!(std::abs(n - 1.0) <= normalization_tolerance))
    throw NormalizationError("state norm " + std::to_string(n) + " deviates from 1 by more than " +
                             std::to_string(normalization_tolerance));
}

}  // namespace

double oscillator_half_width(int n) { return std::max(8.0 * std::sqrt(2.0 * n + 1.0), 12.0); }

GridSpec default_grid(const SystemSpec& spec, StateIndex highest, int points) {
  switch (spec.kind()) {
    case SystemKind::box:
      return {0.0, spec.as_box().length, points ? points : default_points, Boundary::dirichlet};
    case SystemKind::ring:
      return {0.0, 2.0 * pi, points ? points : default_ring_points, Boundary::periodic};
    case SystemKind::oscillator: {
      const double half =
          oscillator_half_width(std::max(highest.value, 0)) * special::oscillator_length(spec);
      return {-half, half, points ? points : default_points, Boundary::open};
    }
  }
  throw DomainError("unknown system");
}

void check_grid(const SystemSpec& spec, const GridSpec& grid) {
  Boundary expected = Boundary::open;
  switch (spec.kind()) {
    case SystemKind::box: expected = Boundary::dirichlet; break;
    case SystemKind::ring: expected = Boundary::periodic; break;
    case SystemKind::oscillator: expected = Boundary::open; break;
  }
  if (grid.boundary() != expected)
    throw GridError(std::string(to_string(spec.kind())) + " needs a " +
                    std::string(to_string(expected)) + " grid, got " +
                    std::string(to_string(grid.boundary())));
  if (spec.kind() == SystemKind::box &&
      (grid.lower() != 0.0 || grid.upper() != spec.as_box().length))
    throw GridError("box grid must span exactly [0, a]");
}

SampledFunction sample_state(const SystemSpec& spec, StateIndex idx, const GridSpec& grid) {
  check_grid(spec, grid);
  validate_state(spec, idx);
  const auto x = grid.nodes();
  std::vector<std::complex<double>> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    switch (spec.kind()) {
      case SystemKind::box: v[i] = analytic::box_psi(spec, idx.value, x[i]); break;
      case SystemKind::ring: v[i] = analytic::ring_psi(spec, idx.value, x[i]); break;
      case SystemKind::oscillator: v[i] = special::oscillator_psi(spec, idx.value, x[i]); break;
    }
  }
  return {grid, std::move(v)};
}

SampledFunction sample_superposition(const RingSuperposition& state, const GridSpec& grid) {
  if (!grid.periodic()) throw GridError("ring superposition needs a periodic grid");
  const auto x = grid.nodes();
  const double amp = 1.0 / std::sqrt(2.0 * pi);
  std::vector<std::complex<double>> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (const auto& t : state.terms()) v[i] += t.coefficient * std::polar(amp, t.m * x[i]);
  return {grid, std::move(v)};
}

double norm(const SampledFunction& psi) { return quad(psi.grid(), psi.density()); }

Moments position_moments(const SampledFunction& psi) {
  require_normalized(psi);
  const auto d = closed_density(psi);
  const double h = psi.grid().spacing();
  std::vector<double> f(d.x.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = d.x[i] * d.rho[i];
  Moments m;
  m.mean = simpson(f, h);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = d.x[i] * d.x[i] * d.rho[i];
  m.mean_sq = simpson(f, h);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double dx = d.x[i] - m.mean;
    f[i] = dx * dx * d.rho[i];
  }
  m.spread = std::sqrt(std::max(simpson(f, h), 0.0));
  return m;
}

Moments momentum_moments(const SampledFunction& psi, const Constants& constants) {
  require_normalized(psi);
  const double hbar = constants.hbar();
  const auto& grid = psi.grid();
  const auto& v = psi.values();
  const auto d1 = differentiate(psi, 1, stencil_half_width);
  const auto n = v.size();

  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = std::imag(std::conj(v[i]) * d1[i]);
  Moments m;
  m.mean = hbar * quad(grid, f);
  for (std::size_t i = 0; i < n; ++i) f[i] = std::norm(d1[i]);
  m.mean_sq = hbar * hbar * quad(grid, f);
  for (std::size_t i = 0; i < n; ++i) {
    const auto dev = std::complex<double>(0.0, -hbar) * d1[i] - m.mean * v[i];
    f[i] = std::norm(dev);
  }
  m.spread = std::sqrt(std::max(quad(grid, f), 0.0));

  // Three-point estimate; its gap to the nine-point value is the
  // discretization error of the coarse stencil.
  const auto d1_coarse = differentiate(psi, 1, 1);
  for (std::size_t i = 0; i < n; ++i) f[i] = std::norm(d1_coarse[i]);
  const double coarse = hbar * hbar * quad(grid, f);
  const double width = grid.upper() - grid.lower();
  const double floor = 1e-10 * hbar * hbar / (width * width);
  if (std::abs(coarse - m.mean_sq) > coarse_grid_tolerance * m.mean_sq + floor)
    throw GridError("grid of " + std::to_string(grid.points()) +
                    " points is too coarse: three-point and nine-point <p^2> differ by " +
                    std::to_string(std::abs(coarse - m.mean_sq) / std::max(m.mean_sq, floor)) +
                    " relative");
  return m;
}

double momentum_square_laplacian_form(const SampledFunction& psi, const Constants& constants) {
  require_normalized(psi);
  const auto d2 = differentiate(psi, 2, stencil_half_width);
  const auto& v = psi.values();
  std::vector<double> f(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) f[i] = std::real(std::conj(v[i]) * d2[i]);
  return -constants.hbar() * constants.hbar() * quad(psi.grid(), f);
}

UncertaintyRecord uncertainties_from_samples(const SystemSpec& spec, const SampledFunction& psi) {
  check_grid(spec, psi.grid());
  const auto q = position_moments(psi);
  const auto p = momentum_moments(psi, spec.constants());
  UncertaintyRecord r;
  r.delta_q = q.spread;
  r.delta_p = p.spread;
  r.product = r.delta_q * r.delta_p;
  r.bound = spec.hbar() / 2.0;
  r.provenance = Provenance::oracle;
  switch (spec.kind()) {
    case SystemKind::box: r.energy = p.mean_sq / (2.0 * spec.as_box().mass); break;
    case SystemKind::ring: r.energy = p.mean_sq / (2.0 * spec.as_ring().inertia); break;
    case SystemKind::oscillator: {
      const auto& osc = spec.as_oscillator();
      r.energy = p.mean_sq / (2.0 * osc.mass) + 0.5 * osc.mass * osc.omega * osc.omega * q.mean_sq;
      break;
    }
  }
  return r;
}

UncertaintyRecord oracle_uncertainties(const SystemSpec& spec, StateIndex idx, const GridSpec& grid) {
  auto r = uncertainties_from_samples(spec, sample_state(spec, idx, grid));
  r.nodes_predicted = predicted_node_count(spec, idx);
  return r;
}

}  // namespace qnodes::oracle
