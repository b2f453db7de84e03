#include "qnodes/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "qnodes/nodes.hpp"
#include "qnodes/oracle.hpp"

namespace qnodes::eigen {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();
constexpr int max_inverse_iterations = 12;

// General band LU with partial pivoting. Row r stores columns
// [r - kl, r + kl + ku]; the extra kl columns hold pivoting fill.
class BandLU {
 public:
  BandLU(int n, int kl, int ku)
      : n_(n), kl_(kl), ku_(ku), w_(2 * kl + ku + 1), a_(static_cast<std::size_t>(n) * w_),
        mult_(static_cast<std::size_t>(n) * kl), piv_(n) {}

  double& at(int r, int c) { return a_[static_cast<std::size_t>(r) * w_ + (c - r + kl_)]; }

  void factor(double pivot_floor) {
    for (int i = 0; i < n_; ++i) {
      const int last = std::min(n_ - 1, i + kl_);
      const int right = std::min(n_ - 1, i + kl_ + ku_);
      int p = i;
      for (int r = i + 1; r <= last; ++r)
        if (std::abs(at(r, i)) > std::abs(at(p, i))) p = r;
      piv_[i] = p;
      if (p != i)
        for (int c = i; c <= right; ++c) std::swap(at(i, c), at(p, c));
      // Exactly singular shifts are expected in inverse iteration.
      if (std::abs(at(i, i)) < pivot_floor) at(i, i) = at(i, i) < 0 ? -pivot_floor : pivot_floor;
      for (int r = i + 1; r <= last; ++r) {
        const double f = at(r, i) / at(i, i);
        mult_[static_cast<std::size_t>(i) * kl_ + (r - i - 1)] = f;
        at(r, i) = 0.0;
        for (int c = i + 1; c <= right; ++c) at(r, c) -= f * at(i, c);
      }
    }
  }

  void solve(std::vector<double>& b) {
    for (int i = 0; i < n_; ++i) {
      std::swap(b[i], b[piv_[i]]);
      const int last = std::min(n_ - 1, i + kl_);
      for (int r = i + 1; r <= last; ++r)
        b[r] -= mult_[static_cast<std::size_t>(i) * kl_ + (r - i - 1)] * b[i];
    }
    for (int i = n_ - 1; i >= 0; --i) {
      double s = b[i];
      const int right = std::min(n_ - 1, i + kl_ + ku_);
      for (int c = i + 1; c <= right; ++c) s -= at(i, c) * b[c];
      b[i] = s / at(i, i);
    }
  }

 private:
  int n_, kl_, ku_, w_;
  std::vector<double> a_;
  std::vector<double> mult_;
  std::vector<int> piv_;
};

// Ordering 0, n-1, 1, n-2, ... that turns a periodic tridiagonal matrix into
// a pentadiagonal one. position[original] = permuted index.
std::vector<int> folded_positions(int n) {
  std::vector<int> pos(n);
  const int front = (n + 1) / 2;
  for (int i = 0; i < front; ++i) pos[i] = 2 * i;
  for (int j = 0; front + j < n; ++j) pos[n - 1 - j] = 2 * j + 1;
  return pos;
}

class ShiftedSolver {
 public:
  ShiftedSolver(const Hamiltonian& h, double shift)
      : periodic_(h.topology == Topology::periodic_tridiagonal),
        n_(h.dimension()),
        lu_(n_, periodic_ ? 2 : 1, periodic_ ? 2 : 1) {
    pos_.resize(n_);
    if (periodic_)
      pos_ = folded_positions(n_);
    else
      std::iota(pos_.begin(), pos_.end(), 0);
    for (int i = 0; i < n_; ++i) lu_.at(pos_[i], pos_[i]) = h.diagonal[i] - shift;
    const int links = periodic_ ? n_ : n_ - 1;
    for (int i = 0; i < links; ++i) {
      const int j = (i + 1) % n_;
      lu_.at(pos_[i], pos_[j]) += h.off_diagonal;
      lu_.at(pos_[j], pos_[i]) += h.off_diagonal;
    }
    lu_.factor(eps * h.norm_inf());
  }

  std::vector<double> solve(std::span<const double> rhs) {
    std::vector<double> b(n_);
    for (int i = 0; i < n_; ++i) b[pos_[i]] = rhs[i];
    lu_.solve(b);
    std::vector<double> x(n_);
    for (int i = 0; i < n_; ++i) x[i] = b[pos_[i]];
    return x;
  }

 private:
  bool periodic_;
  int n_;
  BandLU lu_;
  std::vector<int> pos_;
};

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double euclid(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double kinetic_coefficient(const SystemSpec& spec) {
  const double hbar = spec.hbar();
  switch (spec.kind()) {
    case SystemKind::box: return hbar * hbar / (2.0 * spec.as_box().mass);
    case SystemKind::ring: return hbar * hbar / (2.0 * spec.as_ring().inertia);
    case SystemKind::oscillator: return hbar * hbar / (2.0 * spec.as_oscillator().mass);
  }
  return 0.0;
}

}  // namespace

std::vector<double> Hamiltonian::apply(std::span<const double> x) const {
  const int n = dimension();
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) {
    double s = diagonal[i] * x[i];
    if (i > 0) s += off_diagonal * x[i - 1];
    if (i + 1 < n) s += off_diagonal * x[i + 1];
    if (topology == Topology::periodic_tridiagonal) {
      if (i == 0) s += off_diagonal * x[n - 1];
      if (i == n - 1) s += off_diagonal * x[0];
    }
    y[i] = s;
  }
  return y;
}

std::vector<std::vector<double>> Hamiltonian::dense() const {
  const int n = dimension();
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    m[i][i] = diagonal[i];
    if (i + 1 < n) m[i][i + 1] = m[i + 1][i] = off_diagonal;
  }
  if (topology == Topology::periodic_tridiagonal) {
    m[0][n - 1] += off_diagonal;
    m[n - 1][0] += off_diagonal;
  }
  return m;
}

double Hamiltonian::norm_inf() const {
  double best = 0.0;
  for (double d : diagonal) best = std::max(best, std::abs(d) + 2.0 * std::abs(off_diagonal));
  return best;
}

Hamiltonian build_hamiltonian(const SystemSpec& spec, const GridSpec& grid) {
  oracle::check_grid(spec, grid);
  const double h = grid.spacing();
  const double t = kinetic_coefficient(spec) / (h * h);
  Hamiltonian H{grid, {}, -t, Topology::tridiagonal, 1};
  const auto x = grid.nodes();
  if (spec.kind() == SystemKind::ring) {
    H.topology = Topology::periodic_tridiagonal;
    H.first_node = 0;
    H.diagonal.assign(x.size(), 2.0 * t);
    return H;
  }
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    double v = 0.0;
    if (spec.kind() == SystemKind::oscillator) {
      const auto& osc = spec.as_oscillator();
      v = 0.5 * osc.mass * osc.omega * osc.omega * x[i] * x[i];
    }
    H.diagonal.push_back(2.0 * t + v);
  }
  return H;
}

int count_below(const Hamiltonian& h, double shift) {
  const int n = h.dimension();
  const double e = h.off_diagonal;
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, e * e);
  auto sturm = [&](int size) {
    int count = 0;
    double d = 0.0;
    for (int i = 0; i < size; ++i) {
      d = h.diagonal[i] - shift - (i > 0 ? e * e / d : 0.0);
      if (std::abs(d) < pivmin) d = -pivmin;
      count += d < 0;
    }
    return count;
  };
  if (h.topology == Topology::tridiagonal) return sturm(n);

  // Periodic: inertia of the leading (n-1) block plus the sign of the Schur
  // complement of the last row. The leading block has eigenvalues on top of
  // every degenerate pair, so the border solve needs partial pivoting; an
  // unpivoted LDL^T recurrence loses all accuracy there.
  const int m = n - 1;
  BandLU lu(m, 1, 1);
  for (int i = 0; i < m; ++i) {
    lu.at(i, i) = h.diagonal[i] - shift;
    if (i + 1 < m) lu.at(i, i + 1) = lu.at(i + 1, i) = e;
  }
  lu.factor(eps * h.norm_inf());
  std::vector<double> z(m, 0.0);
  z[0] += e;
  z[m - 1] += e;
  lu.solve(z);
  const double schur = h.diagonal[m] - shift - e * (z[0] + z[m - 1]);
  return sturm(m) + (schur < 0);
}

EigenResult solve_lowest(const Hamiltonian& h, int k) {
  const int n = h.dimension();
  if (k < 1) throw DomainError("solve_lowest: need at least one eigenpair");
  if (k > n)
    throw GridError("solve_lowest: " + std::to_string(k) + " states requested but the grid has only " +
                    std::to_string(n) + " unknowns");

  double lo = std::numeric_limits<double>::max();
  double hi = std::numeric_limits<double>::lowest();
  for (double d : h.diagonal) {
    lo = std::min(lo, d - 2.0 * std::abs(h.off_diagonal));
    hi = std::max(hi, d + 2.0 * std::abs(h.off_diagonal));
  }

  EigenResult out;
  for (int j = 0; j < k; ++j) {
    double a = lo, b = hi;
    for (int it = 0; it < 256; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (count_below(h, mid) > j)
        b = mid;
      else
        a = mid;
    }
    out.energies.push_back(0.5 * (a + b));
  }

  const double scale = std::max(std::abs(out.energies.front()), std::abs(out.energies.back()));
  const double tolerance = std::max(1e-8 * scale, 100.0 * eps * h.norm_inf());

  std::vector<std::vector<double>> vectors;
  for (int j = 0; j < k; ++j) {
    const double energy = out.energies[j];
    ShiftedSolver solver(h, energy);
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL + j);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    std::vector<double> x(n);
    for (auto& v : x) v = uniform(rng);

    double residual = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_inverse_iterations && residual > tolerance; ++it) {
      auto y = solver.solve(x);
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& prev : vectors) {
          const double c = dot(y, prev);
          for (int i = 0; i < n; ++i) y[i] -= c * prev[i];
        }
      const double len = euclid(y);
      if (!(len > 0.0) || !std::isfinite(len))
        throw ConvergenceError("inverse iteration collapsed for eigenpair " + std::to_string(j));
      for (int i = 0; i < n; ++i) x[i] = y[i] / len;
      auto hx = h.apply(x);
      for (int i = 0; i < n; ++i) hx[i] -= energy * x[i];
      residual = euclid(hx);
    }
    if (residual > tolerance)
      throw ConvergenceError("inverse iteration for eigenpair " + std::to_string(j) +
                             " stalled at residual " + std::to_string(residual));
    vectors.push_back(x);
    out.residuals.push_back(residual);
  }

  const auto& grid = h.grid;
  for (auto& v : vectors) {
    std::vector<std::complex<double>> full(grid.points());
    for (int i = 0; i < n; ++i) full[h.first_node + i] = v[i];

    double peak = 0.0;
    for (double c : v) peak = std::max(peak, std::abs(c));
    const auto lead = std::find_if(v.begin(), v.end(), [&](double c) {
      return std::abs(c) > nodes::zero_threshold * peak;
    });
    const double sign = *lead < 0 ? -1.0 : 1.0;

    std::vector<double> density(full.size());
    for (std::size_t i = 0; i < full.size(); ++i) density[i] = std::norm(full[i]);
    const double factor = sign / std::sqrt(quad(grid, density));
    for (auto& c : full) c *= factor;
    out.states.emplace_back(grid, std::move(full));
  }
  return out;
}

int spectrum_index(const SystemSpec& spec, StateIndex idx) {
  validate_state(spec, idx);
  const int q = idx.value;
  switch (spec.kind()) {
    case SystemKind::box: return q - 1;
    case SystemKind::oscillator: return q;
    case SystemKind::ring: return q == 0 ? 0 : (q > 0 ? 2 * q - 1 : -2 * q);
  }
  return 0;
}

StateIndex level_at(const SystemSpec& spec, int index) {
  if (index < 0) throw DomainError("spectrum index must be >= 0");
  switch (spec.kind()) {
    case SystemKind::box: return {index + 1};
    case SystemKind::oscillator: return {index};
    case SystemKind::ring: return {index % 2 == 1 ? (index + 1) / 2 : -index / 2};
  }
  return {0};
}

bool degenerate(const SystemSpec& spec, int index) {
  return spec.kind() == SystemKind::ring && index > 0;
}

UncertaintyRecord eigen_uncertainties(const SystemSpec& spec, const EigenResult& r, int index) {
  if (index < 0 || index >= static_cast<int>(r.states.size()))
    throw DomainError("eigen_uncertainties: index " + std::to_string(index) + " not computed");
  auto rec = oracle::uncertainties_from_samples(spec, r.states[index]);
  rec.energy = r.energies[index];
  rec.provenance = Provenance::eigen;
  rec.nodes_predicted = predicted_node_count(spec, level_at(spec, index));
  if (!degenerate(spec, index)) rec.nodes_counted = nodes::count_nodes(r.states[index]).count;
  return rec;
}

}  // namespace qnodes::eigen
