#include "qnodes/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qnodes {

std::string_view to_string(Boundary b) {
  switch (b) {
    case Boundary::dirichlet: return "dirichlet";
    case Boundary::periodic: return "periodic";
    case Boundary::open: return "open";
  }
  return "?";
}

GridSpec::GridSpec(double lower, double upper, int points, Boundary boundary)
    : lower_(lower), upper_(upper), points_(points), boundary_(boundary) {
  if (!(upper > lower) || !std::isfinite(lower) || !std::isfinite(upper))
    throw GridError("grid needs finite bounds with upper > lower");
  if (points < 3) throw GridError("grid needs at least 3 points, got " + std::to_string(points));
  if (boundary == Boundary::periodic) {
    if (points % 2 != 0)
      throw GridError("periodic grid needs an even point count, got " + std::to_string(points));
  } else if (points % 2 == 0) {
    throw GridError("grid needs an odd point count for Simpson quadrature, got " +
                    std::to_string(points));
  }
}

double GridSpec::spacing() const {
  const double width = upper_ - lower_;
  return periodic() ? width / points_ : width / (points_ - 1);
}

std::vector<double> GridSpec::nodes() const {
  std::vector<double> x(points_);
  const double h = spacing();
  for (int i = 0; i < points_; ++i) x[i] = lower_ + i * h;
  if (!periodic()) x.back() = upper_;
  return x;
}

SampledFunction::SampledFunction(GridSpec grid, std::vector<std::complex<double>> values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.points())
    throw GridError("sample count " + std::to_string(values_.size()) + " does not match grid (" +
                    std::to_string(grid_.points()) + " points)");
}

std::vector<double> SampledFunction::real_part() const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(),
                 [](std::complex<double> v) { return v.real(); });
  return out;
}

std::vector<double> SampledFunction::density() const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(),
                 [](std::complex<double> v) { return std::norm(v); });
  return out;
}

double simpson(std::span<const double> samples, double spacing) {
  const std::size_t n = samples.size();
  if (n < 3 || n % 2 == 0)
    throw GridError("Simpson rule needs an odd sample count >= 3, got " + std::to_string(n));
  double odd = 0.0, even = 0.0;
  for (std::size_t i = 1; i + 1 < n; i += 2) odd += samples[i];
  for (std::size_t i = 2; i + 1 < n; i += 2) even += samples[i];
  return spacing / 3.0 * (samples.front() + 4.0 * odd + 2.0 * even + samples.back());
}

double quad(const GridSpec& grid, std::span<const double> integrand) {
  if (static_cast<int>(integrand.size()) != grid.points())
    throw GridError("integrand size does not match grid");
  if (!grid.periodic()) return simpson(integrand, grid.spacing());
  std::vector<double> closed(integrand.begin(), integrand.end());
  closed.push_back(integrand.front());
  return simpson(closed, grid.spacing());
}

std::vector<double> fd_weights(int derivative, double x0, std::span<const double> nodes) {
  const int n = static_cast<int>(nodes.size());
  const int m = derivative;
  if (n <= m) throw GridError("stencil too small for requested derivative");
  // c[j][k]: weight of node j for the k-th derivative.
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) w[j] = c[j][m];
  return w;
}

std::vector<std::complex<double>> differentiate(const SampledFunction& f, int derivative,
                                                int half_width) {
  const int n = f.grid().points();
  const int width = 2 * half_width + 1;
  if (half_width < 1 || width > n) throw GridError("stencil wider than grid");
  const double h = f.grid().spacing();
  const double scale = std::pow(h, -derivative);
  const auto& v = f.values();
  std::vector<std::complex<double>> out(n);

  // Weights in units of h for a stencil whose first node sits `shift`
  // points left of the evaluation point.
  std::vector<std::vector<double>> by_shift(width);
  auto weights = [&](int shift) -> const std::vector<double>& {
    auto& w = by_shift[shift];
    if (w.empty()) {
      std::vector<double> offsets(width);
      for (int j = 0; j < width; ++j) offsets[j] = j - shift;
      w = fd_weights(derivative, 0.0, offsets);
    }
    return w;
  };

  for (int i = 0; i < n; ++i) {
    std::complex<double> acc{};
    if (f.grid().periodic()) {
      const auto& w = weights(half_width);
      for (int j = 0; j < width; ++j) acc += w[j] * v[((i + j - half_width) % n + n) % n];
    } else {
      const int start = std::clamp(i - half_width, 0, n - width);
      const auto& w = weights(i - start);
      for (int j = 0; j < width; ++j) acc += w[j] * v[start + j];
    }
    out[i] = acc * scale;
  }
  return out;
}

}  // namespace qnodes
