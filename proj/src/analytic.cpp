#include "qnodes/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qnodes {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::analytic: return "analytic";
    case Provenance::oracle: return "oracle";
    case Provenance::eigen: return "eigen";
  }
  return "?";
}

Provenance parse_provenance(std::string_view name) {
  if (name == "analytic") return Provenance::analytic;
  if (name == "oracle") return Provenance::oracle;
  if (name == "eigen") return Provenance::eigen;
  throw ConfigError("unknown path '" + std::string(name) + "' (expected analytic, oracle or eigen)");
}

namespace analytic {

namespace {

constexpr double two_pi = 2.0 * pi;

int checked(const SystemSpec& spec, int n) { return validate_state(spec, StateIndex{n}).value; }

// 1/12 - 1/(2 n^2 pi^2): the box position variance in units of a^2.
double box_variance_factor(int n) {
  const double npi = n * pi;
  return 1.0 / 12.0 - 1.0 / (2.0 * npi * npi);
}

// Integrals of theta^k e^{i q theta} over [0, 2 pi) for k = 1, 2.
std::complex<double> theta_moment1(int q) {
  if (q == 0) return {2.0 * pi * pi, 0.0};
  return {0.0, -two_pi / q};
}

std::complex<double> theta_moment2(int q) {
  if (q == 0) return {8.0 * pi * pi * pi / 3.0, 0.0};
  const double qd = q;
  return {4.0 * pi / (qd * qd), -4.0 * pi * pi / qd};
}

}  // namespace

double box_psi(const SystemSpec& spec, int n, double x) {
  const auto& box = spec.as_box();
  checked(spec, n);
  if (!(x >= 0.0 && x <= box.length))
    throw DomainError("box_psi: x = " + std::to_string(x) + " outside [0, a]");
  return std::sqrt(2.0 / box.length) * std::sin(n * pi * x / box.length);
}

double box_energy(const SystemSpec& spec, int n) {
  const auto& box = spec.as_box();
  checked(spec, n);
  const double k = spec.hbar() * n * pi / box.length;
  return k * k / (2.0 * box.mass);
}

ExpectationSet box_expectations(const SystemSpec& spec, int n) {
  const auto& box = spec.as_box();
  checked(spec, n);
  const double a = box.length;
  const double npi = n * pi;
  ExpectationSet e;
  e.mean_q = a / 2.0;
  e.mean_q2 = a * a * (1.0 / 3.0 - 1.0 / (2.0 * npi * npi));
  e.mean_p = 0.0;
  e.mean_p2 = spec.hbar() * spec.hbar() * npi * npi / (a * a);
  return e;
}

UncertaintyRecord box_uncertainties(const SystemSpec& spec, int n) {
  const auto& box = spec.as_box();
  checked(spec, n);
  const double root = std::sqrt(box_variance_factor(n));
  UncertaintyRecord r;
  r.delta_q = box.length * root;
  r.delta_p = spec.hbar() * n * pi / box.length;
  r.product = spec.hbar() * n * pi * root;
  r.bound = spec.hbar() / 2.0;
  r.energy = box_energy(spec, n);
  r.nodes_predicted = n - 1;
  return r;
}

std::complex<double> ring_psi(const SystemSpec& spec, int m, double theta) {
  spec.as_ring();
  const double reduced = std::fmod(theta, two_pi);
  return std::polar(1.0 / std::sqrt(two_pi), m * reduced);
}

double ring_energy(const SystemSpec& spec, int m) {
  const auto& ring = spec.as_ring();
  const double lz = m * spec.hbar();
  return lz * lz / (2.0 * ring.inertia);
}

double ring_density(const SystemSpec& spec, int /*m*/, double /*theta*/) {
  spec.as_ring();
  return 1.0 / two_pi;
}

double ring_density(const RingSuperposition& state, double theta) {
  std::complex<double> amp{};
  for (const auto& t : state.terms())
    amp += t.coefficient * std::polar(1.0, t.m * std::fmod(theta, two_pi));
  return std::norm(amp) / two_pi;
}

AngularMomentumStats ring_Lz_stats(const SystemSpec& spec, int m) {
  spec.as_ring();
  return {m * spec.hbar(), 0.0};
}

AngularMomentumStats ring_Lz_stats(const SystemSpec& spec, const RingSuperposition& state) {
  spec.as_ring();
  double mean = 0.0;
  for (const auto& t : state.terms()) mean += std::norm(t.coefficient) * t.m;
  // Centered second moment; avoids cancellation when the spread is tiny.
  double var = 0.0;
  for (const auto& t : state.terms()) {
    const double d = t.m - mean;
    var += std::norm(t.coefficient) * d * d;
  }
  return {spec.hbar() * mean, spec.hbar() * std::sqrt(var)};
}

AngleStats ring_theta_stats(int /*m*/) { return {pi, two_pi / std::sqrt(12.0)}; }

AngleStats ring_theta_stats(const RingSuperposition& state) {
  std::complex<double> first{}, second{};
  for (const auto& a : state.terms()) {
    for (const auto& b : state.terms()) {
      const auto weight = a.coefficient * std::conj(b.coefficient);
      first += weight * theta_moment1(a.m - b.m);
      second += weight * theta_moment2(a.m - b.m);
    }
  }
  const double mean = first.real() / two_pi;
  const double var = second.real() / two_pi - mean * mean;
  return {mean, std::sqrt(std::max(var, 0.0))};
}

UncertaintyRecord ring_uncertainties(const SystemSpec& spec, int m) {
  const auto lz = ring_Lz_stats(spec, m);
  const auto th = ring_theta_stats(m);
  UncertaintyRecord r;
  r.delta_q = th.delta_theta;
  r.delta_p = lz.delta_Lz;
  r.product = r.delta_q * r.delta_p;
  r.bound = spec.hbar() / 2.0;
  r.energy = ring_energy(spec, m);
  r.nodes_predicted = 2 * std::abs(m);
  return r;
}

double oscillator_energy(const SystemSpec& spec, int n) {
  const auto& osc = spec.as_oscillator();
  checked(spec, n);
  return (n + 0.5) * spec.hbar() * osc.omega;
}

ExpectationSet oscillator_expectations(const SystemSpec& spec, int n) {
  const auto& osc = spec.as_oscillator();
  checked(spec, n);
  const double level = n + 0.5;
  ExpectationSet e;
  e.mean_q = 0.0;
  e.mean_q2 = spec.hbar() * level / (osc.mass * osc.omega);
  e.mean_p = 0.0;
  e.mean_p2 = osc.mass * spec.hbar() * osc.omega * level;
  return e;
}

UncertaintyRecord oscillator_uncertainties(const SystemSpec& spec, int n) {
  const auto e = oscillator_expectations(spec, n);
  UncertaintyRecord r;
  r.delta_q = std::sqrt(e.mean_q2);
  r.delta_p = std::sqrt(e.mean_p2);
  r.product = spec.hbar() * (n + 0.5);
  r.bound = spec.hbar() / 2.0;
  r.energy = oscillator_energy(spec, n);
  r.nodes_predicted = n;
  return r;
}

UncertaintyRecord uncertainties(const SystemSpec& spec, StateIndex idx) {
  switch (spec.kind()) {
    case SystemKind::box: return box_uncertainties(spec, idx.value);
    case SystemKind::ring: return ring_uncertainties(spec, idx.value);
    case SystemKind::oscillator: return oscillator_uncertainties(spec, idx.value);
  }
  throw DomainError("unknown system");
}

double energy(const SystemSpec& spec, StateIndex idx) {
  switch (spec.kind()) {
    case SystemKind::box: return box_energy(spec, idx.value);
    case SystemKind::ring: return ring_energy(spec, idx.value);
    case SystemKind::oscillator: return oscillator_energy(spec, idx.value);
  }
  throw DomainError("unknown system");
}

}  // namespace analytic
}  // namespace qnodes
