#pragma once

#include <complex>
#include <optional>
#include <string_view>

#include "qnodes/core.hpp"

namespace qnodes {

enum class Provenance { analytic, oracle, eigen };

std::string_view to_string(Provenance p);
Provenance parse_provenance(std::string_view name);

/// First and second moments of the conjugate pair. For the ring, q is the
/// angle theta and p is L_z.
struct ExpectationSet {
  double mean_q = 0.0;
  double mean_q2 = 0.0;
  double mean_p = 0.0;
  double mean_p2 = 0.0;
  Provenance provenance = Provenance::analytic;
};

/// Uncertainties of one state. `delta_q` is Delta x (or Delta theta),
/// `delta_p` is Delta p (or Delta L_z); `bound` is hbar/2.
struct UncertaintyRecord {
  double delta_q = 0.0;
  double delta_p = 0.0;
  double product = 0.0;
  double bound = 0.0;
  double energy = 0.0;
  int nodes_predicted = 0;
  std::optional<int> nodes_counted;
  Provenance provenance = Provenance::analytic;
};

namespace analytic {

// Particle in a box -------------------------------------------------------

/// sqrt(2/a) sin(n pi x / a); DomainError outside [0, a].
double box_psi(const SystemSpec& spec, int n, double x);
double box_energy(const SystemSpec& spec, int n);
ExpectationSet box_expectations(const SystemSpec& spec, int n);
UncertaintyRecord box_uncertainties(const SystemSpec& spec, int n);

// Particle on a ring ------------------------------------------------------

/// e^{i m theta} / sqrt(2 pi), theta reduced modulo 2 pi.
std::complex<double> ring_psi(const SystemSpec& spec, int m, double theta);
double ring_energy(const SystemSpec& spec, int m);

/// |psi_m|^2, which is 1/(2 pi) for every m and theta.
double ring_density(const SystemSpec& spec, int m, double theta);

/// |sum_k c_k psi_{m_k}(theta)|^2.
double ring_density(const RingSuperposition& state, double theta);

struct AngularMomentumStats {
  double mean_Lz = 0.0;
  double delta_Lz = 0.0;
};

AngularMomentumStats ring_Lz_stats(const SystemSpec& spec, int m);
AngularMomentumStats ring_Lz_stats(const SystemSpec& spec, const RingSuperposition& state);

struct AngleStats {
  double mean_theta = 0.0;
  double delta_theta = 0.0;
};

/// Interval statistics of theta on the branch [0, 2 pi). This depends on the
/// branch choice; it is not a periodic-variable dispersion.
AngleStats ring_theta_stats(int m);
AngleStats ring_theta_stats(const RingSuperposition& state);

/// Delta theta, Delta L_z for a definite-m state. The product is reported
/// but the hbar/2 bound is not meaningful for it (Delta L_z = 0).
UncertaintyRecord ring_uncertainties(const SystemSpec& spec, int m);

// Harmonic oscillator -----------------------------------------------------

double oscillator_energy(const SystemSpec& spec, int n);
ExpectationSet oscillator_expectations(const SystemSpec& spec, int n);
UncertaintyRecord oscillator_uncertainties(const SystemSpec& spec, int n);

/// Dispatch on the system kind.
UncertaintyRecord uncertainties(const SystemSpec& spec, StateIndex idx);
double energy(const SystemSpec& spec, StateIndex idx);

}  // namespace analytic
}  // namespace qnodes
