#pragma once

#include <complex>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qnodes/errors.hpp"

namespace qnodes {

inline constexpr double pi = 3.14159265358979323846;

/// Physical constants shared by every system. Natural units by default.
class Constants {
 public:
  Constants() = default;
  explicit Constants(double hbar);

  double hbar() const { return hbar_; }

 private:
  double hbar_ = 1.0;
};

/// Particle of mass `mass` confined to [0, length].
struct Box {
  double length = 1.0;
  double mass = 1.0;
};

/// Particle on a ring with moment of inertia I = m R^2.
struct Ring {
  double inertia = 1.0;
};

/// Particle of mass `mass` in the potential m omega^2 x^2 / 2.
struct Oscillator {
  double mass = 1.0;
  double omega = 1.0;
};

enum class SystemKind { box, ring, oscillator };

std::string_view to_string(SystemKind kind);
SystemKind parse_system_kind(std::string_view name);

/// One of the three fixture systems plus constants. Parameters are
/// validated on construction; the object is immutable afterwards.
class SystemSpec {
 public:
  using Variant = std::variant<Box, Ring, Oscillator>;

  SystemSpec(Variant system, Constants constants = {});

  static SystemSpec box(double length = 1.0, double mass = 1.0, Constants c = {}) {
    return SystemSpec(Box{length, mass}, c);
  }
  static SystemSpec ring(double inertia = 1.0, Constants c = {}) {
    return SystemSpec(Ring{inertia}, c);
  }
  static SystemSpec oscillator(double mass = 1.0, double omega = 1.0, Constants c = {}) {
    return SystemSpec(Oscillator{mass, omega}, c);
  }

  SystemKind kind() const;
  const Variant& variant() const { return system_; }
  const Constants& constants() const { return constants_; }
  double hbar() const { return constants_.hbar(); }

  // Throw DomainError when this holds a different system.
  const Box& as_box() const;
  const Ring& as_ring() const;
  const Oscillator& as_oscillator() const;

 private:
  Variant system_;
  Constants constants_;
};

/// Integer quantum number: n for box and oscillator, m for the ring.
struct StateIndex {
  int value = 0;

  friend bool operator==(StateIndex, StateIndex) = default;
};

/// Returns `idx` unchanged when it satisfies the system's bound
/// (box n >= 1, oscillator n >= 0, ring any m); throws DomainError otherwise.
StateIndex validate_state(const SystemSpec& spec, StateIndex idx);

/// Smallest valid quantum number for the system (ring: none, returns INT_MIN).
int lowest_level(SystemKind kind);

/// Interior sign changes of the wavefunction: n-1 (box), n (oscillator),
/// 2|m| zeros of Re(psi_m) = cos(m theta)/sqrt(2 pi) on [0, 2 pi) (ring).
int predicted_node_count(const SystemSpec& spec, StateIndex idx);

/// Normalized superposition of ring eigenstates, sum_k c_k psi_{m_k}.
class RingSuperposition {
 public:
  struct Term {
    int m;
    std::complex<double> coefficient;
  };

  static constexpr double norm_tolerance = 1e-12;

  /// Throws NormalizationError if sum |c_k|^2 differs from one by more than
  /// `norm_tolerance`, DomainError on repeated m or an empty list.
  explicit RingSuperposition(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }

 private:
  std::vector<Term> terms_;
};

}  // namespace qnodes
