#include "qnodes/core.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>
#include <string>

namespace qnodes {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw DomainError(std::string(what) + " must be positive and finite, got " +
                      std::to_string(value));
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

Constants::Constants(double hbar) : hbar_(hbar) { require_positive(hbar, "hbar"); }

std::string_view to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::box: return "box";
    case SystemKind::ring: return "ring";
    case SystemKind::oscillator: return "oscillator";
  }
  return "?";
}

SystemKind parse_system_kind(std::string_view name) {
  if (name == "box") return SystemKind::box;
  if (name == "ring") return SystemKind::ring;
  if (name == "oscillator") return SystemKind::oscillator;
  throw ConfigError("unknown system '" + std::string(name) + "' (expected box, ring or oscillator)");
}

SystemSpec::SystemSpec(Variant system, Constants constants)
    : system_(system), constants_(constants) {
  std::visit(overloaded{
                 [](const Box& b) {
                   require_positive(b.length, "box length");
                   require_positive(b.mass, "box mass");
                 },
                 [](const Ring& r) { require_positive(r.inertia, "ring moment of inertia"); },
                 [](const Oscillator& o) {
                   require_positive(o.mass, "oscillator mass");
                   require_positive(o.omega, "oscillator omega");
                 },
             },
             system_);
}

SystemKind SystemSpec::kind() const {
  return std::visit(overloaded{
                        [](const Box&) { return SystemKind::box; },
                        [](const Ring&) { return SystemKind::ring; },
                        [](const Oscillator&) { return SystemKind::oscillator; },
                    },
                    system_);
}

const Box& SystemSpec::as_box() const {
  if (auto* b = std::get_if<Box>(&system_)) return *b;
  throw DomainError("system is not a box");
}

const Ring& SystemSpec::as_ring() const {
  if (auto* r = std::get_if<Ring>(&system_)) return *r;
  throw DomainError("system is not a ring");
}

const Oscillator& SystemSpec::as_oscillator() const {
  if (auto* o = std::get_if<Oscillator>(&system_)) return *o;
  throw DomainError("system is not an oscillator");
}

int lowest_level(SystemKind kind) {
  switch (kind) {
    case SystemKind::box: return 1;
    case SystemKind::oscillator: return 0;
    case SystemKind::ring: return std::numeric_limits<int>::min();
  }
  return 0;
}

StateIndex validate_state(const SystemSpec& spec, StateIndex idx) {
  const int lo = lowest_level(spec.kind());
  if (idx.value < lo)
    throw DomainError(std::string(to_string(spec.kind())) + " quantum number must be >= " +
                      std::to_string(lo) + ", got " + std::to_string(idx.value));
  return idx;
}

int predicted_node_count(const SystemSpec& spec, StateIndex idx) {
  validate_state(spec, idx);
  switch (spec.kind()) {
    case SystemKind::box: return idx.value - 1;
    case SystemKind::oscillator: return idx.value;
    case SystemKind::ring: return 2 * std::abs(idx.value);
  }
  return 0;
}

RingSuperposition::RingSuperposition(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw DomainError("ring superposition needs at least one term");
  std::set<int> seen;
  double norm = 0.0;
  for (const auto& t : terms_) {
    if (!seen.insert(t.m).second)
      throw DomainError("ring superposition repeats m = " + std::to_string(t.m));
    norm += std::norm(t.coefficient);
  }
  if (std::abs(norm - 1.0) > norm_tolerance)
    throw NormalizationError("ring superposition norm is " + std::to_string(norm) +
                             ", expected 1 within 1e-12");
}

}  // namespace qnodes
