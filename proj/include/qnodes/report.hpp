#pragma once

#include <exception>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qnodes/analytic.hpp"
#include "qnodes/core.hpp"

namespace qnodes::report {

inline constexpr std::string_view version = "0.1.0";

/// Slack on product >= hbar/2 before a row counts as violating the bound.
inline constexpr double heisenberg_slack = 1e-12;

inline constexpr std::string_view csv_header =
    "system,level,nodes_predicted,nodes_counted,energy,delta_q,delta_p,product,bound,satisfied,"
    "path,disagreement";

enum class Format { csv, json };

enum ExitCode : int { success = 0, verification_failed = 1, usage_error = 2, numerical_failure = 3 };

/// 2 for configuration and domain errors, 3 for numerical failures.
int exit_code_for(const std::exception& e);

struct LevelRange {
  int lo = 0;
  int hi = 0;
};

/// "LO:HI" (inclusive) or a single integer.
LevelRange parse_levels(std::string_view text);

/// Comma-separated subset of analytic, oracle, eigen.
std::vector<Provenance> parse_paths(std::string_view text);

Format parse_format(std::string_view text);

/// Builds a system from `key=value` parameters (box: length, mass;
/// ring: inertia; oscillator: mass, omega). Unknown keys are a ConfigError.
SystemSpec make_system(SystemKind kind, const std::map<std::string, double>& params, double hbar);

struct SweepConfig {
  SystemSpec system = SystemSpec::box();
  LevelRange levels{1, 1};
  std::vector<Provenance> paths{Provenance::analytic};
  /// 0 selects the per-system default grid.
  int grid_points = 0;
  double tolerance = 1e-6;
  Format format = Format::csv;
  /// Empty writes to stdout.
  std::string output;
  int threads = 1;
  /// Self-test hook: subtract hbar/4 from the first path's product at this level.
  std::optional<int> corrupt_level;

  /// ConfigError on an empty or invalid level range, no paths, duplicate
  /// paths, a grid point count the system cannot use, or tol <= 0.
  void validate() const;
};

enum class Satisfied { yes, no, not_applicable };

struct SweepRow {
  SystemKind system = SystemKind::box;
  int level = 0;
  int nodes_predicted = 0;
  std::optional<int> nodes_counted;
  double energy = 0.0;
  double delta_q = 0.0;
  double delta_p = 0.0;
  double product = 0.0;
  double bound = 0.0;
  Satisfied satisfied = Satisfied::not_applicable;
  Provenance path = Provenance::analytic;
  std::optional<double> disagreement;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

/// One row per (level, path), ordered by level then path. Numerical errors
/// propagate with the failing level prefixed to the message.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

struct Failure {
  int level = 0;
  Provenance path = Provenance::analytic;
  std::string reason;
};

/// Bound, node-count and cross-path checks on finished rows.
std::vector<Failure> check_rows(const std::vector<SweepRow>& rows, double tolerance);

/// Runs the sweep and the checks; writes one line per failure to `report`
/// and returns an ExitCode. Rows are also emitted when cfg.output is set.
int verify(const SweepConfig& cfg, std::ostream& report);

std::string to_csv(const std::vector<SweepRow>& rows);
nlohmann::json to_json(const std::vector<SweepRow>& rows, const SweepConfig& cfg);
std::vector<SweepRow> rows_from_json(const nlohmann::json& doc);

/// Serializes in cfg.format to cfg.output (or `fallback` when empty).
/// Write failures raise qnodes::Error mapped to exit code 3.
void emit(const std::vector<SweepRow>& rows, const SweepConfig& cfg, std::ostream& fallback);

/// Fixed-width "%#.12g" rendering used by the CSV writer.
std::string format_number(double v);

}  // namespace qnodes::report
