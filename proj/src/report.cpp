#include "qnodes/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include "qnodes/eigen.hpp"
#include "qnodes/nodes.hpp"
#include "qnodes/oracle.hpp"
#include "qnodes/special.hpp"

namespace qnodes::report {

namespace {

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty())
    throw ConfigError("cannot parse " + std::string(what) + " '" + std::string(text) + "'");
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

[[noreturn]] void rethrow_with_context(const std::string& context) {
  const std::string prefix = context + ": ";
  try {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const DomainError& e) {
    throw DomainError(prefix + e.what());
  } catch (const NormalizationError& e) {
    throw NormalizationError(prefix + e.what());
  } catch (const OverflowError& e) {
    throw OverflowError(prefix + e.what());
  } catch (const GridError& e) {
    throw GridError(prefix + e.what());
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(prefix + e.what());
  } catch (const DegenerateError& e) {
    throw DegenerateError(prefix + e.what());
  } catch (const Error& e) {
    throw Error(prefix + e.what());
  }
}

Satisfied bound_status(SystemKind kind, double product, double bound) {
  if (kind == SystemKind::ring) return Satisfied::not_applicable;
  return product >= bound - heisenberg_slack ? Satisfied::yes : Satisfied::no;
}

SweepRow make_row(const SweepConfig& cfg, int level, const UncertaintyRecord& r) {
  SweepRow row;
  row.system = cfg.system.kind();
  row.level = level;
  row.nodes_predicted = r.nodes_predicted;
  row.nodes_counted = r.nodes_counted;
  row.energy = r.energy;
  row.delta_q = r.delta_q;
  row.delta_p = r.delta_p;
  row.product = r.product;
  row.bound = r.bound;
  row.path = r.provenance;
  return row;
}

bool selected(const SweepConfig& cfg, Provenance p) {
  return std::find(cfg.paths.begin(), cfg.paths.end(), p) != cfg.paths.end();
}

double relative_gap(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), 1.0);
}

// Largest relative gap between each row and the reference row of the level.
// Degenerate ring eigenvectors are arbitrary combinations of +m and -m, so
// only their energy is comparable.
double level_disagreement(const std::vector<SweepRow>& rows) {
  const auto ref_it = std::find_if(rows.begin(), rows.end(),
                                   [](const SweepRow& r) { return r.path == Provenance::analytic; });
  const SweepRow& ref = ref_it != rows.end() ? *ref_it : rows.front();
  double worst = 0.0;
  for (const auto& row : rows) {
    if (&row == &ref) continue;
    worst = std::max(worst, relative_gap(row.energy, ref.energy));
    const bool energy_only =
        row.system == SystemKind::ring && (row.path == Provenance::eigen || ref.path == Provenance::eigen) &&
        row.level != 0;
    if (energy_only) continue;
    worst = std::max({worst, relative_gap(row.delta_q, ref.delta_q),
                      relative_gap(row.delta_p, ref.delta_p), relative_gap(row.product, ref.product)});
  }
  return worst;
}

std::vector<SweepRow> compute_level(const SweepConfig& cfg, int level,
                                    const eigen::EigenResult* spectrum) {
  const auto& spec = cfg.system;
  const StateIndex idx{level};
  std::vector<SweepRow> rows;
  try {
    std::optional<SampledFunction> samples;
    std::optional<int> counted;
    if (selected(cfg, Provenance::analytic) || selected(cfg, Provenance::oracle)) {
      const auto grid = oracle::default_grid(spec, idx, cfg.grid_points);
      samples = oracle::sample_state(spec, idx, grid);
      counted = nodes::count_nodes(*samples).count;
    }
    for (Provenance path : {Provenance::analytic, Provenance::oracle, Provenance::eigen}) {
      if (!selected(cfg, path)) continue;
      UncertaintyRecord rec;
      switch (path) {
        case Provenance::analytic:
          rec = analytic::uncertainties(spec, idx);
          rec.nodes_counted = counted;
          break;
        case Provenance::oracle:
          rec = oracle::uncertainties_from_samples(spec, *samples);
          rec.nodes_predicted = predicted_node_count(spec, idx);
          rec.nodes_counted = counted;
          break;
        case Provenance::eigen:
          rec = eigen::eigen_uncertainties(spec, *spectrum, eigen::spectrum_index(spec, idx));
          break;
      }
      rows.push_back(make_row(cfg, level, rec));
    }
  } catch (...) {
    rethrow_with_context(std::string(to_string(spec.kind())) + " level " + std::to_string(level));
  }

  if (cfg.corrupt_level && *cfg.corrupt_level == level) rows.front().product -= spec.hbar() / 4.0;
  for (auto& row : rows) row.satisfied = bound_status(row.system, row.product, row.bound);
  if (rows.size() >= 2) {
    const double d = level_disagreement(rows);
    for (auto& row : rows) row.disagreement = d;
  }
  return rows;
}

const char* satisfied_text(Satisfied s) {
  switch (s) {
    case Satisfied::yes: return "true";
    case Satisfied::no: return "false";
    case Satisfied::not_applicable: return "n/a";
  }
  return "?";
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e)) return usage_error;
  return numerical_failure;
}

LevelRange parse_levels(std::string_view text) {
  text = trim(text);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    const int v = parse_int(text, "level");
    return {v, v};
  }
  return {parse_int(text.substr(0, colon), "level range start"),
          parse_int(text.substr(colon + 1), "level range end")};
}

std::vector<Provenance> parse_paths(std::string_view text) {
  std::vector<Provenance> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (!item.empty()) out.push_back(parse_provenance(item));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw ConfigError("no computation path given");
  return out;
}

Format parse_format(std::string_view text) {
  if (text == "csv") return Format::csv;
  if (text == "json") return Format::json;
  throw ConfigError("unknown format '" + std::string(text) + "' (expected csv or json)");
}

SystemSpec make_system(SystemKind kind, const std::map<std::string, double>& params, double hbar) {
  std::set<std::string> allowed;
  switch (kind) {
    case SystemKind::box: allowed = {"length", "mass"}; break;
    case SystemKind::ring: allowed = {"inertia"}; break;
    case SystemKind::oscillator: allowed = {"mass", "omega"}; break;
  }
  for (const auto& [key, value] : params)
    if (!allowed.count(key))
      throw ConfigError("parameter '" + key + "' does not apply to " + std::string(to_string(kind)));
  auto get = [&](const char* key) {
    const auto it = params.find(key);
    return it == params.end() ? 1.0 : it->second;
  };
  try {
    const Constants c(hbar);
    switch (kind) {
      case SystemKind::box: return SystemSpec::box(get("length"), get("mass"), c);
      case SystemKind::ring: return SystemSpec::ring(get("inertia"), c);
      case SystemKind::oscillator: return SystemSpec::oscillator(get("mass"), get("omega"), c);
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown system");
}

void SweepConfig::validate() const {
  const auto kind = system.kind();
  if (levels.lo > levels.hi)
    throw ConfigError("empty level range " + std::to_string(levels.lo) + ":" + std::to_string(levels.hi));
  if (levels.lo < lowest_level(kind))
    throw ConfigError(std::string(to_string(kind)) + " levels start at " +
                      std::to_string(lowest_level(kind)));
  if (paths.empty()) throw ConfigError("no computation path selected");
  if (std::set<Provenance>(paths.begin(), paths.end()).size() != paths.size())
    throw ConfigError("duplicate computation path");
  if (grid_points != 0) {
    const bool periodic = kind == SystemKind::ring;
    if (grid_points < (periodic ? 4 : 3) || (grid_points % 2 == 0) != periodic)
      throw ConfigError(std::string("--grid-points for ") + std::string(to_string(kind)) + " must be " +
                        (periodic ? "even and >= 4" : "odd and >= 3"));
  }
  if (!(tolerance > 0.0) || !std::isfinite(tolerance)) throw ConfigError("tolerance must be positive");
  if (threads < 1) throw ConfigError("threads must be >= 1");
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const auto& spec = cfg.system;

  std::optional<eigen::EigenResult> spectrum;
  if (selected(cfg, Provenance::eigen)) {
    int highest_index = 0;
    int highest_level = 0;
    for (int level = cfg.levels.lo; level <= cfg.levels.hi; ++level) {
      highest_index = std::max(highest_index, eigen::spectrum_index(spec, {level}));
      highest_level = std::max(highest_level, std::abs(level));
    }
    try {
      const auto grid = oracle::default_grid(spec, {highest_level}, cfg.grid_points);
      spectrum = eigen::solve_lowest(eigen::build_hamiltonian(spec, grid), highest_index + 1);
    } catch (...) {
      rethrow_with_context("eigensolve for " + std::string(to_string(spec.kind())) + " levels up to " +
                           std::to_string(cfg.levels.hi));
    }
  }
  const eigen::EigenResult* shared = spectrum ? &*spectrum : nullptr;

  const int count = cfg.levels.hi - cfg.levels.lo + 1;
  const int workers = std::min(cfg.threads, count);
  std::vector<SweepRow> rows;
  if (workers <= 1) {
    for (int level = cfg.levels.lo; level <= cfg.levels.hi; ++level) {
      auto part = compute_level(cfg, level, shared);
      rows.insert(rows.end(), part.begin(), part.end());
    }
    return rows;
  }

  // Contiguous blocks of levels; concatenating in block order keeps the
  // output independent of scheduling.
  std::vector<std::future<std::vector<SweepRow>>> blocks;
  for (int w = 0; w < workers; ++w) {
    const int first = cfg.levels.lo + w * count / workers;
    const int last = cfg.levels.lo + (w + 1) * count / workers - 1;
    blocks.push_back(std::async(std::launch::async, [&cfg, shared, first, last] {
      std::vector<SweepRow> out;
      for (int level = first; level <= last; ++level) {
        auto part = compute_level(cfg, level, shared);
        out.insert(out.end(), part.begin(), part.end());
      }
      return out;
    }));
  }
  for (auto& b : blocks) {
    auto part = b.get();
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

std::vector<Failure> check_rows(const std::vector<SweepRow>& rows, double tolerance) {
  std::vector<Failure> out;
  char buf[256];
  for (const auto& row : rows) {
    if (row.system != SystemKind::ring && row.product < row.bound - heisenberg_slack) {
      std::snprintf(buf, sizeof buf, "product %.12g below bound %.12g", row.product, row.bound);
      out.push_back({row.level, row.path, buf});
    }
    if (row.nodes_counted && *row.nodes_counted != row.nodes_predicted) {
      std::snprintf(buf, sizeof buf, "counted %d nodes, predicted %d", *row.nodes_counted,
                    row.nodes_predicted);
      out.push_back({row.level, row.path, buf});
    }
    if (row.disagreement && *row.disagreement > tolerance) {
      std::snprintf(buf, sizeof buf, "path disagreement %.3e exceeds tolerance %.3e", *row.disagreement,
                    tolerance);
      out.push_back({row.level, row.path, buf});
    }
  }
  return out;
}

int verify(const SweepConfig& cfg, std::ostream& report) {
  std::vector<SweepRow> rows;
  try {
    if (cfg.paths.size() < 2) throw ConfigError("verify needs at least two computation paths");
    rows = run_sweep(cfg);
  } catch (const std::exception& e) {
    report << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  if (!cfg.output.empty()) {
    try {
      emit(rows, cfg, report);
    } catch (const std::exception& e) {
      report << "error: " << e.what() << '\n';
      return exit_code_for(e);
    }
  }
  const auto failures = check_rows(rows, cfg.tolerance);
  for (const auto& f : failures)
    report << "FAIL " << to_string(cfg.system.kind()) << " level " << f.level << " path "
           << to_string(f.path) << ": " << f.reason << '\n';
  if (!failures.empty()) return verification_failed;
  report << "OK " << rows.size() << " rows verified\n";
  return success;
}

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.12g", v);
  return buf;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << csv_header << '\n';
  for (const auto& r : rows) {
    out << to_string(r.system) << ',' << r.level << ',' << r.nodes_predicted << ',';
    if (r.nodes_counted) out << *r.nodes_counted;
    out << ',' << format_number(r.energy) << ',' << format_number(r.delta_q) << ','
        << format_number(r.delta_p) << ',' << format_number(r.product) << ',' << format_number(r.bound)
        << ',' << satisfied_text(r.satisfied) << ',' << to_string(r.path) << ',';
    if (r.disagreement) out << format_number(*r.disagreement);
    out << '\n';
  }
  return out.str();
}

nlohmann::json to_json(const std::vector<SweepRow>& rows, const SweepConfig& cfg) {
  using nlohmann::json;
  const auto& spec = cfg.system;
  json params = json::object();
  switch (spec.kind()) {
    case SystemKind::box:
      params = {{"length", spec.as_box().length}, {"mass", spec.as_box().mass}};
      break;
    case SystemKind::ring: params = {{"inertia", spec.as_ring().inertia}}; break;
    case SystemKind::oscillator:
      params = {{"mass", spec.as_oscillator().mass}, {"omega", spec.as_oscillator().omega}};
      break;
  }
  const int top = std::max(std::abs(cfg.levels.lo), std::abs(cfg.levels.hi));
  const auto grid = oracle::default_grid(spec, {top}, cfg.grid_points);
  json paths = json::array();
  for (auto p : cfg.paths) paths.push_back(std::string(to_string(p)));

  json meta = {
      {"version", std::string(version)},
      {"system", std::string(to_string(spec.kind()))},
      {"levels", {cfg.levels.lo, cfg.levels.hi}},
      {"paths", paths},
      {"units", {{"hbar", spec.hbar()}, {"parameters", params}}},
      {"grids",
       {{"points", grid.points()},
        {"lower", grid.lower()},
        {"upper", grid.upper()},
        {"boundary", std::string(to_string(grid.boundary()))}}},
      {"tolerances",
       {{"disagreement", cfg.tolerance},
        {"heisenberg_slack", heisenberg_slack},
        {"node_zero_threshold", nodes::zero_threshold},
        {"normalization", oracle::normalization_tolerance}}},
  };
  if (spec.kind() == SystemKind::oscillator)
    meta["grids"]["half_width_rule"] = "max(8*sqrt(2n+1), 12) oscillator lengths, per level";
  if (spec.kind() == SystemKind::ring)
    meta["theta_convention"] = "interval statistics on the branch [0, 2pi); convention dependent";

  json out_rows = json::array();
  for (const auto& r : rows) {
    json j = {
        {"system", std::string(to_string(r.system))},
        {"level", r.level},
        {"nodes_predicted", r.nodes_predicted},
        {"nodes_counted", r.nodes_counted ? json(*r.nodes_counted) : json(nullptr)},
        {"energy", r.energy},
        {"delta_q", r.delta_q},
        {"delta_p", r.delta_p},
        {"product", r.product},
        {"bound", r.bound},
        {"satisfied", r.satisfied == Satisfied::not_applicable ? json(nullptr)
                                                               : json(r.satisfied == Satisfied::yes)},
        {"path", std::string(to_string(r.path))},
        {"disagreement", r.disagreement ? json(*r.disagreement) : json(nullptr)},
    };
    out_rows.push_back(std::move(j));
  }
  return {{"metadata", meta}, {"rows", out_rows}};
}

std::vector<SweepRow> rows_from_json(const nlohmann::json& doc) {
  std::vector<SweepRow> rows;
  try {
    for (const auto& j : doc.at("rows")) {
      SweepRow r;
      r.system = parse_system_kind(j.at("system").get<std::string>());
      r.level = j.at("level").get<int>();
      r.nodes_predicted = j.at("nodes_predicted").get<int>();
      if (!j.at("nodes_counted").is_null()) r.nodes_counted = j.at("nodes_counted").get<int>();
      r.energy = j.at("energy").get<double>();
      r.delta_q = j.at("delta_q").get<double>();
      r.delta_p = j.at("delta_p").get<double>();
      r.product = j.at("product").get<double>();
      r.bound = j.at("bound").get<double>();
      const auto& sat = j.at("satisfied");
      r.satisfied = sat.is_null() ? Satisfied::not_applicable
                                  : (sat.get<bool>() ? Satisfied::yes : Satisfied::no);
      r.path = parse_provenance(j.at("path").get<std::string>());
      if (!j.at("disagreement").is_null()) r.disagreement = j.at("disagreement").get<double>();
      rows.push_back(r);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
  return rows;
}

void emit(const std::vector<SweepRow>& rows, const SweepConfig& cfg, std::ostream& fallback) {
  if (rows.empty()) throw ConfigError("nothing to emit");
  const std::string text = cfg.format == Format::csv ? to_csv(rows) : to_json(rows, cfg).dump(2) + "\n";
  if (cfg.output.empty()) {
    fallback << text;
    fallback.flush();
    if (!fallback) throw Error("failed to write report to stdout");
    return;
  }
  std::ofstream file(cfg.output, std::ios::binary);
  file << text;
  file.flush();
  if (!file) throw Error("failed to write report to '" + cfg.output + "'");
}

}  // namespace qnodes::report
