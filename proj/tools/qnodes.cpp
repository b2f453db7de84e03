// qnodes: uncertainty / node-count sweeps for the box, ring and oscillator.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qnodes/eigen.hpp"
#include "qnodes/nodes.hpp"
#include "qnodes/oracle.hpp"
#include "qnodes/report.hpp"

namespace {

using namespace qnodes;
using report::ExitCode;

struct CommonOptions {
  std::string system = "box";
  std::vector<std::string> params;
  double hbar = 1.0;
  int grid_points = 0;
  std::string format = "csv";
  std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--system", o.system, "box, ring or oscillator")->required();
  cmd->add_option("--param", o.params, "system parameter as key=value (repeatable)");
  cmd->add_option("--hbar", o.hbar, "reduced Planck constant");
  cmd->add_option("--grid-points", o.grid_points, "grid points (default 4001, ring 4096)");
  cmd->add_option("--format", o.format, "csv or json");
  cmd->add_option("--out", o.out, "output file (default stdout)");
}

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("--param expects key=value, got '" + item + "'");
    const std::string value = item.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty())
      throw ConfigError("--param " + item.substr(0, eq) + ": not a number: '" + value + "'");
    out[item.substr(0, eq)] = v;
  }
  return out;
}

SystemSpec make_spec(const CommonOptions& o) {
  return report::make_system(parse_system_kind(o.system), parse_params(o.params), o.hbar);
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text << std::flush;
    if (!std::cout) throw Error("failed to write to stdout");
    return;
  }
  std::ofstream file(path, std::ios::binary);
  file << text;
  file.flush();
  if (!file) throw Error("failed to write '" + path + "'");
}

int run_eigensolve(const CommonOptions& o, int states) {
  const auto spec = make_spec(o);
  if (states < 1) throw ConfigError("--states must be >= 1");
  const auto top = eigen::level_at(spec, states - 1);
  const auto grid = oracle::default_grid(spec, {std::abs(top.value)}, o.grid_points);
  const auto result = eigen::solve_lowest(eigen::build_hamiltonian(spec, grid), states);

  nlohmann::json rows = nlohmann::json::array();
  std::ostringstream csv;
  csv << "system,index,level,energy,residual,nodes_predicted,nodes_counted\n";
  for (int i = 0; i < states; ++i) {
    const auto level = eigen::level_at(spec, i);
    const bool degenerate = eigen::degenerate(spec, i);
    const int predicted = predicted_node_count(spec, level);
    const int counted = nodes::count_nodes(result.states[i]).count;
    csv << to_string(spec.kind()) << ',' << i << ',' << level.value << ','
        << report::format_number(result.energies[i]) << ',' << report::format_number(result.residuals[i])
        << ',' << predicted << ',';
    if (!degenerate) csv << counted;
    csv << '\n';
    rows.push_back({{"system", std::string(to_string(spec.kind()))},
                    {"index", i},
                    {"level", level.value},
                    {"energy", result.energies[i]},
                    {"residual", result.residuals[i]},
                    {"nodes_predicted", predicted},
                    {"nodes_counted", degenerate ? nlohmann::json(nullptr) : nlohmann::json(counted)}});
  }
  if (report::parse_format(o.format) == report::Format::csv)
    write_text(csv.str(), o.out);
  else
    write_text(nlohmann::json{{"metadata",
                               {{"version", std::string(report::version)},
                                {"grid",
                                 {{"points", grid.points()},
                                  {"lower", grid.lower()},
                                  {"upper", grid.upper()},
                                  {"boundary", std::string(to_string(grid.boundary()))}}}}},
                              {"rows", rows}}
                       .dump(2) + "\n",
               o.out);
  return report::success;
}

int run_nodes(const CommonOptions& o, const std::string& levels_text, const std::string& source) {
  const auto spec = make_spec(o);
  const auto levels = report::parse_levels(levels_text);
  if (levels.lo > levels.hi || levels.lo < lowest_level(spec.kind()))
    throw ConfigError("invalid level range '" + levels_text + "'");
  if (source != "analytic" && source != "eigen")
    throw ConfigError("--source must be analytic or eigen");

  std::optional<eigen::EigenResult> spectrum;
  if (source == "eigen") {
    int top_index = 0, top_level = 0;
    for (int l = levels.lo; l <= levels.hi; ++l) {
      top_index = std::max(top_index, eigen::spectrum_index(spec, {l}));
      top_level = std::max(top_level, std::abs(l));
    }
    const auto grid = oracle::default_grid(spec, {top_level}, o.grid_points);
    spectrum = eigen::solve_lowest(eigen::build_hamiltonian(spec, grid), top_index + 1);
  }

  nlohmann::json rows = nlohmann::json::array();
  std::ostringstream csv;
  csv << "system,level,nodes_predicted,nodes_counted,boundary_excluded,locations\n";
  for (int l = levels.lo; l <= levels.hi; ++l) {
    const StateIndex idx{l};
    std::optional<nodes::NodeReport> rep;
    if (spectrum) {
      const int i = eigen::spectrum_index(spec, idx);
      if (!eigen::degenerate(spec, i)) rep = nodes::count_nodes(spectrum->states[i]);
    } else {
      rep = nodes::count_nodes(
          oracle::sample_state(spec, idx, oracle::default_grid(spec, idx, o.grid_points)));
    }
    const int predicted = predicted_node_count(spec, idx);
    csv << to_string(spec.kind()) << ',' << l << ',' << predicted << ',';
    std::string locs;
    if (rep) {
      csv << rep->count << ',' << rep->boundary_excluded << ',';
      for (std::size_t k = 0; k < rep->locations.size(); ++k)
        locs += (k ? ";" : "") + report::format_number(rep->locations[k]);
    } else {
      csv << ",,";
    }
    csv << locs << '\n';
    rows.push_back({{"system", std::string(to_string(spec.kind()))},
                    {"level", l},
                    {"nodes_predicted", predicted},
                    {"nodes_counted", rep ? nlohmann::json(rep->count) : nlohmann::json(nullptr)},
                    {"boundary_excluded", rep ? nlohmann::json(rep->boundary_excluded) : nlohmann::json(nullptr)},
                    {"locations", rep ? nlohmann::json(rep->locations) : nlohmann::json::array()}});
  }
  if (report::parse_format(o.format) == report::Format::csv)
    write_text(csv.str(), o.out);
  else
    write_text(nlohmann::json{{"rows", rows}}.dump(2) + "\n", o.out);
  return report::success;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uncertainty and node-count sweeps for the particle in a box, on a ring, and the "
               "harmonic oscillator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(report::version));

  CommonOptions common;
  std::string levels = "1:1";
  std::string paths;
  double tol = 1e-6;
  int threads = 1;
  int corrupt_level = 0;
  int states = 6;
  std::string source = "analytic";

  auto* sweep = app.add_subcommand("sweep", "tabulate uncertainties versus quantum number");
  auto* verify = app.add_subcommand("verify", "cross-check computation paths; exit 1 on any failure");
  for (auto* cmd : {sweep, verify}) {
    add_common(cmd, common);
    cmd->add_option("--levels", levels, "inclusive range LO:HI")->required();
    cmd->add_option("--paths", paths, "comma list of analytic, oracle, eigen");
    cmd->add_option("--tol", tol, "cross-path relative tolerance");
    cmd->add_option("--threads", threads, "levels evaluated concurrently");
    cmd->add_option("--corrupt-level", corrupt_level,
                    "self-test: lower the product at this level by hbar/4");
  }
  auto* eig = app.add_subcommand("eigensolve", "lowest finite-difference eigenpairs");
  add_common(eig, common);
  eig->add_option("--states", states, "number of eigenpairs");
  auto* nod = app.add_subcommand("nodes", "node counts of analytic or eigensolver states");
  add_common(nod, common);
  nod->add_option("--levels", levels, "inclusive range LO:HI")->required();
  nod->add_option("--source", source, "analytic or eigen");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return report::usage_error;
  }

  try {
    if (eig->parsed()) return run_eigensolve(common, states);
    if (nod->parsed()) return run_nodes(common, levels, source);

    report::SweepConfig cfg;
    cfg.system = make_spec(common);
    cfg.levels = report::parse_levels(levels);
    if (!paths.empty())
      cfg.paths = report::parse_paths(paths);
    else if (verify->parsed())
      cfg.paths = {Provenance::analytic, Provenance::oracle};
    cfg.grid_points = common.grid_points;
    cfg.tolerance = tol;
    cfg.format = report::parse_format(common.format);
    cfg.output = common.out;
    cfg.threads = threads;
    auto* cmd = sweep->parsed() ? sweep : verify;
    if (cmd->get_option("--corrupt-level")->count() > 0) cfg.corrupt_level = corrupt_level;

    if (verify->parsed()) return report::verify(cfg, std::cout);
    report::emit(report::run_sweep(cfg), cfg, std::cout);
    return report::success;
  } catch (const std::exception& e) {
    std::cerr << "qnodes: " << e.what() << '\n';
    return report::exit_code_for(e);
  }
}
