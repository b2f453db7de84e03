#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qnodes/report.hpp"
#include "reference_values.hpp"
#include "support.hpp"

using namespace qnodes;
using namespace qnodes::report;
using support::rel;

namespace {

SweepConfig config(SystemSpec spec, int lo, int hi, std::vector<Provenance> paths) {
  SweepConfig cfg;
  cfg.system = std::move(spec);
  cfg.levels = {lo, hi};
  cfg.paths = std::move(paths);
  return cfg;
}

std::string first_data_line(const std::string& csv, int skip = 0) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  for (int i = 0; i <= skip; ++i) std::getline(in, line);
  return line;
}

}  // namespace

TEST_CASE("level, path and format parsing") {
  CHECK(parse_levels("1:20").lo == 1);
  CHECK(parse_levels("1:20").hi == 20);
  CHECK(parse_levels("-3:3").lo == -3);
  CHECK(parse_levels("7").hi == 7);
  CHECK_THROWS_AS(parse_levels("a:b"), ConfigError);
  CHECK_THROWS_AS(parse_levels("1:"), ConfigError);
  CHECK_THROWS_AS(parse_levels("1:2:3"), ConfigError);

  CHECK(parse_paths("analytic,eigen") == std::vector<Provenance>{Provenance::analytic, Provenance::eigen});
  CHECK_THROWS_AS(parse_paths("analytic,guess"), ConfigError);
  CHECK_THROWS_AS(parse_paths(""), ConfigError);

  CHECK(parse_format("json") == Format::json);
  CHECK_THROWS_AS(parse_format("xml"), ConfigError);
}

TEST_CASE("system construction from parameters") {
  const auto box = make_system(SystemKind::box, {{"length", 2.0}}, 1.0);
  CHECK(box.as_box().length == 2.0);
  CHECK(box.as_box().mass == 1.0);
  const auto osc = make_system(SystemKind::oscillator, {{"omega", 3.0}, {"mass", 0.5}}, 0.1);
  CHECK(osc.as_oscillator().omega == 3.0);
  CHECK(osc.hbar() == 0.1);
  CHECK_THROWS_AS(make_system(SystemKind::ring, {{"radius", 1.0}}, 1.0), ConfigError);
  CHECK_THROWS_AS(make_system(SystemKind::box, {{"length", -1.0}}, 1.0), ConfigError);
}

TEST_CASE("sweep configuration validation") {
  CHECK_THROWS_AS(config(SystemSpec::box(), 0, 3, {Provenance::analytic}).validate(), ConfigError);
  CHECK_THROWS_AS(config(SystemSpec::box(), 4, 3, {Provenance::analytic}).validate(), ConfigError);
  CHECK_THROWS_AS(config(SystemSpec::oscillator(), -1, 3, {Provenance::analytic}).validate(), ConfigError);
  CHECK_NOTHROW(config(SystemSpec::ring(), -3, 3, {Provenance::analytic}).validate());
  CHECK_THROWS_AS(config(SystemSpec::box(), 1, 3, {}).validate(), ConfigError);
  CHECK_THROWS_AS(config(SystemSpec::box(), 1, 3, {Provenance::oracle, Provenance::oracle}).validate(), ConfigError);
  auto cfg = config(SystemSpec::box(), 1, 3, {Provenance::oracle});
  cfg.grid_points = 100;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.grid_points = 101;
  CHECK_NOTHROW(cfg.validate());
  cfg.tolerance = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("sweep rows") {
  const auto rows = run_sweep(config(SystemSpec::box(), 1, 3, {Provenance::analytic, Provenance::oracle}));
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].level == 1);
  CHECK(rows[0].path == Provenance::analytic);
  CHECK(rows[1].level == 1);
  CHECK(rows[1].path == Provenance::oracle);
  CHECK(rows[5].level == 3);
  CHECK(rel(rows[0].product, ref::box_product_n1) < 1e-15);
  CHECK(rel(rows[2].product, ref::box_product_n2) < 1e-15);
  CHECK(rel(rows[4].product, ref::box_product_n3) < 1e-15);
  for (const auto& r : rows) {
    CHECK(r.satisfied == Satisfied::yes);
    CHECK(r.nodes_counted == r.nodes_predicted);
    REQUIRE(r.disagreement.has_value());
    CHECK(*r.disagreement < 1e-6);
  }

  const auto ring = run_sweep(config(SystemSpec::ring(), -2, 2, {Provenance::analytic, Provenance::eigen}));
  REQUIRE(ring.size() == 10);
  for (const auto& r : ring) {
    CHECK(r.satisfied == Satisfied::not_applicable);
    // Eigenvectors of a degenerate pair are standing waves cos/sin(m theta),
    // so only the analytic rows have a definite L_z.
    if (r.path == Provenance::analytic) CHECK(r.delta_p == 0.0);
    if (r.path == Provenance::eigen) CHECK(std::abs(r.delta_p - std::abs(r.level)) < 1e-6);
  }
  CHECK(ring[0].level == -2);
  CHECK(ring[0].nodes_counted == 4);
}

TEST_CASE("CSV layout") {
  const auto csv = to_csv(run_sweep(config(SystemSpec::box(), 1, 2, {Provenance::analytic})));
  CHECK(csv.rfind(std::string(csv_header) + "\n", 0) == 0);
  CHECK(first_data_line(csv).rfind("box,1,0,", 0) == 0);

  const auto osc = to_csv(run_sweep(config(SystemSpec::oscillator(), 0, 0, {Provenance::analytic})));
  CHECK(first_data_line(osc).find(",0.500000000000,0.500000000000,true,") != std::string::npos);

  CHECK(format_number(-0.0) == "0.00000000000");
  CHECK(format_number(0.5) == "0.500000000000");
}

TEST_CASE("JSON round trip") {
  auto cfg = config(SystemSpec::ring(), -1, 1, {Provenance::analytic, Provenance::oracle, Provenance::eigen});
  cfg.format = Format::json;
  const auto rows = run_sweep(cfg);
  const auto doc = to_json(rows, cfg);
  CHECK(doc["metadata"]["version"] == std::string(version));
  CHECK(doc["metadata"]["system"] == "ring");
  CHECK(rows_from_json(doc) == rows);
  CHECK(rows_from_json(nlohmann::json::parse(doc.dump())) == rows);
}

TEST_CASE("sweeps are deterministic and thread-count independent") {
  auto cfg = config(SystemSpec::oscillator(), 0, 12, {Provenance::analytic, Provenance::oracle, Provenance::eigen});
  const auto a = to_csv(run_sweep(cfg));
  const auto b = to_csv(run_sweep(cfg));
  CHECK(a == b);
  cfg.threads = 4;
  CHECK(to_csv(run_sweep(cfg)) == a);
  cfg.threads = 64;
  CHECK(to_csv(run_sweep(cfg)) == a);
}

TEST_CASE("verify exit codes") {
  std::ostringstream log;
  auto ok = config(SystemSpec::box(), 1, 20, {Provenance::analytic, Provenance::oracle});
  CHECK(verify(ok, log) == success);
  CHECK(log.str().find("OK 40 rows verified") != std::string::npos);

  auto eig = config(SystemSpec::oscillator(), 0, 10, {Provenance::analytic, Provenance::eigen});
  eig.tolerance = 1e-3;
  CHECK(verify(eig, log) == success);

  auto strict = ok;
  strict.tolerance = 1e-15;
  CHECK(verify(strict, log) == verification_failed);

  auto corrupt = ok;
  corrupt.corrupt_level = 7;
  std::ostringstream corrupt_log;
  CHECK(verify(corrupt, corrupt_log) == verification_failed);
  CHECK(corrupt_log.str().find("level 7") != std::string::npos);

  auto single = config(SystemSpec::box(), 1, 3, {Provenance::analytic});
  CHECK(verify(single, log) == usage_error);

  auto coarse = ok;
  coarse.grid_points = 21;
  std::ostringstream coarse_log;
  CHECK(verify(coarse, coarse_log) == numerical_failure);
  CHECK(coarse_log.str().find("level") != std::string::npos);
}

TEST_CASE("exit code mapping") {
  CHECK(exit_code_for(ConfigError("x")) == usage_error);
  CHECK(exit_code_for(DomainError("x")) == usage_error);
  CHECK(exit_code_for(GridError("x")) == numerical_failure);
  CHECK(exit_code_for(ConvergenceError("x")) == numerical_failure);
  CHECK(exit_code_for(OverflowError("x")) == numerical_failure);
  CHECK(exit_code_for(DegenerateError("x")) == numerical_failure);
  CHECK(exit_code_for(NormalizationError("x")) == numerical_failure);
}

TEST_CASE("emit writes files and reports write failures") {
  const auto dir = std::filesystem::temp_directory_path() / "qnodes_emit_test";
  std::filesystem::create_directories(dir);
  auto cfg = config(SystemSpec::box(), 1, 2, {Provenance::analytic});
  cfg.output = (dir / "rows.csv").string();
  const auto rows = run_sweep(cfg);
  std::ostringstream unused;
  emit(rows, cfg, unused);
  std::ifstream in(cfg.output);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() == to_csv(rows));
  CHECK(unused.str().empty());

  cfg.output = (dir / "missing" / "deeper" / "rows.csv").string();
  try {
    emit(rows, cfg, unused);
    FAIL("expected a write failure");
  } catch (const Error& e) {
    CHECK(exit_code_for(e) == numerical_failure);
  }
  std::filesystem::remove_all(dir);
}
