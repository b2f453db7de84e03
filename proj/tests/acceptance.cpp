// Acceptance suite: one PASS/FAIL line per criterion, with its runtime
// against the budget. Usage: qnodes_acceptance <path-to-qnodes-cli>

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "qnodes/analytic.hpp"
#include "qnodes/eigen.hpp"
#include "qnodes/nodes.hpp"
#include "qnodes/oracle.hpp"
#include "reference_values.hpp"

using namespace qnodes;

namespace {

std::string cli;

struct Checker {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 20) failures.push_back(what);
  }
};

std::string str(double v) {
  std::ostringstream o;
  o.precision(17);
  o << v;
  return o.str();
}

double rel(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

struct Run {
  int status = -1;
  std::string out;
};

Run run_cli(const std::string& args) {
  Run r;
  const std::string cmd = "'" + cli + "' " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  const int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

// 1 ----------------------------------------------------------------------
void oscillator_product(Checker& c) {
  const auto osc = SystemSpec::oscillator();
  for (int n = 0; n <= 100; ++n) {
    const double want = n + 0.5;
    const auto r = analytic::uncertainties(osc, {n});
    c.expect(rel(r.product, want) <= 1e-12, "analytic product n=" + std::to_string(n) + " = " + str(r.product));
    const auto e = analytic::oscillator_expectations(osc, n);
    const double from_moments = std::sqrt(e.mean_q2 - e.mean_q * e.mean_q) * std::sqrt(e.mean_p2 - e.mean_p * e.mean_p);
    c.expect(rel(from_moments, want) <= 1e-12, "moment product n=" + std::to_string(n) + " = " + str(from_moments));
  }
  const auto grid = oracle::default_grid(osc, {20});
  for (int n = 0; n <= 20; ++n) {
    const auto r = oracle::oracle_uncertainties(osc, {n}, grid);
    c.expect(rel(r.product, n + 0.5) <= 1e-6, "oracle product n=" + std::to_string(n) + " = " + str(r.product));
  }
}

// 2 ----------------------------------------------------------------------
void box_formulas(Checker& c) {
  const auto box = SystemSpec::box();
  for (int n = 1; n <= 100; ++n) {
    const double k = n * pi;
    const double dx = std::sqrt(1.0 / 12.0 - 1.0 / (2.0 * k * k));
    const auto r = analytic::uncertainties(box, {n});
    c.expect(rel(r.delta_q, dx) <= 1e-12, "analytic dx n=" + std::to_string(n));
    c.expect(rel(r.delta_p, k) <= 1e-12, "analytic dp n=" + std::to_string(n));
    c.expect(rel(r.product, k * dx) <= 1e-12, "analytic product n=" + std::to_string(n));
  }
  const auto grid = oracle::default_grid(box, {20});
  c.expect(grid.points() == 4001, "box default grid has " + std::to_string(grid.points()) + " points");
  for (int n = 1; n <= 20; ++n) {
    const auto a = analytic::uncertainties(box, {n});
    const auto o = oracle::oracle_uncertainties(box, {n}, grid);
    for (auto [got, want, name] : {std::tuple{o.delta_q, a.delta_q, "dx"}, std::tuple{o.delta_p, a.delta_p, "dp"},
                                   std::tuple{o.product, a.product, "product"}})
      c.expect(rel(got, want) <= 1e-6, std::string("oracle ") + name + " n=" + std::to_string(n) + " = " + str(got));
  }
  const double ground = oracle::oracle_uncertainties(box, {1}, grid).product;
  c.expect(std::abs(ground - 0.567862) < 5e-7, "oracle ground-state product " + str(ground));
  c.expect(rel(ground, ref::box_product_n1) <= 1e-6, "oracle ground-state product vs reference " + str(ground));
}

// 3 ----------------------------------------------------------------------
void heisenberg_bound(Checker& c) {
  const auto box = SystemSpec::box();
  const auto osc = SystemSpec::oscillator();
  for (int n = 1; n <= 100; ++n) {
    const auto r = analytic::uncertainties(box, {n});
    c.expect(r.product >= r.bound - 1e-12, "box n=" + std::to_string(n) + " below bound");
    c.expect(std::abs(r.product - r.bound) > 1e-12, "box n=" + std::to_string(n) + " saturates the bound");
  }
  for (int n = 0; n <= 100; ++n) {
    const auto r = analytic::uncertainties(osc, {n});
    c.expect(r.product >= r.bound - 1e-12, "oscillator n=" + std::to_string(n) + " below bound");
    const bool equal = std::abs(r.product - r.bound) <= 1e-12;
    c.expect(equal == (n == 0), "oscillator n=" + std::to_string(n) + (equal ? " saturates" : " misses") + " the bound");
  }
}

// 4 ----------------------------------------------------------------------
void node_laws(Checker& c) {
  const auto box = SystemSpec::box();
  const auto osc = SystemSpec::oscillator();
  const auto ring = SystemSpec::ring();
  auto check = [&](const SampledFunction& psi, int want, const std::string& what) {
    const int got = nodes::count_nodes(psi).count;
    c.expect(got == want, what + ": " + std::to_string(got) + " nodes, expected " + std::to_string(want));
  };

  const auto gb = oracle::default_grid(box, {20});
  const auto go = oracle::default_grid(osc, {20});
  const auto gr = oracle::default_grid(ring, {10});
  for (int n = 1; n <= 20; ++n) check(oracle::sample_state(box, {n}, gb), n - 1, "box analytic n=" + std::to_string(n));
  for (int n = 0; n <= 20; ++n) check(oracle::sample_state(osc, {n}, go), n, "oscillator analytic n=" + std::to_string(n));
  for (int m = -10; m <= 10; ++m)
    check(oracle::sample_state(ring, {m}, gr), 2 * std::abs(m), "ring analytic m=" + std::to_string(m));

  const auto eb = eigen::solve_lowest(eigen::build_hamiltonian(box, gb), 20);
  const auto eo = eigen::solve_lowest(eigen::build_hamiltonian(osc, go), 21);
  const auto er = eigen::solve_lowest(eigen::build_hamiltonian(ring, gr), 1);
  for (int i = 0; i < 20; ++i) check(eb.states[i], i, "box eigen n=" + std::to_string(i + 1));
  for (int i = 0; i <= 20; ++i) check(eo.states[i], i, "oscillator eigen n=" + std::to_string(i));
  check(er.states[0], 0, "ring eigen m=0");
}

// 5 ----------------------------------------------------------------------
void eigensolver_fidelity(Checker& c) {
  const std::vector<SystemSpec> systems{SystemSpec::box(), SystemSpec::oscillator(), SystemSpec::ring()};
  for (const auto& spec : systems) {
    const std::string name(to_string(spec.kind()));
    const int highest = std::abs(eigen::level_at(spec, 5).value);
    const auto r = eigen::solve_lowest(eigen::build_hamiltonian(spec, oracle::default_grid(spec, {highest})), 6);
    for (int i = 0; i < 6; ++i) {
      const auto level = eigen::level_at(spec, i);
      const double want = analytic::energy(spec, level);
      const double err = want == 0.0 ? std::abs(r.energies[i]) : rel(r.energies[i], want);
      c.expect(err <= 1e-3, name + " level " + std::to_string(level.value) + " energy " + str(r.energies[i]));
    }
  }

  // Halving the spacing, from the default grids and from coarse ones. On
  // the coarse grids the discretization error sits far above the eigenvalue
  // round-off (about eps * ||H||, growing as 1/h^2); on the default box grid
  // the ground state already feels it.
  struct Pair {
    SystemSpec spec;
    GridSpec coarse;
  };
  std::vector<Pair> pairs;
  for (const auto& spec : systems)
    pairs.push_back({spec, oracle::default_grid(spec, {std::abs(eigen::level_at(spec, 5).value)})});
  pairs.insert(pairs.end(), {
      {SystemSpec::box(), GridSpec(0.0, 1.0, 201, Boundary::dirichlet)},
      {SystemSpec::oscillator(), oracle::default_grid(SystemSpec::oscillator(), {5}, 1001)},
      {SystemSpec::ring(), GridSpec(0.0, 2.0 * pi, 128, Boundary::periodic)},
  });
  for (const auto& [spec, coarse] : pairs) {
    const auto fine = coarse.periodic() ? coarse.with_points(2 * coarse.points())
                                        : coarse.with_points(2 * coarse.points() - 1);
    const auto rc = eigen::solve_lowest(eigen::build_hamiltonian(spec, coarse), 6);
    const auto rf = eigen::solve_lowest(eigen::build_hamiltonian(spec, fine), 6);
    for (int i = 0; i < 6; ++i) {
      const auto level = eigen::level_at(spec, i);
      const double want = analytic::energy(spec, level);
      if (want == 0.0) continue;  // the ring ground state is exact on every grid
      const double ratio = std::abs(rc.energies[i] - want) / std::abs(rf.energies[i] - want);
      c.expect(ratio >= 3.5, std::string(to_string(spec.kind())) + " level " + std::to_string(level.value) +
                                 " error ratio " + str(ratio) + " from " +
                                 std::to_string(coarse.points()) + " points");
    }
  }
}

// 6 ----------------------------------------------------------------------
void ring_statistics(Checker& c) {
  const auto ring = SystemSpec::ring();
  const auto grid = oracle::default_grid(ring, {10});
  for (int m = -10; m <= 10; ++m) {
    std::vector<double> rho(grid.points());
    for (int i = 0; i < grid.points(); ++i) rho[i] = analytic::ring_density(ring, m, grid.node(i));
    const auto flat = nodes::density_flatness(rho);
    c.expect(flat.max_deviation == 0.0, "density deviation m=" + std::to_string(m) + " = " + str(flat.max_deviation));
    c.expect(flat.is_nodeless && *std::min_element(rho.begin(), rho.end()) > 0.0,
             "density not positive m=" + std::to_string(m));

    c.expect(analytic::ring_Lz_stats(ring, m).delta_Lz <= 1e-10, "analytic dLz m=" + std::to_string(m));
    const auto o = oracle::oracle_uncertainties(ring, {m}, grid);
    c.expect(o.delta_p <= 1e-10, "oracle dLz m=" + std::to_string(m) + " = " + str(o.delta_p));
    c.expect(std::abs(o.delta_q - 2.0 * pi / std::sqrt(12.0)) <= 1e-8, "oracle dtheta m=" + std::to_string(m) + " = " + str(o.delta_q));
  }

  const double s = 1.0 / std::sqrt(2.0);
  const RingSuperposition pm({{1, s}, {-1, s}});
  const double by_coeff = analytic::ring_Lz_stats(ring, pm).delta_Lz;
  const double by_quad = oracle::momentum_moments(oracle::sample_superposition(pm, grid), ring.constants()).spread;
  c.expect(std::abs(by_coeff - 1.0) <= 1e-10, "superposition dLz by coefficients " + str(by_coeff));
  c.expect(std::abs(by_quad - 1.0) <= 1e-10, "superposition dLz by quadrature " + str(by_quad));

  const double uniform = analytic::ring_theta_stats(0).delta_theta;
  c.expect(std::abs(uniform - 2.0 * pi / std::sqrt(12.0)) <= 1e-8, "uniform dtheta " + str(uniform));
}

// 7 ----------------------------------------------------------------------
void monotonicity(Checker& c) {
  const auto box = SystemSpec::box();
  const auto osc = SystemSpec::oscillator();
  const double limit = 1.0 / std::sqrt(12.0);
  const double dp1 = analytic::uncertainties(box, {1}).delta_p;
  for (int n = 1; n <= 50; ++n) {
    const auto b = analytic::uncertainties(box, {n});
    const auto b1 = analytic::uncertainties(box, {n + 1});
    c.expect(b1.product > b.product, "box product not increasing at n=" + std::to_string(n));
    c.expect(b1.delta_q > b.delta_q, "box dx not increasing at n=" + std::to_string(n));
    c.expect(b.delta_q < limit, "box dx above a/sqrt(12) at n=" + std::to_string(n));
    c.expect(b.delta_p == n * dp1, "box dp not linear at n=" + std::to_string(n));
    c.expect(analytic::uncertainties(osc, {n}).product > analytic::uncertainties(osc, {n - 1}).product,
             "oscillator product not increasing at n=" + std::to_string(n));
  }
}

// 8 ----------------------------------------------------------------------
void cli_contract(Checker& c) {
  const std::string sweep = "sweep --system box --levels 1:20 --paths analytic,oracle,eigen";
  const auto a = run_cli(sweep);
  const auto b = run_cli(sweep);
  const auto t = run_cli(sweep + " --threads 4");
  c.expect(a.status == 0, "sweep exit status " + std::to_string(a.status));
  c.expect(a.out.size() > 100 && a.out == b.out, "sweep output differs between runs");
  c.expect(a.out == t.out, "sweep output depends on the thread count");
  const auto ring = run_cli("sweep --system ring --levels=-3:3 --paths analytic,oracle,eigen --format json");
  c.expect(ring.status == 0 && ring.out == run_cli("sweep --system ring --levels=-3:3 --paths analytic,oracle,eigen --format json").out,
           "ring JSON sweep not deterministic");

  struct Case {
    std::string args;
    int want;
  };
  const std::vector<Case> cases{
      {"verify --system box --levels 1:20 --paths analytic,oracle", 0},
      {"verify --system oscillator --levels 0:10 --paths analytic,oracle,eigen --tol 1e-3", 0},
      {"verify --system ring --levels=-5:5 --paths analytic,oracle", 0},
      {"verify --system box --levels 1:20 --paths analytic,oracle --corrupt-level 5", 1},
      {"verify --system box --levels 1:20 --paths analytic,oracle --tol 1e-15", 1},
      {"verify --system box --levels 1:3 --paths analytic", 2},
      {"verify --system well --levels 1:3", 2},
      {"verify --system box --levels 0:3", 2},
      {"verify --system box --param radius=2 --levels 1:3", 2},
      {"verify --system box --levels 1:20 --paths analytic,oracle --grid-points 21", 3},
  };
  for (const auto& k : cases) {
    const int got = run_cli(k.args).status;
    c.expect(got == k.want, "'" + k.args + "' exited " + std::to_string(got) + ", expected " + std::to_string(k.want));
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: qnodes_acceptance <qnodes-cli>\n";
    return 2;
  }
  cli = argv[1];

  struct Criterion {
    const char* title;
    double budget;
    std::function<void(Checker&)> body;
  };
  const std::vector<Criterion> criteria{
      {"oscillator uncertainty product", 10.0, oscillator_product},
      {"box formulas", 10.0, box_formulas},
      {"Heisenberg bound", 5.0, heisenberg_bound},
      {"node laws", 30.0, node_laws},
      {"eigensolver fidelity", 60.0, eigensolver_fidelity},
      {"ring statistics", 5.0, ring_statistics},
      {"monotonicity properties", 1.0, monotonicity},
      {"CLI contract", 10.0, cli_contract},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& k = criteria[i];
    Checker c;
    const auto start = std::chrono::steady_clock::now();
    try {
      k.body(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > k.budget) c.failures.push_back("runtime " + str(secs) + " s over budget");
    const bool ok = c.failures.empty();
    failed += !ok;
    std::printf("%s [%zu] %s (%.2f s of %.0f s)\n", ok ? "PASS" : "FAIL", i + 1, k.title, secs, k.budget);
    for (const auto& f : c.failures) std::printf("    %s\n", f.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
