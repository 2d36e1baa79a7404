// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kflow/experiments.hpp"
#include "kflow/ops.hpp"

using namespace kflow;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s  (%s)\n", criterion, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

fs::path out_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("kflow_acceptance_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Params default_params() { return Params(0.1, 0.5, PressureLaw(1.0, 2.0)); }

// --- criterion 1: pointwise pressure identity --------------------------------

void criterion_identity() {
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (double gamma : {1.5, 2.0, 3.0}) {
    const PressureLaw law(1.0, gamma);
    for (int k = 0; k < 10000; ++k) {
      const double rho = 0.05 + 5.0 * u01(rng);
      const double r = 0.05 + 5.0 * u01(rng);
      const std::array<double, 2> grho{4.0 * u01(rng) - 2.0,
                                       4.0 * u01(rng) - 2.0};
      const std::array<double, 2> gr{4.0 * u01(rng) - 2.0,
                                     4.0 * u01(rng) - 2.0};
      const Identity5Terms t = identity5_terms(rho, r, grho, gr, law);
      worst = std::max(worst,
                       std::abs(t.residual()) / std::max(1.0, t.scale()));
    }
  }
  std::ostringstream ss;
  ss << "max scaled residual " << worst;
  report(1, worst <= 1e-12, ss.str());
}

// --- criterion 2: pressure-potential ODE --------------------------------------

void criterion_potential_ode() {
  std::mt19937_64 rng(2);
  double worst = 0.0;
  for (double gamma : {1.5, 2.0, 3.0}) {
    const PressureLaw law(1.7, gamma);
    for (int k = 0; k < 1000; ++k) {
      const double rho = 0.02 + 6.0 * u01(rng);
      const double lhs = rho * law.dpotential(rho) - law.potential(rho);
      const double p = law.pressure(rho);
      worst = std::max(worst, std::abs(lhs - p) / std::max(1.0, std::abs(p)));
    }
  }
  std::ostringstream ss;
  ss << "max relative ODE defect " << worst;
  report(2, worst <= 1e-12, ss.str());
}

// --- criterion 3: state-transform round trip -----------------------------------

void criterion_round_trip() {
  const Grid g(128, 1.0);
  bool pass = true;
  std::ostringstream ss;

  PrimState s{ScalarField(g), VectorField(g)};
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coord(0, i);
    s.rho[i] = std::exp(0.5 * std::sin(2.0 * std::numbers::pi * x));
    s.u.at(0, i) = 0.8 * std::cos(2.0 * std::numbers::pi * x);
  }
  double worst = 0.0;
  for (double kappa : {0.2, 0.5, 0.8}) {
    const Params p(0.3, kappa, PressureLaw(1.0, 2.0));
    const PrimState back = to_primitive(to_augmented(s, p), p);
    for (std::size_t i = 0; i < g.size(); ++i) {
      worst = std::max(worst, std::abs(back.u.at(0, i) - s.u.at(0, i)) /
                                  std::max(1.0, std::abs(s.u.at(0, i))));
      if (back.rho[i] != s.rho[i]) pass = false;
    }
  }
  if (worst > 1e-14) pass = false;
  ss << "max relative velocity defect " << worst;

  // mu = 0 degeneration is bitwise.
  const Params p0(0.0, 0.5, PressureLaw(1.0, 2.0));
  const AugState a0 = to_augmented(s, p0);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (a0.v.at(0, i) != s.u.at(0, i) || a0.w.at(0, i) != 0.0) pass = false;

  // Constant density degeneration is bitwise.
  PrimState sc{ScalarField(g, 1.7), s.u};
  const AugState ac = to_augmented(sc, default_params());
  for (std::size_t i = 0; i < g.size(); ++i)
    if (ac.v.at(0, i) != sc.u.at(0, i) || ac.w.at(0, i) != 0.0) pass = false;

  report(3, pass, ss.str());
}

// --- criteria 4 and 6: formulation equivalence and conservation -----------------

struct PairedRun {
  Trajectory prim;
  Trajectory aug;
};

PairedRun paired_run(std::size_t n, double t_end) {
  const Params p = default_params();
  SchemeConfig cfg;
  cfg.t_end = t_end;
  cfg.snapshot_every = t_end / 10.0;
  const Grid g(n, 1.0);
  const PrimState init = make_initial_data(g, "sin", 0.1, 0, 4);
  cfg.formulation = Formulation::primitive;
  Trajectory prim = simulate(init, p, cfg);
  cfg.formulation = Formulation::augmented;
  Trajectory aug = simulate(to_augmented(init, p), p, cfg);
  return PairedRun{std::move(prim), std::move(aug)};
}

double final_gap(const PairedRun& runs, const Params& p, double& scale) {
  const AugState& a = runs.aug.snapshots.back();
  const PrimState pa = to_primitive(a, p);
  const PrimState pp = to_primitive(runs.prim.snapshots.back(), p);
  ScalarField zero_s(pa.rho.grid());
  VectorField zero_v(pa.rho.grid());
  scale = l2_error(pa.rho, zero_s) + l2_error(pa.u, zero_v);
  return l2_error(pa.rho, pp.rho) + l2_error(pa.u, pp.u);
}

void criteria_equivalence_and_conservation() {
  const Params p = default_params();
  std::vector<std::pair<double, double>> gaps;
  double gap256 = 0.0, scale256 = 1.0;
  bool conserved = true;
  double worst_mass = 0.0, worst_mom = 0.0;

  for (std::size_t n : {64, 128, 256}) {
    const PairedRun runs = paired_run(n, 0.5);
    double scale = 1.0;
    const double gap = final_gap(runs, p, scale);
    gaps.emplace_back(1.0 / static_cast<double>(n), gap);
    if (n == 256) {
      gap256 = gap;
      scale256 = scale;
    }
    // Criterion 6 on all snapshots of both runs.
    for (const Trajectory* traj : {&runs.prim, &runs.aug}) {
      const PrimState init = to_primitive(traj->snapshots.front(), p);
      const double m0 = integrate(init.rho);
      ScalarField mom(init.rho.grid());
      for (std::size_t i = 0; i < mom.size(); ++i)
        mom[i] = init.rho[i] * init.u.at(0, i);
      const double mom0 = integrate(mom);
      const double mom_scale =
          std::max(1.0, m0 * std::sqrt(2.0 * kappa_entropy(
                                                 traj->snapshots.front(), p)
                                                 .kinetic_v));
      for (const AugState& snap : traj->snapshots) {
        const PrimState ps = to_primitive(snap, p);
        const double m = integrate(ps.rho);
        ScalarField mk(ps.rho.grid());
        for (std::size_t i = 0; i < mk.size(); ++i)
          mk[i] = ps.rho[i] * ps.u.at(0, i);
        const double mo = integrate(mk);
        worst_mass = std::max(worst_mass, std::abs(m - m0) / std::abs(m0));
        worst_mom = std::max(worst_mom, std::abs(mo - mom0) / mom_scale);
      }
    }
  }
  if (worst_mass > 1e-12 || worst_mom > 1e-11) conserved = false;

  const FitResult fit = fit_power(gaps);
  const bool pass4 = fit.rate >= 1.8 && gap256 < 1e-4 * scale256;
  std::ostringstream s4;
  s4 << "gap order " << fit.rate << ", gap@256 " << gap256 << " vs scale "
     << scale256;
  report(4, pass4, s4.str());

  std::ostringstream s6;
  s6 << "max mass drift " << worst_mass << ", max momentum drift " << worst_mom;
  report(6, conserved, s6.str());
}

// --- criterion 5: entropy budget under refinement -------------------------------

void criterion_budget() {
  bool pass = true;
  std::vector<std::pair<double, double>> tol_points;
  std::ostringstream ss;
  for (std::size_t n : {64, 128, 256}) {
    ExperimentConfig cfg;
    cfg.n = n;
    cfg.scheme.t_end = 0.3;
    cfg.scheme.snapshot_every = 0.03;
    const Grid g = cfg.make_grid();
    const Trajectory traj = simulate(
        to_augmented(make_initial_data(g, "sin", 0.1, 0, 4), cfg.params),
        cfg.params, cfg.scheme);
    const BudgetSeries budget = entropy_budget(traj);
    if (!budget.pass) pass = false;
    tol_points.emplace_back(1.0 / static_cast<double>(n),
                            budget.samples.back().tol);
    ss << "n=" << n << " margin " << budget.max_rel_defect << "; ";
  }
  const FitResult tol_fit = fit_power(tol_points);
  if (tol_fit.rate < 1.8) pass = false;
  ss << "tol order " << tol_fit.rate;

  // Inviscid conservation within the same tolerance model.
  ExperimentConfig cfg0;
  cfg0.n = 256;
  cfg0.params = Params(0.0, 0.5, PressureLaw(1.0, 2.0));
  cfg0.scheme.t_end = 0.2;
  cfg0.scheme.snapshot_every = 0.02;
  const Grid g0 = cfg0.make_grid();
  const Trajectory t0 = simulate(
      to_augmented(make_initial_data(g0, "sin", 0.1, 0, 4), cfg0.params),
      cfg0.params, cfg0.scheme);
  const BudgetSeries b0 = entropy_budget(t0);
  if (!b0.pass) pass = false;
  ss << "; inviscid margin " << b0.max_rel_defect;
  report(5, pass, ss.str());
}

// --- criterion 7: weak-strong stability ------------------------------------------

void criterion_weak_strong() {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::weak_strong;
  cfg.n = 256;
  cfg.ref_multiplier = 4;
  cfg.delta = 0.01;
  cfg.scheme.t_end = 0.5;
  cfg.scheme.snapshot_every = 0.025;
  const RunOutcome out = run_weak_strong(cfg, out_dir("weak_strong"));
  std::string flat = out.summary;
  for (char& c : flat)
    if (c == '\n') c = ' ';
  report(7, out.pass, flat);
}

// --- criterion 8: inviscid sweep ---------------------------------------------------

void criterion_sweep() {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::inviscid_sweep;
  cfg.n = 128;
  cfg.ref_multiplier = 4;
  cfg.scheme.t_end = 0.2;
  cfg.scheme.snapshot_every = 0.02;
  cfg.threads = 4;
  const RunOutcome out = run_inviscid_sweep(cfg, out_dir("sweep"));
  std::string flat = out.summary;
  for (char& c : flat)
    if (c == '\n') c = ' ';
  report(8, out.pass, flat);
}

// --- criterion 9: manufactured convergence ------------------------------------------

void criterion_manufactured() {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::manufactured;
  cfg.scheme.t_end = 0.25;
  cfg.scheme.snapshot_every = 0.25;
  const RunOutcome out = run_manufactured(cfg, out_dir("manufactured"));
  std::string flat = out.summary;
  for (char& c : flat)
    if (c == '\n') c = ' ';
  report(9, out.pass, flat);
}

// --- criterion 10: 2D smoke ----------------------------------------------------------

void criterion_2d_smoke() {
  bool pass = true;
  std::ostringstream ss;

  ExperimentConfig cfg;
  cfg.dim = 2;
  cfg.n = 128;
  cfg.scheme.t_end = 0.1;
  cfg.scheme.snapshot_every = 0.02;
  const Grid g = cfg.make_grid();
  const Trajectory traj = simulate(
      to_augmented(make_initial_data(g, "sin", 0.1, 0, 4), cfg.params),
      cfg.params, cfg.scheme);
  const BudgetSeries budget = entropy_budget(traj);
  if (!budget.pass) pass = false;
  double max_dA = 0.0;
  for (const BudgetSample& s : budget.samples)
    max_dA = std::max(max_dA, s.report.dissipation_A);
  if (!(max_dA > 0.0)) pass = false;
  ss << "2D budget margin " << budget.max_rel_defect << ", max dissipation_A "
     << max_dA;

  // In 1D the antisymmetric gradient vanishes identically.
  ExperimentConfig cfg1;
  cfg1.n = 64;
  cfg1.scheme.t_end = 0.1;
  cfg1.scheme.snapshot_every = 0.02;
  const Grid g1 = cfg1.make_grid();
  const Trajectory t1 = simulate(
      to_augmented(make_initial_data(g1, "sin", 0.1, 0, 4), cfg1.params),
      cfg1.params, cfg1.scheme);
  for (const AugState& s : t1.snapshots)
    if (kappa_entropy(s, cfg1.params).dissipation_A != 0.0) pass = false;

  report(10, pass, ss.str());
}

// --- criterion 11: determinism --------------------------------------------------------

void criterion_determinism() {
  ExperimentConfig cfg;
  cfg.family = "fourier";
  cfg.seed = 7;
  cfg.n = 64;
  cfg.scheme.t_end = 0.1;
  cfg.scheme.snapshot_every = 0.02;
  const fs::path d1 = out_dir("det_a");
  const fs::path d2 = out_dir("det_b");
  run_entropy_audit(cfg, d1);
  run_entropy_audit(cfg, d2);
  const bool same_csv = slurp(d1 / "entropy.csv") == slurp(d2 / "entropy.csv");
  const bool same_cfg =
      slurp(d1 / "config.resolved") == slurp(d2 / "config.resolved");
  const bool nonempty = !slurp(d1 / "entropy.csv").empty();
  report(11, same_csv && same_cfg && nonempty,
         same_csv ? "byte-identical CSV outputs" : "CSV outputs differ");
}

}  // namespace

int main() {
  criterion_identity();
  criterion_potential_ode();
  criterion_round_trip();
  criteria_equivalence_and_conservation();
  criterion_budget();
  criterion_weak_strong();
  criterion_sweep();
  criterion_manufactured();
  criterion_2d_smoke();
  criterion_determinism();
  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criteria failed\n", g_failures);
  return 1;
}
