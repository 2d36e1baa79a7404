#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kflow/config.hpp"
#include "kflow/dynamics.hpp"
#include "kflow/entropy.hpp"
#include "kflow/fit.hpp"

namespace kflow {

enum class ExperimentKind { entropy_audit, weak_strong, inviscid_sweep, manufactured };

ExperimentKind parse_kind(const std::string& name);
const char* kind_name(ExperimentKind kind);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::entropy_audit;

  // [grid]
  int dim = 1;
  std::size_t n = 128;
  double length = 1.0;
  std::size_t n2 = 0;      // 2D only; 0 means same as n
  double length2 = 0.0;    // 2D only; 0 means same as length

  // [params]
  Params params{0.1, 0.5, PressureLaw(1.0, 2.0)};

  // [scheme]
  SchemeConfig scheme;

  // [experiment]
  std::string family = "sin";  // sin | fourier
  double amplitude = 0.1;      // initial-data amplitude
  double delta = 0.01;         // weak_strong perturbation amplitude
  unsigned long seed = 0;
  int modes = 4;                                       // fourier family
  std::vector<double> epsilons{0.1, 0.05, 0.025, 0.0125};  // inviscid sweep
  int ref_multiplier = 4;                              // reference resolution
  double alpha = 0.3, beta = 0.5;                      // manufactured fields
  std::vector<std::size_t> n_list{32, 64, 128, 256};   // manufactured grids
  int threads = 1;

  static ExperimentConfig from_file(const std::string& path, ExperimentKind kind);
  void validate() const;
  Grid make_grid() const;
  Grid make_grid(std::size_t n_override) const;
  std::string resolved_text() const;
  std::string run_id() const;  // FNV-1a hash of the resolved text
};

/// Built-in smooth positive initial-data families.
/// "sin": single-harmonic density and velocity perturbations around rest.
/// "fourier": seeded random smooth data with at most `modes` Fourier modes.
PrimState make_initial_data(const Grid& grid, const std::string& family,
                            double amplitude, unsigned long seed, int modes);

/// Offset initial data by a second-harmonic perturbation of amplitude delta.
PrimState perturb_initial(const PrimState& base, double delta);

/// Restrict a fine-grid state to a coarse grid by node sampling; the fine
/// resolution must be an integer multiple of the coarse one.
AugState restrict_state(const AugState& fine, const Grid& coarse);

// --- discrete kappa-entropy budget -----------------------------------------

/// Budget tolerance constant C in tol = C*(dx^2 + dt^4)*t*scale, calibrated
/// once on the coarsest audit run (1D n=64, sin family) and fixed.
inline constexpr double kEntropyBudgetC = 40.0;

struct BudgetSample {
  double time;
  EntropyReport report;
  double integrated_dissipation;  // trapezoid in time
  double defect;                  // total(t) + integral - total(0)
  double tol;
};

struct BudgetSeries {
  std::vector<BudgetSample> samples;
  bool pass = false;       // defect <= tol everywhere (|defect| <= tol if mu=0)
  double max_rel_defect = 0.0;  // max defect/tol
};

BudgetSeries entropy_budget(const Trajectory& traj);

// --- relative entropy along trajectories ------------------------------------

/// Per-sample audits of a weak trajectory against a same-grid reference
/// sampled at the same times; reference time derivatives are centered
/// differences at snapshot cadence. The cumulative defect
/// (int RHS) - (E(t)-E(0)) - (int LHS) is filled in each report.
std::vector<RelEntropyReport> audit_series(const std::vector<double>& times,
                                           const std::vector<AugState>& weak,
                                           const std::vector<AugState>& ref,
                                           const Params& p);

/// Smallest C >= 0 with E(t) <= margin*E(0)*exp(C*t) over all samples.
double smallest_envelope_rate(const std::vector<double>& times,
                              const std::vector<double>& energy, double margin);

/// Index one past the last snapshot of the smooth window: the window ends
/// when max|grad u| exceeds 10x its initial value.
std::size_t smooth_window(const Trajectory& traj);

/// Smallest c0 >= 0 with
///   E(t) <= E(0) exp(c0 D(t)) + eps * int_0^t exp(c0 (D(t)-D(s))) P(s) ds
/// where D is the cumulative integral of |div U|_inf. Returns c0 < 0 when no
/// c0 <= c_max works.
double fit_dissipative_c0(const std::vector<double>& times,
                          const std::vector<double>& energy,
                          const std::vector<double>& divu_inf,
                          const std::vector<double>& viscous_production,
                          double eps, double c_max = 256.0);

// --- manufactured solutions (1D) ---------------------------------------------

/// Travelling-wave fields rho = exp(alpha sin(2 pi (x-t))),
/// u = beta cos(2 pi (x-t)) on a unit-length domain, with the source terms
/// that make them exact solutions of the forced systems.
struct ManufacturedCase {
  double alpha;
  double beta;
  Params params;

  ScalarField exact_rho(const Grid& g, double t) const;
  VectorField exact_u(const Grid& g, double t) const;
  VectorField exact_v(const Grid& g, double t) const;
  VectorField exact_w(const Grid& g, double t) const;
  Forcing1D forcing_primitive() const;
  Forcing1D forcing_augmented() const;
};

/// L2 norm of the difference between two scalar/vector fields.
double l2_error(const ScalarField& a, const ScalarField& b);
double l2_error(const VectorField& a, const VectorField& b);

// --- experiment drivers -------------------------------------------------------

struct RunOutcome {
  bool pass = false;
  std::string summary;
};

RunOutcome run_entropy_audit(const ExperimentConfig& cfg,
                             const std::filesystem::path& out_dir);
RunOutcome run_weak_strong(const ExperimentConfig& cfg,
                           const std::filesystem::path& out_dir);
RunOutcome run_inviscid_sweep(const ExperimentConfig& cfg,
                              const std::filesystem::path& out_dir);
RunOutcome run_manufactured(const ExperimentConfig& cfg,
                            const std::filesystem::path& out_dir);
RunOutcome run_experiment(const ExperimentConfig& cfg,
                          const std::filesystem::path& out_dir);

}  // namespace kflow
