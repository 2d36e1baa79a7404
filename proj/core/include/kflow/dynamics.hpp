#pragma once

#include <functional>
#include <vector>

#include "kflow/state.hpp"

namespace kflow {

enum class Formulation { primitive, augmented };

struct SchemeConfig {
  Formulation formulation = Formulation::augmented;
  double cfl_advective = 0.9;
  double cfl_viscous = 0.9;
  double t_end = 1.0;
  double snapshot_every = 0.05;

  void validate() const {
    if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
    if (!(snapshot_every > 0.0))
      throw std::invalid_argument("snapshot_every must be positive");
    if (!(cfl_advective > 0.0 && cfl_advective <= 1.0) ||
        !(cfl_viscous > 0.0 && cfl_viscous <= 1.0))
      throw std::invalid_argument("CFL numbers must lie in (0,1]");
  }
};

/// Optional manufactured-solution source terms, 1D only, evaluated at (x,t).
/// For primitive runs `v` forces the momentum equation; for augmented runs
/// `v` and `w` force the respective momentum equations.
struct Forcing1D {
  std::function<double(double, double)> rho;
  std::function<double(double, double)> v;
  std::function<double(double, double)> w;
};

struct PrimRhs {
  ScalarField drho;   // d rho / dt
  VectorField dmom;   // d (rho u) / dt
};

struct AugRhs {
  ScalarField drho;
  VectorField dmv;    // d (rho v) / dt
  VectorField dmw;    // d (rho w) / dt
};

PrimRhs rhs_primitive(const PrimState& s, const Params& p,
                      const Forcing1D* forcing = nullptr, double t = 0.0);
AugRhs rhs_augmented(const AugState& s, const Params& p,
                     const Forcing1D* forcing = nullptr, double t = 0.0);

/// dt = min(cfl_adv*dx/(max|u| + max sqrt(p'(rho))), cfl_visc*dx^2/(2*dim*mu)).
/// The kinematic viscosity of nu(rho) = mu*rho is mu, so the parabolic bound
/// involves mu only.
double cfl_dt(const PrimState& s, const Params& p, const SchemeConfig& cfg);
double cfl_dt(const AugState& s, const Params& p, const SchemeConfig& cfg);

/// One classical RK4 step on conservative variables (rho, rho*u) resp.
/// (rho, rho*v, rho*w).
PrimState step_rk4(const PrimState& s, const Params& p, double dt,
                   const Forcing1D* forcing = nullptr, double t = 0.0);
AugState step_rk4(const AugState& s, const Params& p, double dt,
                  const Forcing1D* forcing = nullptr, double t = 0.0);

struct Trajectory {
  std::vector<double> times;
  std::vector<AugState> snapshots;  // primitive runs are converted on output
  Params params;
  Formulation formulation = Formulation::augmented;
  double max_dt = 0.0;
  std::size_t steps = 0;
};

Trajectory simulate(const PrimState& initial, const Params& p,
                    const SchemeConfig& cfg, const Forcing1D* forcing = nullptr);
Trajectory simulate(const AugState& initial, const Params& p,
                    const SchemeConfig& cfg, const Forcing1D* forcing = nullptr);

}  // namespace kflow
