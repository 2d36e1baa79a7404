#include "kflow/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "kflow/ops.hpp"

namespace kflow {

namespace {

// T_ij = a_i * b_j per cell.
TensorField outer(const VectorField& a, const VectorField& b) {
  const Grid& g = a.grid();
  detail::require_same_grid(g, b.grid());
  TensorField t(g);
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j) {
      auto& out = t.comp(i, j);
      const auto& ai = a.comp(i);
      const auto& bj = b.comp(j);
      for (std::size_t c = 0; c < out.size(); ++c) out[c] = ai[c] * bj[c];
    }
  return t;
}

TensorField transpose(const TensorField& t) {
  TensorField out(t.grid());
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j) out.comp(i, j) = t.comp(j, i);
  return out;
}

TensorField sym_of(const TensorField& j) {
  TensorField out(j.grid());
  for (int i = 0; i < j.dim(); ++i)
    for (int k = 0; k < j.dim(); ++k) {
      auto& o = out.comp(i, k);
      const auto& a = j.comp(i, k);
      const auto& b = j.comp(k, i);
      for (std::size_t c = 0; c < o.size(); ++c) o[c] = 0.5 * (a[c] + b[c]);
    }
  return out;
}

TensorField antisym_of(const TensorField& j) {
  TensorField out(j.grid());
  for (int i = 0; i < j.dim(); ++i)
    for (int k = 0; k < j.dim(); ++k) {
      auto& o = out.comp(i, k);
      const auto& a = j.comp(i, k);
      const auto& b = j.comp(k, i);
      for (std::size_t c = 0; c < o.size(); ++c) o[c] = 0.5 * (a[c] - b[c]);
    }
  return out;
}

ScalarField pressure_field(const ScalarField& rho, const PressureLaw& law) {
  ScalarField p(rho.grid());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = law.pressure(rho[i]);
  return p;
}

ScalarField log_field(const ScalarField& rho) {
  ScalarField l(rho.grid());
  for (std::size_t i = 0; i < l.size(); ++i) l[i] = std::log(rho[i]);
  return l;
}

void add_scalar_forcing(ScalarField& target,
                        const std::function<double(double, double)>& f,
                        double t) {
  if (!f) return;
  const Grid& g = target.grid();
  for (std::size_t i = 0; i < g.size(); ++i) target[i] += f(g.coord(0, i), t);
}

void add_component_forcing(VectorField& target,
                           const std::function<double(double, double)>& f,
                           double t) {
  if (!f) return;
  const Grid& g = target.grid();
  auto& c0 = target.comp(0);
  for (std::size_t i = 0; i < g.size(); ++i) c0[i] += f(g.coord(0, i), t);
}

}  // namespace

PrimRhs rhs_primitive(const PrimState& s, const Params& p,
                      const Forcing1D* forcing, double t) {
  check_valid(s);
  const Grid& g = s.rho.grid();
  detail::require_same_grid(g, s.u.grid());

  VectorField mom = s.u;
  mom.scale_by(s.rho);

  ScalarField drho = div(mom);
  drho *= -1.0;

  VectorField dmom = div_tensor(outer(s.u, mom));
  dmom *= -1.0;
  dmom.axpy(-1.0, grad(pressure_field(s.rho, p.law)));
  if (p.mu > 0.0) {
    TensorField visc = sym_part(s.u);
    visc.scale_by(s.rho);
    dmom.axpy(2.0 * p.mu, div_tensor(visc));
  }

  if (forcing) {
    add_scalar_forcing(drho, forcing->rho, t);
    add_component_forcing(dmom, forcing->v, t);
  }
  return PrimRhs{std::move(drho), std::move(dmom)};
}

AugRhs rhs_augmented(const AugState& s, const Params& p,
                     const Forcing1D* forcing, double t) {
  check_valid(s);
  const Grid& g = s.rho.grid();
  detail::require_same_grid(g, s.v.grid());
  detail::require_same_grid(g, s.w.grid());

  // Shared transport velocity v - 2*kappa*mu*grad(log rho), computed once.
  VectorField ut = s.v;
  if (p.mu > 0.0) ut.axpy(-2.0 * p.kappa * p.mu, grad(log_field(s.rho)));
  VectorField flux = ut;
  flux.scale_by(s.rho);

  ScalarField drho = div(flux);
  drho *= -1.0;

  VectorField dmv = div_tensor(outer(s.v, flux));
  dmv *= -1.0;
  dmv.axpy(-1.0, grad(pressure_field(s.rho, p.law)));

  VectorField dmw = div_tensor(outer(s.w, flux));
  dmw *= -1.0;

  if (p.mu > 0.0) {
    const double sk1mk = p.sqrt_k1mk();
    TensorField jv = jacobian(s.v);
    TensorField jw = jacobian(s.w);

    TensorField mv = sym_of(jv);
    mv *= 2.0 * (1.0 - p.kappa);
    mv.axpy(2.0 * p.kappa, antisym_of(jv));
    mv.axpy(-2.0 * sk1mk, jw);
    mv.scale_by(s.rho);
    dmv.axpy(p.mu, div_tensor(mv));

    TensorField mw = jw;
    mw *= 2.0 * p.kappa;
    mw.axpy(-2.0 * sk1mk, transpose(jv));
    mw.scale_by(s.rho);
    dmw.axpy(p.mu, div_tensor(mw));
  }

  if (forcing) {
    add_scalar_forcing(drho, forcing->rho, t);
    add_component_forcing(dmv, forcing->v, t);
    add_component_forcing(dmw, forcing->w, t);
  }
  return AugRhs{std::move(drho), std::move(dmv), std::move(dmw)};
}

namespace {

double advective_dt(const Grid& g, double max_speed, double max_sound,
                    const SchemeConfig& cfg) {
  const double denom = max_speed + max_sound;
  return cfg.cfl_advective * g.min_dx() / denom;
}

double combine_dt(const Grid& g, double dt_adv, const Params& p,
                  const SchemeConfig& cfg) {
  double dt = dt_adv;
  if (p.mu > 0.0) {
    const double dt_visc =
        cfg.cfl_viscous * g.min_dx() * g.min_dx() / (2.0 * g.dim() * p.mu);
    dt = std::min(dt, dt_visc);
  }
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw blowup_error("CFL produced a nonpositive or non-finite time step");
  return dt;
}

double max_sound_speed(const ScalarField& rho, const PressureLaw& law) {
  // dp is monotone in rho for gamma > 1.
  return std::sqrt(law.dp(rho.max_abs()));
}

}  // namespace

double cfl_dt(const PrimState& s, const Params& p, const SchemeConfig& cfg) {
  check_valid(s);
  const Grid& g = s.rho.grid();
  const double dt_adv =
      advective_dt(g, s.u.max_norm(), max_sound_speed(s.rho, p.law), cfg);
  return combine_dt(g, dt_adv, p, cfg);
}

double cfl_dt(const AugState& s, const Params& p, const SchemeConfig& cfg) {
  check_valid(s);
  const Grid& g = s.rho.grid();
  double speed = s.v.max_norm();
  if (p.mu > 0.0) {
    VectorField ut = s.v;
    ut.axpy(-2.0 * p.kappa * p.mu, grad(log_field(s.rho)));
    speed = std::max(speed, ut.max_norm());
  }
  const double dt_adv =
      advective_dt(g, speed, max_sound_speed(s.rho, p.law), cfg);
  return combine_dt(g, dt_adv, p, cfg);
}

namespace {

// Conservative-variable bundles for the RK4 stages.

struct PrimCons {
  ScalarField rho;
  VectorField mom;
  PrimCons& axpy(double a, const PrimRhs& k) {
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] += a * k.drho[i];
    mom.axpy(a, k.dmom);
    return *this;
  }
};

struct AugCons {
  ScalarField rho;
  VectorField mv;
  VectorField mw;
  AugCons& axpy(double a, const AugRhs& k) {
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] += a * k.drho[i];
    mv.axpy(a, k.dmv);
    mw.axpy(a, k.dmw);
    return *this;
  }
};

VectorField velocity_of(const VectorField& mom, const ScalarField& rho) {
  VectorField u = mom;
  for (int a = 0; a < u.dim(); ++a) {
    auto& c = u.comp(a);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] /= rho[i];
  }
  return u;
}

PrimState state_of(const PrimCons& y) {
  return PrimState{y.rho, velocity_of(y.mom, y.rho)};
}

AugState state_of(const AugCons& y) {
  return AugState{y.rho, velocity_of(y.mv, y.rho), velocity_of(y.mw, y.rho)};
}

PrimCons cons_of(const PrimState& s) {
  VectorField mom = s.u;
  mom.scale_by(s.rho);
  return PrimCons{s.rho, std::move(mom)};
}

AugCons cons_of(const AugState& s) {
  VectorField mv = s.v;
  mv.scale_by(s.rho);
  VectorField mw = s.w;
  mw.scale_by(s.rho);
  return AugCons{s.rho, std::move(mv), std::move(mw)};
}

template <class Cons, class Rhs>
Cons rk4(const Cons& y0, double dt, const Rhs& rhs_at) {
  auto k1 = rhs_at(y0, 0.0);
  Cons y = y0;
  y.axpy(0.5 * dt, k1);
  auto k2 = rhs_at(y, 0.5 * dt);
  y = y0;
  y.axpy(0.5 * dt, k2);
  auto k3 = rhs_at(y, 0.5 * dt);
  y = y0;
  y.axpy(dt, k3);
  auto k4 = rhs_at(y, dt);
  y = y0;
  const double s = dt / 6.0;
  y.axpy(s, k1);
  y.axpy(2.0 * s, k2);
  y.axpy(2.0 * s, k3);
  y.axpy(s, k4);
  return y;
}

}  // namespace

PrimState step_rk4(const PrimState& s, const Params& p, double dt,
                   const Forcing1D* forcing, double t) {
  auto rhs_at = [&](const PrimCons& y, double dts) {
    return rhs_primitive(state_of(y), p, forcing, t + dts);
  };
  return state_of(rk4(cons_of(s), dt, rhs_at));
}

AugState step_rk4(const AugState& s, const Params& p, double dt,
                  const Forcing1D* forcing, double t) {
  auto rhs_at = [&](const AugCons& y, double dts) {
    return rhs_augmented(state_of(y), p, forcing, t + dts);
  };
  return state_of(rk4(cons_of(s), dt, rhs_at));
}

namespace {

AugState as_augmented(const PrimState& s, const Params& p) {
  return to_augmented(s, p);
}

AugState as_augmented(const AugState& s, const Params&) {
  check_valid(s);
  return s;
}

template <class State>
Trajectory simulate_impl(State s, const Params& p, const SchemeConfig& cfg,
                         const Forcing1D* forcing, Formulation form) {
  cfg.validate();
  if (forcing && s.rho.grid().dim() != 1)
    throw std::invalid_argument("forcing is supported in 1D only");

  Trajectory traj{{}, {}, p, form, 0.0, 0};
  traj.times.push_back(0.0);
  traj.snapshots.push_back(as_augmented(s, p));

  double t = 0.0;
  std::size_t snap_k = 1;
  const double eps = 1e-12 * cfg.t_end;
  while (t < cfg.t_end - eps) {
    double next = std::min(cfg.t_end, static_cast<double>(snap_k) * cfg.snapshot_every);
    while (next <= t + eps && next < cfg.t_end) {
      ++snap_k;
      next = std::min(cfg.t_end, static_cast<double>(snap_k) * cfg.snapshot_every);
    }
    double dt = cfl_dt(s, p, cfg);
    const bool land = (t + dt >= next - eps);
    if (land) dt = next - t;
    try {
      s = step_rk4(s, p, dt, forcing, t);
    } catch (const blowup_error& e) {
      throw blowup_error(std::string(e.what()) + " at t=" + std::to_string(t));
    } catch (const vacuum_error& e) {
      throw vacuum_error(std::string(e.what()) + " at t=" + std::to_string(t));
    }
    traj.max_dt = std::max(traj.max_dt, dt);
    ++traj.steps;
    if (land) {
      t = next;
      traj.times.push_back(t);
      traj.snapshots.push_back(as_augmented(s, p));
      ++snap_k;
    } else {
      t += dt;
    }
  }
  return traj;
}

}  // namespace

Trajectory simulate(const PrimState& initial, const Params& p,
                    const SchemeConfig& cfg, const Forcing1D* forcing) {
  return simulate_impl(initial, p, cfg, forcing, Formulation::primitive);
}

Trajectory simulate(const AugState& initial, const Params& p,
                    const SchemeConfig& cfg, const Forcing1D* forcing) {
  return simulate_impl(initial, p, cfg, forcing, Formulation::augmented);
}

}  // namespace kflow
