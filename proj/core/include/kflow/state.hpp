#pragma once

#include <iosfwd>

#include "kflow/errors.hpp"
#include "kflow/field.hpp"
#include "kflow/thermo.hpp"

namespace kflow {

/// Densities at or below this floor abort the run; the intermediate/drift
/// velocities involve grad(log rho), which degenerates at vacuum.
inline constexpr double kRhoFloor = 1e-8;

struct Params {
  double mu;     // viscosity coefficient, nu(rho) = mu*rho
  double kappa;  // mixture coefficient, strictly inside (0,1)
  PressureLaw law;

  Params(double mu_, double kappa_, PressureLaw law_)
      : mu(mu_), kappa(kappa_), law(law_) {
    if (!(mu >= 0.0)) throw std::invalid_argument("viscosity mu must be >= 0");
    if (!(kappa > 0.0 && kappa < 1.0))
      throw std::invalid_argument("mixture coefficient kappa must lie in (0,1)");
  }

  double sqrt_kappa() const { return std::sqrt(kappa); }
  double sqrt_1mkappa() const { return std::sqrt(1.0 - kappa); }
  /// sqrt(kappa*(1-kappa)), factored so transforms cancel to roundoff.
  double sqrt_k1mk() const { return sqrt_kappa() * sqrt_1mkappa(); }
  /// sqrt(kappa/(1-kappa)).
  double sqrt_k_over_1mk() const { return sqrt_kappa() / sqrt_1mkappa(); }
};

/// Primitive unknowns: density and fluid velocity.
struct PrimState {
  ScalarField rho;
  VectorField u;
};

/// Augmented unknowns: density, intermediate velocity v, drift velocity w.
struct AugState {
  ScalarField rho;
  VectorField v;
  VectorField w;
};

void check_density(const ScalarField& rho);
void check_valid(const PrimState& s);
void check_valid(const AugState& s);

/// v = u + 2*kappa*mu*grad(log rho); w = 2*sqrt(kappa*(1-kappa))*mu*grad(log rho).
AugState to_augmented(const PrimState& s, const Params& p);

/// u = v - sqrt(kappa/(1-kappa)) * w; exact inverse of to_augmented.
PrimState to_primitive(const AugState& s, const Params& p);

// Snapshot serialization: a one-byte representation tag (0 = primitive,
// 1 = augmented) followed by the fields as field dumps, in order
// (rho, u) or (rho, v, w).
void write_snapshot(std::ostream& os, const PrimState& s);
void write_snapshot(std::ostream& os, const AugState& s);
AugState read_augmented_snapshot(std::istream& is);
PrimState read_primitive_snapshot(std::istream& is);

}  // namespace kflow
