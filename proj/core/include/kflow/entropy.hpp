#pragma once

#include <array>
#include <span>

#include "kflow/state.hpp"

namespace kflow {

/// Itemized value of the kappa-entropy and its dissipation integrands at one
/// time instant. `total` is the entropy itself; the dissipation entries are
/// the instantaneous dissipation rates, all nonnegative.
struct EntropyReport {
  double time = 0.0;
  double kinetic_v = 0.0;      // int rho |v|^2 / 2
  double kinetic_w = 0.0;      // int rho |w|^2 / 2
  double potential = 0.0;      // int F(rho)
  double dissipation_A = 0.0;  // 2 kappa mu int rho |A(v)|^2
  double dissipation_D = 0.0;  // 2 mu int rho |D(sqrt(1-k) v) - grad(sqrt(k) w)|^2
  double dissipation_p = 0.0;  // 2 kappa mu int (p'(rho)/rho) |grad rho|^2
  double total = 0.0;          // kinetic_v + kinetic_w + potential
  double dissipation_total() const {
    return dissipation_A + dissipation_D + dissipation_p;
  }
};

EntropyReport kappa_entropy(const AugState& s, const Params& p,
                            double time = 0.0);

/// Modulated energy distance between the augmented triple (rho,v,w) and the
/// test triple (r,V,W): 1/2 int rho(|w-W|^2 + |v-V|^2) + int Bregman(rho|r).
double relative_entropy(const AugState& s, const AugState& ref,
                        const Params& p);

/// Time derivatives of the reference triple, supplied analytically or by
/// finite differencing a reference trajectory.
struct RefDerivs {
  ScalarField drdt;
  VectorField dVdt;
  VectorField dWdt;
};

/// Itemized instantaneous evaluation of the relative entropy inequality:
/// `value` is E, `lhs` the three dissipation-type rates on the left, `rhs`
/// the eight integral lines on the right. `defect` is filled at trajectory
/// level (cumulative RHS minus E-increment minus cumulative LHS; the
/// inequality predicts defect >= 0 up to consistency error).
struct RelEntropyReport {
  double time = 0.0;
  double value = 0.0;
  std::array<double, 3> lhs{};
  std::array<double, 8> rhs{};
  double defect = 0.0;
  double lhs_total() const { return lhs[0] + lhs[1] + lhs[2]; }
  double rhs_total() const {
    double s = 0.0;
    for (double x : rhs) s += x;
    return s;
  }
};

RelEntropyReport relative_inequality_audit(const AugState& s,
                                           const AugState& ref,
                                           const RefDerivs& dref,
                                           const Params& p, double time = 0.0);

/// The four pieces of the pointwise pressure identity, evaluated from
/// densities and log-gradient values at a point:
///   lhs        = rho [p'(rho) grho - p'(r) gr] . [grho - gr]
///   rhs_grad   = rho p'(rho) |grho - gr|^2
///   rhs_chain  = grad[p(rho)-p(r)-p'(r)(rho-r)] . gr    (chain-rule expanded)
///   rhs_coeff  = -[rho(p'(rho)-p'(r)) - p''(r)(rho-r) r] |gr|^2
/// The identity states lhs = rhs_grad + rhs_chain + rhs_coeff.
struct Identity5Terms {
  double lhs;
  double rhs_grad;
  double rhs_chain;
  double rhs_coeff;
  double residual() const { return lhs - (rhs_grad + rhs_chain + rhs_coeff); }
  double scale() const {
    return std::abs(lhs) + std::abs(rhs_grad) + std::abs(rhs_chain) +
           std::abs(rhs_coeff);
  }
};

Identity5Terms identity5_terms(double rho, double r,
                               std::span<const double> grho,
                               std::span<const double> gr,
                               const PressureLaw& law);

double identity5_residual(double rho, double r, std::span<const double> grho,
                          std::span<const double> gr, const PressureLaw& law);

}  // namespace kflow
