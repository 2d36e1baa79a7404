#pragma once

#include <cmath>
#include <stdexcept>

namespace kflow {

/// Barotropic pressure law p(rho) = a*rho^gamma with a > 0, gamma > 1, and
/// its pressure potential F solving s F'(s) - F(s) = p(s). We take the
/// particular solution F(s) = a s^gamma / (gamma - 1); the c*s ambiguity of
/// the ODE cancels in Bregman differences and under mass conservation.
class PressureLaw {
 public:
  PressureLaw(double a, double gamma) : a_(a), gamma_(gamma) {
    if (!(a > 0.0)) throw std::invalid_argument("pressure coefficient a must be > 0");
    if (!(gamma > 1.0)) throw std::invalid_argument("adiabatic exponent gamma must be > 1");
  }

  double a() const { return a_; }
  double gamma() const { return gamma_; }

  double pressure(double rho) const {
    check(rho);
    return a_ * std::pow(rho, gamma_);
  }
  double dp(double rho) const {
    check(rho);
    return a_ * gamma_ * std::pow(rho, gamma_ - 1.0);
  }
  double d2p(double rho) const {
    check(rho);
    return a_ * gamma_ * (gamma_ - 1.0) * std::pow(rho, gamma_ - 2.0);
  }

  double potential(double rho) const {
    check(rho);
    return a_ * std::pow(rho, gamma_) / (gamma_ - 1.0);
  }
  double dpotential(double rho) const {
    check(rho);
    return a_ * gamma_ * std::pow(rho, gamma_ - 1.0) / (gamma_ - 1.0);
  }
  /// F''(rho) = p'(rho)/rho.
  double d2potential(double rho) const { return dp(rho) / rho; }

  /// Bregman divergence F(rho) - F(r) - F'(r)(rho - r); nonnegative, zero
  /// iff rho == r.
  double rel_potential(double rho, double r) const {
    check(rho);
    check(r);
    return potential(rho) - potential(r) - dpotential(r) * (rho - r);
  }

 private:
  void check(double rho) const {
    if (!(rho > 0.0)) throw std::domain_error("pressure law evaluated at nonpositive density (vacuum)");
  }
  double a_;
  double gamma_;
};

}  // namespace kflow
