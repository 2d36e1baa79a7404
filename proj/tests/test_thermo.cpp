#include <doctest.h>

#include <cmath>
#include <random>

#include "kflow/thermo.hpp"

using namespace kflow;

TEST_CASE("pressure law validates its coefficients") {
  CHECK_THROWS_AS(PressureLaw(0.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(PressureLaw(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(PressureLaw(1.0, 2.0).pressure(0.0), std::domain_error);
  CHECK_THROWS_AS(PressureLaw(1.0, 2.0).potential(-1.0), std::domain_error);
}

TEST_CASE("potential solves s F'(s) - F(s) = p(s)") {
  std::mt19937_64 rng(12345);
  auto u01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (double gamma : {1.5, 2.0, 3.0}) {
    for (double a : {0.7, 1.0, 2.5}) {
      const PressureLaw law(a, gamma);
      for (int k = 0; k < 1000; ++k) {
        const double rho = 0.05 + 4.0 * u01();
        const double lhs = rho * law.dpotential(rho) - law.potential(rho);
        const double p = law.pressure(rho);
        CHECK(std::abs(lhs - p) <= 1e-12 * std::max(1.0, std::abs(p)));
      }
    }
  }
}

TEST_CASE("derivative helpers are consistent with finite differences") {
  const PressureLaw law(1.3, 1.7);
  const double h = 1e-6;
  for (double rho : {0.3, 1.0, 2.2}) {
    const double dp_fd =
        (law.pressure(rho + h) - law.pressure(rho - h)) / (2.0 * h);
    CHECK(law.dp(rho) == doctest::Approx(dp_fd).epsilon(1e-8));
    const double d2p_fd = (law.dp(rho + h) - law.dp(rho - h)) / (2.0 * h);
    CHECK(law.d2p(rho) == doctest::Approx(d2p_fd).epsilon(1e-8));
    const double dF_fd =
        (law.potential(rho + h) - law.potential(rho - h)) / (2.0 * h);
    CHECK(law.dpotential(rho) == doctest::Approx(dF_fd).epsilon(1e-8));
    CHECK(law.d2potential(rho) == doctest::Approx(law.dp(rho) / rho));
  }
}

TEST_CASE("Bregman distance is nonnegative and vanishes on the diagonal") {
  const PressureLaw law(1.0, 2.0);
  std::mt19937_64 rng(7);
  auto u01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int k = 0; k < 200; ++k) {
    const double rho = 0.1 + 3.0 * u01();
    const double r = 0.1 + 3.0 * u01();
    CHECK(law.rel_potential(rho, r) >= 0.0);
    CHECK(law.rel_potential(rho, rho) == doctest::Approx(0.0));
  }
  // gamma = 2 makes the Bregman distance exactly quadratic.
  CHECK(law.rel_potential(1.5, 1.0) == doctest::Approx(0.25).epsilon(1e-14));
}
