#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kflow/ops.hpp"

using namespace kflow;

namespace {
constexpr double kPi = std::numbers::pi;

// Centered-difference symbol of the wavenumber q on spacing dx.
double sigma(double q, double dx) { return std::sin(q * dx) / dx; }
}  // namespace

TEST_CASE("grid validation and geometry") {
  CHECK_THROWS_AS(Grid(3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid(8, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid(8, 3, 1.0, 1.0), std::invalid_argument);

  const Grid g(8, 2.0);
  CHECK(g.dim() == 1);
  CHECK(g.size() == 8);
  CHECK(g.dx(0) == doctest::Approx(0.25));
  CHECK(g.coord(0, 3) == doctest::Approx(0.75));
  CHECK(g.cell_volume() == doctest::Approx(0.25));
  CHECK(g.volume() == doctest::Approx(2.0));

  const Grid g2(8, 16, 1.0, 2.0);
  CHECK(g2.dim() == 2);
  CHECK(g2.size() == 128);
  CHECK(g2.index(2, 3) == 2 * 16 + 3);
  CHECK(g2.min_dx() == doctest::Approx(0.125));
  CHECK(g2.cell_volume() == doctest::Approx(0.125 * 0.125));
  CHECK(Grid(8, 2.0) == g);
  CHECK(Grid(8, 1.0) != g);
}

TEST_CASE("integrate is exact for low trigonometric modes") {
  const Grid g(32, 1.0);
  ScalarField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coord(0, i);
    f[i] = 3.0 + std::sin(2.0 * kPi * x) + 0.5 * std::cos(4.0 * kPi * x);
  }
  CHECK(integrate(f) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("grad matches the discrete symbol on a single mode") {
  const Grid g(64, 1.0);
  const double q = 2.0 * kPi * 3.0;
  ScalarField f(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    f[i] = std::sin(q * g.coord(0, i));
  const VectorField df = grad(f);
  const double s = sigma(q, g.dx(0));
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(df.at(0, i) ==
          doctest::Approx(s * std::cos(q * g.coord(0, i))).epsilon(1e-12));
}

TEST_CASE("div telescopes to zero total on periodic grids") {
  const Grid g(48, 1.0);
  VectorField u(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coord(0, i);
    u.at(0, i) = std::exp(std::sin(2.0 * kPi * x)) + 0.3 * x * x;
  }
  CHECK(std::abs(integrate(div(u))) < 1e-13);
}

TEST_CASE("div equals the contraction of the jacobian") {
  const Grid g(24, 24, 1.0, 1.0);
  VectorField u(g);
  for (std::size_t i = 0; i < g.n(0); ++i)
    for (std::size_t j = 0; j < g.n(1); ++j) {
      const std::size_t c = g.index(i, j);
      const double x = g.coord(0, i), y = g.coord(1, j);
      u.at(0, c) = std::sin(2.0 * kPi * x) * std::cos(2.0 * kPi * y);
      u.at(1, c) = std::cos(2.0 * kPi * (x + y));
    }
  const ScalarField d = div(u);
  const TensorField j = jacobian(u);
  for (std::size_t c = 0; c < g.size(); ++c)
    CHECK(d[c] == doctest::Approx(j.comp(0, 0)[c] + j.comp(1, 1)[c])
                      .epsilon(1e-13));
}

TEST_CASE("sym and antisym parts reassemble the jacobian") {
  const Grid g(16, 16, 1.0, 2.0);
  VectorField u(g);
  for (std::size_t i = 0; i < g.n(0); ++i)
    for (std::size_t j = 0; j < g.n(1); ++j) {
      const std::size_t c = g.index(i, j);
      const double x = g.coord(0, i), y = g.coord(1, j);
      u.at(0, c) = std::sin(2.0 * kPi * x) + y * (2.0 - y);
      u.at(1, c) = std::cos(kPi * y) * x * (1.0 - x);
    }
  const TensorField j = jacobian(u);
  const TensorField d = sym_part(u);
  const TensorField a = antisym_part(u);
  for (int r = 0; r < 2; ++r)
    for (int s = 0; s < 2; ++s)
      for (std::size_t c = 0; c < g.size(); ++c) {
        CHECK(j.comp(r, s)[c] ==
              doctest::Approx(d.comp(r, s)[c] + a.comp(r, s)[c])
                  .epsilon(1e-13));
        CHECK(d.comp(r, s)[c] == doctest::Approx(d.comp(s, r)[c]));
        CHECK(a.comp(r, s)[c] == doctest::Approx(-a.comp(s, r)[c]));
      }
}

TEST_CASE("div_tensor of u tensor m telescopes to zero momentum drift") {
  const Grid g(32, 32, 1.0, 1.0);
  VectorField u(g), m(g);
  for (std::size_t i = 0; i < g.n(0); ++i)
    for (std::size_t j = 0; j < g.n(1); ++j) {
      const std::size_t c = g.index(i, j);
      const double x = g.coord(0, i), y = g.coord(1, j);
      u.at(0, c) = std::sin(2.0 * kPi * y);
      u.at(1, c) = std::cos(2.0 * kPi * x);
      m.at(0, c) = 1.0 + 0.5 * std::sin(2.0 * kPi * (x - y));
      m.at(1, c) = std::cos(4.0 * kPi * x);
    }
  TensorField t(g);
  for (int r = 0; r < 2; ++r)
    for (int s = 0; s < 2; ++s)
      for (std::size_t c = 0; c < g.size(); ++c)
        t.comp(r, s)[c] = u.at(r, c) * m.at(s, c);
  const VectorField f = div_tensor(t);
  for (int r = 0; r < 2; ++r) {
    double total = 0.0;
    for (std::size_t c = 0; c < g.size(); ++c) total += f.at(r, c);
    CHECK(std::abs(total * g.cell_volume()) < 1e-13);
  }
}

TEST_CASE("grad converges at second order on a smooth non-mode field") {
  double prev = 0.0;
  for (std::size_t n : {32, 64, 128}) {
    const Grid g(n, 1.0);
    ScalarField f(g);
    for (std::size_t i = 0; i < g.size(); ++i)
      f[i] = std::exp(std::sin(2.0 * kPi * g.coord(0, i)));
    const VectorField df = grad(f);
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.coord(0, i);
      const double exact = 2.0 * kPi * std::cos(2.0 * kPi * x) *
                           std::exp(std::sin(2.0 * kPi * x));
      err = std::max(err, std::abs(df.at(0, i) - exact));
    }
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.1));
    prev = err;
  }
}
