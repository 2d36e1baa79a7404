#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>

#include "kflow/field_io.hpp"
#include "kflow/state.hpp"

using namespace kflow;

namespace {
constexpr double kPi = std::numbers::pi;

PrimState smooth_state(const Grid& g) {
  PrimState s{ScalarField(g), VectorField(g)};
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coord(0, i);
    s.rho[i] = std::exp(0.4 * std::sin(2.0 * kPi * x));
    s.u.at(0, i) = 0.7 * std::cos(2.0 * kPi * x);
  }
  return s;
}
}  // namespace

TEST_CASE("params validation") {
  const PressureLaw law(1.0, 2.0);
  CHECK_THROWS_AS(Params(-0.1, 0.5, law), std::invalid_argument);
  CHECK_THROWS_AS(Params(0.1, 0.0, law), std::invalid_argument);
  CHECK_THROWS_AS(Params(0.1, 1.0, law), std::invalid_argument);
  const Params p(0.1, 0.3, law);
  CHECK(p.sqrt_k1mk() ==
        doctest::Approx(std::sqrt(0.3) * std::sqrt(0.7)).epsilon(1e-15));
  CHECK(p.sqrt_k_over_1mk() ==
        doctest::Approx(std::sqrt(0.3) / std::sqrt(0.7)).epsilon(1e-15));
}

TEST_CASE("density floor is enforced") {
  const Grid g(8, 1.0);
  ScalarField rho(g, 1.0);
  rho[3] = kRhoFloor / 2.0;
  CHECK_THROWS_AS(check_density(rho), vacuum_error);
  rho[3] = 1.0;
  CHECK_NOTHROW(check_density(rho));
}

TEST_CASE("primitive/augmented round trip is exact to near machine precision") {
  for (double kappa : {0.25, 0.5, 0.9}) {
    const Params p(0.1, kappa, PressureLaw(1.0, 2.0));
    const Grid g(64, 1.0);
    const PrimState s = smooth_state(g);
    const PrimState back = to_primitive(to_augmented(s, p), p);
    double scale = 0.0, err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      scale = std::max(scale, std::abs(s.u.at(0, i)));
      err = std::max(err, std::abs(back.u.at(0, i) - s.u.at(0, i)));
      CHECK(back.rho[i] == s.rho[i]);
    }
    CHECK(err <= 1e-14 * std::max(1.0, scale));
  }
}

TEST_CASE("inviscid transform is the identity with zero drift, bitwise") {
  const Params p(0.0, 0.5, PressureLaw(1.0, 2.0));
  const Grid g(32, 1.0);
  const PrimState s = smooth_state(g);
  const AugState a = to_augmented(s, p);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(a.v.at(0, i) == s.u.at(0, i));
    CHECK(a.w.at(0, i) == 0.0);
  }
}

TEST_CASE("drift velocity matches mu grad log rho analytically") {
  const Params p(0.2, 0.5, PressureLaw(1.0, 2.0));
  const Grid g(256, 1.0);
  const PrimState s = smooth_state(g);
  const AugState a = to_augmented(s, p);
  // rho = exp(0.4 sin(2 pi x)) so grad log rho = 0.8 pi cos(2 pi x).
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coord(0, i);
    const double gl = 0.8 * kPi * std::cos(2.0 * kPi * x);
    CHECK(a.w.at(0, i) ==
          doctest::Approx(2.0 * p.sqrt_k1mk() * p.mu * gl).epsilon(2e-3));
    CHECK(a.v.at(0, i) - s.u.at(0, i) ==
          doctest::Approx(2.0 * p.kappa * p.mu * gl).epsilon(2e-3));
  }
}

TEST_CASE("field dump header bytes") {
  const Grid g(4, 2.0);
  ScalarField f(g);
  for (std::size_t i = 0; i < 4; ++i) f[i] = static_cast<double>(i) + 0.5;
  std::ostringstream os(std::ios::binary);
  write_field(os, f);
  const std::string bytes = os.str();
  REQUIRE(bytes.size() == 4 + 3 * 4 + 8 + 4 * 8);
  CHECK(bytes.compare(0, 4, "KNSF") == 0);
  auto u32 = [&](std::size_t off) {
    std::uint32_t v;
    std::memcpy(&v, bytes.data() + off, 4);
    return v;
  };
  CHECK(u32(4) == 1);   // version
  CHECK(u32(8) == 1);   // dim
  CHECK(u32(12) == 4);  // n1
  double len;
  std::memcpy(&len, bytes.data() + 16, 8);
  CHECK(len == 2.0);
  double v0;
  std::memcpy(&v0, bytes.data() + 24, 8);
  CHECK(v0 == 0.5);
}

TEST_CASE("field dump round trip, scalar and vector, 1D and 2D") {
  const Grid g2(6, 4, 1.5, 1.0);
  ScalarField f(g2);
  VectorField u(g2);
  for (std::size_t c = 0; c < g2.size(); ++c) {
    f[c] = std::sin(static_cast<double>(c));
    u.at(0, c) = std::cos(static_cast<double>(c));
    u.at(1, c) = 1.0 / (1.0 + static_cast<double>(c));
  }
  std::stringstream ss(std::ios::binary | std::ios::in | std::ios::out);
  write_field(ss, f);
  write_field(ss, u);
  const ScalarField f2 = read_scalar_field(ss);
  const VectorField u2 = read_vector_field(ss);
  REQUIRE(f2.grid() == g2);
  REQUIRE(u2.grid() == g2);
  for (std::size_t c = 0; c < g2.size(); ++c) {
    CHECK(f2[c] == f[c]);
    CHECK(u2.at(0, c) == u.at(0, c));
    CHECK(u2.at(1, c) == u.at(1, c));
  }
}

TEST_CASE("snapshot round trip preserves both representations") {
  const Grid g(16, 1.0);
  const Params p(0.1, 0.5, PressureLaw(1.0, 2.0));
  const PrimState s = smooth_state(g);
  const AugState a = to_augmented(s, p);

  std::stringstream ss(std::ios::binary | std::ios::in | std::ios::out);
  write_snapshot(ss, a);
  const AugState a2 = read_augmented_snapshot(ss);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(a2.rho[i] == a.rho[i]);
    CHECK(a2.v.at(0, i) == a.v.at(0, i));
    CHECK(a2.w.at(0, i) == a.w.at(0, i));
  }

  std::stringstream sp(std::ios::binary | std::ios::in | std::ios::out);
  write_snapshot(sp, s);
  const PrimState s2 = read_primitive_snapshot(sp);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(s2.rho[i] == s.rho[i]);
    CHECK(s2.u.at(0, i) == s.u.at(0, i));
  }
}
