#include "kflow/state.hpp"

#include <istream>
#include <ostream>

#include "kflow/field_io.hpp"
#include "kflow/ops.hpp"

namespace kflow {

void check_density(const ScalarField& rho) {
  if (!rho.all_finite()) throw blowup_error("non-finite density");
  if (rho.min() <= kRhoFloor)
    throw vacuum_error("density at or below the vacuum floor");
}

void check_valid(const PrimState& s) {
  check_density(s.rho);
  if (!s.u.all_finite()) throw blowup_error("non-finite velocity");
}

void check_valid(const AugState& s) {
  check_density(s.rho);
  if (!s.v.all_finite() || !s.w.all_finite())
    throw blowup_error("non-finite velocity");
}

AugState to_augmented(const PrimState& s, const Params& p) {
  check_valid(s);
  const Grid& g = s.rho.grid();
  detail::require_same_grid(g, s.u.grid());
  if (p.mu == 0.0) return AugState{s.rho, s.u, VectorField(g)};
  ScalarField logrho(g);
  for (std::size_t i = 0; i < logrho.size(); ++i) logrho[i] = std::log(s.rho[i]);
  VectorField glr = grad(logrho);
  VectorField v = s.u;
  v.axpy(2.0 * p.kappa * p.mu, glr);
  VectorField w = glr;
  w *= 2.0 * p.sqrt_k1mk() * p.mu;
  return AugState{s.rho, std::move(v), std::move(w)};
}

PrimState to_primitive(const AugState& s, const Params& p) {
  check_valid(s);
  VectorField u = s.v;
  u.axpy(-p.sqrt_k_over_1mk(), s.w);
  return PrimState{s.rho, std::move(u)};
}

namespace {
constexpr char kTagPrimitive = 0;
constexpr char kTagAugmented = 1;
}  // namespace

void write_snapshot(std::ostream& os, const PrimState& s) {
  os.put(kTagPrimitive);
  write_field(os, s.rho);
  write_field(os, s.u);
}

void write_snapshot(std::ostream& os, const AugState& s) {
  os.put(kTagAugmented);
  write_field(os, s.rho);
  write_field(os, s.v);
  write_field(os, s.w);
}

PrimState read_primitive_snapshot(std::istream& is) {
  if (is.get() != kTagPrimitive)
    throw std::runtime_error("snapshot is not primitive");
  ScalarField rho = read_scalar_field(is);
  VectorField u = read_vector_field(is);
  return PrimState{std::move(rho), std::move(u)};
}

AugState read_augmented_snapshot(std::istream& is) {
  if (is.get() != kTagAugmented)
    throw std::runtime_error("snapshot is not augmented");
  ScalarField rho = read_scalar_field(is);
  VectorField v = read_vector_field(is);
  VectorField w = read_vector_field(is);
  return AugState{std::move(rho), std::move(v), std::move(w)};
}

}  // namespace kflow
