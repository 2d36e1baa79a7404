#pragma once

#include "kflow/field.hpp"

namespace kflow {

// Second-order centered periodic stencils on uniform grids. Divergences use
// the flux form (difference of arithmetic face averages), which for these
// stencils coincides with the centered difference and telescopes exactly on
// periodic grids.

/// Pointwise centered gradient of a scalar field.
VectorField grad(const ScalarField& f);

/// Conservative divergence of a vector field.
ScalarField div(const VectorField& u);

/// Row-wise conservative divergence: (div T)_i = sum_j d_j T_ij.
VectorField div_tensor(const TensorField& t);

/// Jacobian J_ij = d_j u_i.
TensorField jacobian(const VectorField& u);

/// Symmetric part (J + J^T)/2 of the Jacobian of u.
TensorField sym_part(const VectorField& u);

/// Antisymmetric part (J - J^T)/2 of the Jacobian of u.
TensorField antisym_part(const VectorField& u);

/// Midpoint quadrature: sum of cell values times cell volume.
double integrate(const ScalarField& f);

}  // namespace kflow
