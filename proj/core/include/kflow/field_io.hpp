#pragma once

#include <iosfwd>

#include "kflow/field.hpp"

namespace kflow {

// Binary field dump. Layout: magic "KNSF"; 32-bit little-endian unsigned
// integers [version=1, dim, n1, (n2)]; 64-bit little-endian IEEE-754 lengths
// per axis; then values in row-major cell order, components interleaved per
// cell.

void write_field(std::ostream& os, const ScalarField& f);
void write_field(std::ostream& os, const VectorField& f);

ScalarField read_scalar_field(std::istream& is);
VectorField read_vector_field(std::istream& is);

}  // namespace kflow
