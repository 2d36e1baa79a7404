#include "kflow/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace kflow {

namespace {

static_assert(std::endian::native == std::endian::little,
              "field dumps assume a little-endian host");

void put_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void put_f64(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t get_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

double get_f64(std::istream& is) {
  double v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

void write_header(std::ostream& os, const Grid& g) {
  os.write("KNSF", 4);
  put_u32(os, 1u);
  put_u32(os, static_cast<std::uint32_t>(g.dim()));
  put_u32(os, static_cast<std::uint32_t>(g.n(0)));
  if (g.dim() == 2) put_u32(os, static_cast<std::uint32_t>(g.n(1)));
  put_f64(os, g.length(0));
  if (g.dim() == 2) put_f64(os, g.length(1));
}

Grid read_header(std::istream& is) {
  char magic[4] = {};
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "KNSF", 4) != 0)
    throw std::runtime_error("bad field dump: wrong magic");
  const std::uint32_t version = get_u32(is);
  if (version != 1) throw std::runtime_error("bad field dump: unknown version");
  const std::uint32_t dim = get_u32(is);
  if (dim == 1) {
    const std::uint32_t n = get_u32(is);
    const double l = get_f64(is);
    return Grid(n, l);
  }
  if (dim == 2) {
    const std::uint32_t n0 = get_u32(is);
    const std::uint32_t n1 = get_u32(is);
    const double l0 = get_f64(is);
    const double l1 = get_f64(is);
    return Grid(n0, n1, l0, l1);
  }
  throw std::runtime_error("bad field dump: unsupported dim");
}

}  // namespace

void write_field(std::ostream& os, const ScalarField& f) {
  write_header(os, f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) put_f64(os, f[i]);
}

void write_field(std::ostream& os, const VectorField& f) {
  write_header(os, f.grid());
  for (std::size_t i = 0; i < f.grid().size(); ++i)
    for (int a = 0; a < f.dim(); ++a) put_f64(os, f.at(a, i));
}

ScalarField read_scalar_field(std::istream& is) {
  Grid g = read_header(is);
  ScalarField f(g);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = get_f64(is);
  if (!is) throw std::runtime_error("bad field dump: truncated values");
  return f;
}

VectorField read_vector_field(std::istream& is) {
  Grid g = read_header(is);
  VectorField f(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (int a = 0; a < g.dim(); ++a) f.at(a, i) = get_f64(is);
  if (!is) throw std::runtime_error("bad field dump: truncated values");
  return f;
}

}  // namespace kflow
