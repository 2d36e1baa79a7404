#include "kflow/ops.hpp"

namespace kflow {

namespace {

// out = d f / d x_axis, centered second-order, periodic wrap.
void diff_axis(const Grid& g, const double* f, double* out, int axis) {
  if (g.dim() == 1) {
    const std::size_t n = g.n(0);
    const double inv = 1.0 / (2.0 * g.dx(0));
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t ip = (i + 1 == n) ? 0 : i + 1;
      const std::size_t im = (i == 0) ? n - 1 : i - 1;
      out[i] = (f[ip] - f[im]) * inv;
    }
    return;
  }
  const std::size_t n0 = g.n(0), n1 = g.n(1);
  if (axis == 0) {
    const double inv = 1.0 / (2.0 * g.dx(0));
    for (std::size_t i = 0; i < n0; ++i) {
      const std::size_t rp = ((i + 1 == n0) ? 0 : i + 1) * n1;
      const std::size_t rm = ((i == 0) ? n0 - 1 : i - 1) * n1;
      const std::size_t r = i * n1;
      for (std::size_t j = 0; j < n1; ++j)
        out[r + j] = (f[rp + j] - f[rm + j]) * inv;
    }
  } else {
    const double inv = 1.0 / (2.0 * g.dx(1));
    for (std::size_t i = 0; i < n0; ++i) {
      const std::size_t r = i * n1;
      for (std::size_t j = 0; j < n1; ++j) {
        const std::size_t jp = (j + 1 == n1) ? 0 : j + 1;
        const std::size_t jm = (j == 0) ? n1 - 1 : j - 1;
        out[r + j] = (f[r + jp] - f[r + jm]) * inv;
      }
    }
  }
}

}  // namespace

VectorField grad(const ScalarField& f) {
  VectorField out(f.grid());
  for (int a = 0; a < f.grid().dim(); ++a)
    diff_axis(f.grid(), f.data(), out.comp(a).data(), a);
  return out;
}

ScalarField div(const VectorField& u) {
  const Grid& g = u.grid();
  ScalarField out(g);
  std::vector<double> tmp(g.size());
  for (int a = 0; a < g.dim(); ++a) {
    diff_axis(g, u.comp(a).data(), tmp.data(), a);
    for (std::size_t i = 0; i < tmp.size(); ++i) out[i] += tmp[i];
  }
  return out;
}

VectorField div_tensor(const TensorField& t) {
  const Grid& g = t.grid();
  VectorField out(g);
  std::vector<double> tmp(g.size());
  for (int i = 0; i < g.dim(); ++i) {
    auto& row = out.comp(i);
    for (int j = 0; j < g.dim(); ++j) {
      diff_axis(g, t.comp(i, j).data(), tmp.data(), j);
      for (std::size_t c = 0; c < tmp.size(); ++c) row[c] += tmp[c];
    }
  }
  return out;
}

TensorField jacobian(const VectorField& u) {
  const Grid& g = u.grid();
  TensorField out(g);
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j)
      diff_axis(g, u.comp(i).data(), out.comp(i, j).data(), j);
  return out;
}

TensorField sym_part(const VectorField& u) {
  TensorField j = jacobian(u);
  const int d = u.grid().dim();
  TensorField out(u.grid());
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      auto& o = out.comp(i, k);
      const auto& a = j.comp(i, k);
      const auto& b = j.comp(k, i);
      for (std::size_t c = 0; c < o.size(); ++c) o[c] = 0.5 * (a[c] + b[c]);
    }
  return out;
}

TensorField antisym_part(const VectorField& u) {
  TensorField j = jacobian(u);
  const int d = u.grid().dim();
  TensorField out(u.grid());
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      auto& o = out.comp(i, k);
      const auto& a = j.comp(i, k);
      const auto& b = j.comp(k, i);
      for (std::size_t c = 0; c < o.size(); ++c) o[c] = 0.5 * (a[c] - b[c]);
    }
  return out;
}

double integrate(const ScalarField& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += f[i];
  return sum * f.grid().cell_volume();
}

}  // namespace kflow
