#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "kflow/grid.hpp"

namespace kflow {

namespace detail {
inline void require_same_grid(const Grid& a, const Grid& b) {
  if (a != b) throw std::invalid_argument("fields live on different grids");
}
}  // namespace detail

/// One real value per grid cell.
class ScalarField {
 public:
  explicit ScalarField(const Grid& grid, double fill = 0.0)
      : grid_(grid), values_(grid.size(), fill) {}

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  ScalarField& operator+=(const ScalarField& o) {
    detail::require_same_grid(grid_, o.grid_);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  ScalarField& operator-=(const ScalarField& o) {
    detail::require_same_grid(grid_, o.grid_);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  ScalarField& operator*=(double c) {
    for (double& v : values_) v *= c;
    return *this;
  }

  double min() const {
    double m = values_.empty() ? 0.0 : values_[0];
    for (double v : values_) m = std::min(m, v);
    return m;
  }
  double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }
  bool all_finite() const {
    for (double v : values_)
      if (!std::isfinite(v)) return false;
    return true;
  }

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// dim real components per cell, stored component-major.
class VectorField {
 public:
  explicit VectorField(const Grid& grid, double fill = 0.0) : grid_(grid) {
    for (int a = 0; a < grid.dim(); ++a)
      comps_.emplace_back(grid.size(), fill);
  }

  const Grid& grid() const { return grid_; }
  int dim() const { return grid_.dim(); }
  std::vector<double>& comp(int a) { return comps_[static_cast<std::size_t>(a)]; }
  const std::vector<double>& comp(int a) const {
    return comps_[static_cast<std::size_t>(a)];
  }
  double& at(int a, std::size_t i) { return comps_[static_cast<std::size_t>(a)][i]; }
  double at(int a, std::size_t i) const {
    return comps_[static_cast<std::size_t>(a)][i];
  }

  VectorField& operator+=(const VectorField& o) {
    detail::require_same_grid(grid_, o.grid_);
    for (std::size_t a = 0; a < comps_.size(); ++a)
      for (std::size_t i = 0; i < comps_[a].size(); ++i)
        comps_[a][i] += o.comps_[a][i];
    return *this;
  }
  VectorField& operator-=(const VectorField& o) {
    detail::require_same_grid(grid_, o.grid_);
    for (std::size_t a = 0; a < comps_.size(); ++a)
      for (std::size_t i = 0; i < comps_[a].size(); ++i)
        comps_[a][i] -= o.comps_[a][i];
    return *this;
  }
  VectorField& operator*=(double c) {
    for (auto& comp : comps_)
      for (double& v : comp) v *= c;
    return *this;
  }
  VectorField& axpy(double alpha, const VectorField& o) {
    detail::require_same_grid(grid_, o.grid_);
    for (std::size_t a = 0; a < comps_.size(); ++a)
      for (std::size_t i = 0; i < comps_[a].size(); ++i)
        comps_[a][i] += alpha * o.comps_[a][i];
    return *this;
  }
  /// Cellwise multiply every component by a scalar field.
  VectorField& scale_by(const ScalarField& s) {
    detail::require_same_grid(grid_, s.grid());
    for (auto& comp : comps_)
      for (std::size_t i = 0; i < comp.size(); ++i) comp[i] *= s[i];
    return *this;
  }

  double max_norm() const {
    double m = 0.0;
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      double s = 0.0;
      for (const auto& comp : comps_) s += comp[i] * comp[i];
      m = std::max(m, s);
    }
    return std::sqrt(m);
  }
  bool all_finite() const {
    for (const auto& comp : comps_)
      for (double v : comp)
        if (!std::isfinite(v)) return false;
    return true;
  }

 private:
  Grid grid_;
  std::vector<std::vector<double>> comps_;
};

/// dim x dim real components per cell; comp(i,j) holds entry (i,j).
class TensorField {
 public:
  explicit TensorField(const Grid& grid, double fill = 0.0) : grid_(grid) {
    int d = grid.dim();
    for (int k = 0; k < d * d; ++k) comps_.emplace_back(grid.size(), fill);
  }

  const Grid& grid() const { return grid_; }
  int dim() const { return grid_.dim(); }
  std::vector<double>& comp(int i, int j) {
    return comps_[static_cast<std::size_t>(i * grid_.dim() + j)];
  }
  const std::vector<double>& comp(int i, int j) const {
    return comps_[static_cast<std::size_t>(i * grid_.dim() + j)];
  }

  TensorField& operator+=(const TensorField& o) {
    detail::require_same_grid(grid_, o.grid_);
    for (std::size_t k = 0; k < comps_.size(); ++k)
      for (std::size_t i = 0; i < comps_[k].size(); ++i)
        comps_[k][i] += o.comps_[k][i];
    return *this;
  }
  TensorField& operator*=(double c) {
    for (auto& comp : comps_)
      for (double& v : comp) v *= c;
    return *this;
  }
  TensorField& axpy(double alpha, const TensorField& o) {
    detail::require_same_grid(grid_, o.grid_);
    for (std::size_t k = 0; k < comps_.size(); ++k)
      for (std::size_t i = 0; i < comps_[k].size(); ++i)
        comps_[k][i] += alpha * o.comps_[k][i];
    return *this;
  }
  TensorField& scale_by(const ScalarField& s) {
    detail::require_same_grid(grid_, s.grid());
    for (auto& comp : comps_)
      for (std::size_t i = 0; i < comp.size(); ++i) comp[i] *= s[i];
    return *this;
  }

  bool all_finite() const {
    for (const auto& comp : comps_)
      for (double v : comp)
        if (!std::isfinite(v)) return false;
    return true;
  }

 private:
  Grid grid_;
  std::vector<std::vector<double>> comps_;
};

}  // namespace kflow
