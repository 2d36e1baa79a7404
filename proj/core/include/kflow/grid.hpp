#pragma once

#include <array>
#include <cstddef>

namespace kflow {

/// Uniform periodic lattice in one or two space dimensions.
/// Cell i on axis a sits at coordinate i*dx(a); indexing wraps on every axis.
class Grid {
 public:
  Grid(std::size_t nx, double lx);
  Grid(std::size_t nx, std::size_t ny, double lx, double ly);

  int dim() const { return dim_; }
  std::size_t n(int axis) const { return n_[static_cast<std::size_t>(axis)]; }
  double length(int axis) const { return length_[static_cast<std::size_t>(axis)]; }
  double dx(int axis) const { return dx_[static_cast<std::size_t>(axis)]; }
  double min_dx() const;
  std::size_t size() const { return size_; }
  double cell_volume() const;
  double volume() const;

  // Row-major, axis 0 slowest.
  std::size_t index(std::size_t i, std::size_t j = 0) const {
    return dim_ == 1 ? i : i * n_[1] + j;
  }
  double coord(int axis, std::size_t i) const {
    return static_cast<double>(i) * dx(axis);
  }

  bool operator==(const Grid& other) const;
  bool operator!=(const Grid& other) const { return !(*this == other); }

 private:
  void validate() const;
  int dim_;
  std::array<std::size_t, 2> n_;
  std::array<double, 2> length_;
  std::array<double, 2> dx_;
  std::size_t size_;
};

}  // namespace kflow
