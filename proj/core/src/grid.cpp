#include "kflow/grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace kflow {

Grid::Grid(std::size_t nx, double lx)
    : dim_(1), n_{nx, 1}, length_{lx, 0.0}, dx_{0.0, 0.0}, size_(nx) {
  validate();
  dx_[0] = length_[0] / static_cast<double>(n_[0]);
}

Grid::Grid(std::size_t nx, std::size_t ny, double lx, double ly)
    : dim_(2), n_{nx, ny}, length_{lx, ly}, dx_{0.0, 0.0}, size_(nx * ny) {
  validate();
  dx_[0] = length_[0] / static_cast<double>(n_[0]);
  dx_[1] = length_[1] / static_cast<double>(n_[1]);
}

void Grid::validate() const {
  for (int a = 0; a < dim_; ++a) {
    if (n_[static_cast<std::size_t>(a)] < 4)
      throw std::invalid_argument("grid needs at least 4 cells per axis");
    if (!(length_[static_cast<std::size_t>(a)] > 0.0))
      throw std::invalid_argument("grid lengths must be positive");
  }
}

double Grid::min_dx() const {
  return dim_ == 1 ? dx_[0] : std::min(dx_[0], dx_[1]);
}

double Grid::cell_volume() const {
  return dim_ == 1 ? dx_[0] : dx_[0] * dx_[1];
}

double Grid::volume() const {
  return dim_ == 1 ? length_[0] : length_[0] * length_[1];
}

bool Grid::operator==(const Grid& other) const {
  if (dim_ != other.dim_) return false;
  for (int a = 0; a < dim_; ++a) {
    auto i = static_cast<std::size_t>(a);
    if (n_[i] != other.n_[i] || length_[i] != other.length_[i]) return false;
  }
  return true;
}

}  // namespace kflow
