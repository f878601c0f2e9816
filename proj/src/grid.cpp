#include "lpnse/grid.hpp"

#include <cmath>
#include <string>

#include "lpnse/errors.hpp"

namespace lpnse {

Grid::Grid(std::size_t n, double box_length) : n_(n), box_length_(box_length) {
  if (n < 8 || n % 2 != 0)
    throw ConfigurationError("grid size must be even and >= 8, got " + std::to_string(n));
  if (!(box_length > 0.0) || !std::isfinite(box_length))
    throw ConfigurationError("box length must be positive and finite");
}

double Grid::cell_volume() const noexcept {
  const double h = spacing();
  return h * h * h;
}

std::size_t Grid::mirror_flat(std::size_t flat_index) const noexcept {
  std::size_t i1, i2, i3;
  unflat(flat_index, i1, i2, i3);
  return flat(mirror(i1), mirror(i2), mirror(i3));
}

double Grid::wavenumber_norm(std::size_t flat_index) const noexcept {
  std::size_t i1, i2, i3;
  unflat(flat_index, i1, i2, i3);
  const long k1 = lattice(i1), k2 = lattice(i2), k3 = lattice(i3);
  return wavenumber_scale() * std::sqrt(static_cast<double>(k1 * k1 + k2 * k2 + k3 * k3));
}

double Grid::max_wavenumber_norm() const noexcept {
  const double half = static_cast<double>(n_ / 2);
  return wavenumber_scale() * std::sqrt(3.0 * half * half);
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b))
    throw ConfigurationError(std::string(what) + ": operands live on different grids (n=" +
                             std::to_string(a.n()) + " vs n=" + std::to_string(b.n()) + ")");
}

}  // namespace lpnse
