#pragma once

#include <cstddef>
#include <numbers>

namespace lpnse {

/// Uniform periodic box [0, L)^3 with n collocation points per axis.
///
/// Flat storage is row-major with x1 slowest. Spectral index i along an axis
/// carries the integer wavenumber i for i <= n/2 and i - n otherwise, so the
/// resolved lattice is {-n/2+1, ..., n/2} and index n/2 is the Nyquist mode.
class Grid {
 public:
  explicit Grid(std::size_t n, double box_length = 2.0 * std::numbers::pi);

  std::size_t n() const noexcept { return n_; }
  double box_length() const noexcept { return box_length_; }
  std::size_t size() const noexcept { return n_ * n_ * n_; }
  double spacing() const noexcept { return box_length_ / static_cast<double>(n_); }
  double cell_volume() const noexcept;
  double volume() const noexcept { return box_length_ * box_length_ * box_length_; }
  /// 2*pi / L: physical wavenumber of lattice index 1.
  double wavenumber_scale() const noexcept { return 2.0 * std::numbers::pi / box_length_; }

  long lattice(std::size_t index) const noexcept {
    return index <= n_ / 2 ? static_cast<long>(index) : static_cast<long>(index) - static_cast<long>(n_);
  }
  double wavenumber(std::size_t index) const noexcept {
    return wavenumber_scale() * static_cast<double>(lattice(index));
  }
  bool is_nyquist(std::size_t index) const noexcept { return index == n_ / 2; }

  std::size_t flat(std::size_t i1, std::size_t i2, std::size_t i3) const noexcept {
    return (i1 * n_ + i2) * n_ + i3;
  }
  void unflat(std::size_t flat_index, std::size_t& i1, std::size_t& i2, std::size_t& i3) const noexcept {
    i3 = flat_index % n_;
    i2 = (flat_index / n_) % n_;
    i1 = flat_index / (n_ * n_);
  }
  std::size_t mirror(std::size_t index) const noexcept { return (n_ - index) % n_; }
  /// Flat index of the lattice point -k.
  std::size_t mirror_flat(std::size_t flat_index) const noexcept;

  /// |k| of a flat spectral index, in physical units.
  double wavenumber_norm(std::size_t flat_index) const noexcept;
  double max_wavenumber_norm() const noexcept;
  double min_wavenumber_norm() const noexcept { return wavenumber_scale(); }

  /// Collocation coordinate x = index * h.
  double coordinate(std::size_t index) const noexcept { return spacing() * static_cast<double>(index); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t n_;
  double box_length_;
};

/// Throws ConfigurationError unless both grids are identical.
void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace lpnse
