#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "lpnse/grid.hpp"

namespace lpnse {

using Complex = std::complex<double>;

/// Real values on the n^3 collocation points.
class PhysicalField {
 public:
  explicit PhysicalField(const Grid& grid);
  PhysicalField(const Grid& grid, std::vector<double> values);

  const Grid& grid() const noexcept { return grid_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& at(std::size_t i1, std::size_t i2, std::size_t i3) noexcept { return values_[grid_.flat(i1, i2, i3)]; }
  double at(std::size_t i1, std::size_t i2, std::size_t i3) const noexcept {
    return values_[grid_.flat(i1, i2, i3)];
  }

  bool is_finite() const noexcept;

  template <class F>
  static PhysicalField sample(const Grid& grid, F&& f) {
    PhysicalField out(grid);
    const std::size_t n = grid.n();
    for (std::size_t i1 = 0; i1 < n; ++i1)
      for (std::size_t i2 = 0; i2 < n; ++i2)
        for (std::size_t i3 = 0; i3 < n; ++i3)
          out.at(i1, i2, i3) = f(grid.coordinate(i1), grid.coordinate(i2), grid.coordinate(i3));
    return out;
  }

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Fourier coefficients on the full n^3 wavenumber lattice.
class SpectralField {
 public:
  explicit SpectralField(const Grid& grid);
  SpectralField(const Grid& grid, std::vector<Complex> coeffs);

  const Grid& grid() const noexcept { return grid_; }
  std::span<Complex> coeffs() noexcept { return coeffs_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  Complex& operator[](std::size_t i) noexcept { return coeffs_[i]; }
  const Complex& operator[](std::size_t i) const noexcept { return coeffs_[i]; }
  Complex& at(std::size_t i1, std::size_t i2, std::size_t i3) noexcept { return coeffs_[grid_.flat(i1, i2, i3)]; }
  const Complex& at(std::size_t i1, std::size_t i2, std::size_t i3) const noexcept {
    return coeffs_[grid_.flat(i1, i2, i3)];
  }
  /// Coefficient of an integer lattice wavenumber (negative entries allowed).
  Complex& mode(long k1, long k2, long k3);
  const Complex& mode(long k1, long k2, long k3) const;

  Complex mean() const noexcept { return coeffs_[0]; }
  double max_abs() const noexcept;
  /// max_k |c(k) - conj(c(-k))|.
  double hermitian_defect() const noexcept;
  /// Replace c by its Hermitian part (c(k) + conj(c(-k))) / 2.
  void symmetrize();
  bool is_finite() const noexcept;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s) noexcept;
  /// this += s * other
  SpectralField& add_scaled(const SpectralField& other, double s);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

 private:
  std::size_t index_of(long k1, long k2, long k3) const;

  Grid grid_;
  std::vector<Complex> coeffs_;
};

/// Three spectral components on one grid.
class SpectralVectorField {
 public:
  explicit SpectralVectorField(const Grid& grid);
  SpectralVectorField(SpectralField c1, SpectralField c2, SpectralField c3);

  const Grid& grid() const noexcept { return components_[0].grid(); }
  SpectralField& operator[](std::size_t c) noexcept { return components_[c]; }
  const SpectralField& operator[](std::size_t c) const noexcept { return components_[c]; }
  std::span<SpectralField, 3> components() noexcept { return components_; }
  std::span<const SpectralField, 3> components() const noexcept { return components_; }

  double max_abs() const noexcept;
  bool is_finite() const noexcept;

  SpectralVectorField& operator+=(const SpectralVectorField& other);
  SpectralVectorField& operator-=(const SpectralVectorField& other);
  SpectralVectorField& operator*=(double s) noexcept;
  SpectralVectorField& add_scaled(const SpectralVectorField& other, double s);

  friend SpectralVectorField operator+(SpectralVectorField a, const SpectralVectorField& b) { return a += b; }
  friend SpectralVectorField operator-(SpectralVectorField a, const SpectralVectorField& b) { return a -= b; }
  friend SpectralVectorField operator*(double s, SpectralVectorField a) { return a *= s; }

 private:
  std::array<SpectralField, 3> components_;
};

using PhysicalVectorField = std::array<PhysicalField, 3>;

}  // namespace lpnse
