#include "lpnse/fields.hpp"

#include <algorithm>
#include <cmath>

#include "lpnse/errors.hpp"

namespace lpnse {

PhysicalField::PhysicalField(const Grid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

PhysicalField::PhysicalField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw ConfigurationError("physical field has " + std::to_string(values_.size()) +
                             " values, grid expects " + std::to_string(grid_.size()));
}

bool PhysicalField::is_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

SpectralField::SpectralField(const Grid& grid) : grid_(grid), coeffs_(grid.size(), Complex{}) {}

SpectralField::SpectralField(const Grid& grid, std::vector<Complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size())
    throw ConfigurationError("spectral field has " + std::to_string(coeffs_.size()) +
                             " coefficients, grid expects " + std::to_string(grid_.size()));
}

std::size_t SpectralField::index_of(long k1, long k2, long k3) const {
  const long n = static_cast<long>(grid_.n());
  auto wrap = [n](long k) -> std::size_t {
    if (k <= -n / 2 || k > n / 2)
      throw ParameterError("wavenumber " + std::to_string(k) + " is not resolved on n=" + std::to_string(n));
    return static_cast<std::size_t>((k + n) % n);
  };
  return grid_.flat(wrap(k1), wrap(k2), wrap(k3));
}

Complex& SpectralField::mode(long k1, long k2, long k3) { return coeffs_[index_of(k1, k2, k3)]; }
const Complex& SpectralField::mode(long k1, long k2, long k3) const { return coeffs_[index_of(k1, k2, k3)]; }

double SpectralField::max_abs() const noexcept {
  double m2 = 0.0;
  for (const auto& c : coeffs_) m2 = std::max(m2, std::norm(c));
  return std::sqrt(m2);
}

double SpectralField::hermitian_defect() const noexcept {
  const std::size_t n = grid_.n();
  double d2 = 0.0;
  for (std::size_t i1 = 0; i1 < n; ++i1)
    for (std::size_t i2 = 0; i2 < n; ++i2) {
      const Complex* row = coeffs_.data() + (i1 * n + i2) * n;
      const Complex* mirror = coeffs_.data() + (grid_.mirror(i1) * n + grid_.mirror(i2)) * n;
      for (std::size_t i3 = 0; i3 < n; ++i3) {
        const Complex m = mirror[i3 == 0 ? 0 : n - i3];
        d2 = std::max(d2, std::norm(row[i3] - std::conj(m)));
      }
    }
  return std::sqrt(d2);
}

void SpectralField::symmetrize() {
  const std::size_t n = grid_.n();
  for (std::size_t i1 = 0; i1 < n; ++i1)
    for (std::size_t i2 = 0; i2 < n; ++i2) {
      Complex* row = coeffs_.data() + (i1 * n + i2) * n;
      Complex* mirror = coeffs_.data() + (grid_.mirror(i1) * n + grid_.mirror(i2)) * n;
      for (std::size_t i3 = 0; i3 < n; ++i3) {
        const std::size_t m3 = i3 == 0 ? 0 : n - i3;
        Complex* a = row + i3;
        Complex* b = mirror + m3;
        if (b < a) continue;
        const Complex va = *a, vb = *b;
        *a = 0.5 * (va + std::conj(vb));
        *b = 0.5 * (vb + std::conj(va));
      }
    }
}

bool SpectralField::is_finite() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_, "SpectralField::operator+=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_, "SpectralField::operator-=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) noexcept {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

SpectralField& SpectralField::add_scaled(const SpectralField& other, double s) {
  require_same_grid(grid_, other.grid_, "SpectralField::add_scaled");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * other.coeffs_[i];
  return *this;
}

SpectralVectorField::SpectralVectorField(const Grid& grid)
    : components_{SpectralField(grid), SpectralField(grid), SpectralField(grid)} {}

SpectralVectorField::SpectralVectorField(SpectralField c1, SpectralField c2, SpectralField c3)
    : components_{std::move(c1), std::move(c2), std::move(c3)} {
  require_same_grid(components_[0].grid(), components_[1].grid(), "SpectralVectorField");
  require_same_grid(components_[0].grid(), components_[2].grid(), "SpectralVectorField");
}

double SpectralVectorField::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& c : components_) m = std::max(m, c.max_abs());
  return m;
}

bool SpectralVectorField::is_finite() const noexcept {
  return std::all_of(components_.begin(), components_.end(), [](const SpectralField& c) { return c.is_finite(); });
}

SpectralVectorField& SpectralVectorField::operator+=(const SpectralVectorField& other) {
  for (std::size_t c = 0; c < 3; ++c) components_[c] += other.components_[c];
  return *this;
}

SpectralVectorField& SpectralVectorField::operator-=(const SpectralVectorField& other) {
  for (std::size_t c = 0; c < 3; ++c) components_[c] -= other.components_[c];
  return *this;
}

SpectralVectorField& SpectralVectorField::operator*=(double s) noexcept {
  for (auto& c : components_) c *= s;
  return *this;
}

SpectralVectorField& SpectralVectorField::add_scaled(const SpectralVectorField& other, double s) {
  for (std::size_t c = 0; c < 3; ++c) components_[c].add_scaled(other.components_[c], s);
  return *this;
}

}  // namespace lpnse
