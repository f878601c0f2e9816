#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "lpnse/fields.hpp"
#include "lpnse/spectral.hpp"

namespace lpnse::testing {

inline constexpr double kPi = std::numbers::pi;

// White noise in physical space, mean removed. Independent of the library's
// own generators.
inline SpectralField white_noise(const Grid& grid, std::uint64_t seed, bool drop_nyquist = false) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  PhysicalField f(grid);
  for (auto& v : f.values()) v = normal(rng);
  SpectralField c = transform(f);
  c[0] = 0.0;
  if (drop_nyquist) {
    const std::size_t n = grid.n();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      std::size_t i1, i2, i3;
      grid.unflat(i, i1, i2, i3);
      if (i1 == n / 2 || i2 == n / 2 || i3 == n / 2) c[i] = 0.0;
    }
  }
  return c;
}

inline SpectralVectorField white_noise_vector(const Grid& grid, std::uint64_t seed, bool drop_nyquist = false) {
  return SpectralVectorField(white_noise(grid, 3 * seed, drop_nyquist), white_noise(grid, 3 * seed + 1, drop_nyquist),
                             white_noise(grid, 3 * seed + 2, drop_nyquist));
}

inline double max_abs_diff(const PhysicalField& a, const PhysicalField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace lpnse::testing
