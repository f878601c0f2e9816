#include "lpnse/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "lpnse/errors.hpp"

namespace lpnse {
namespace {

// FFTW plans are created once per grid size. Planning is not thread-safe and
// is serialized here; executing a plan on other (equally aligned) arrays is.
// FFTW_ESTIMATE keeps the plan, and so the rounding, identical across runs.
struct Plans {
  fftw_plan forward = nullptr;   // r2c
  fftw_plan backward = nullptr;  // c2r
  ~Plans() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

struct Scratch {
  std::size_t n = 0;
  double* real = nullptr;
  fftw_complex* half = nullptr;
  ~Scratch() {
    fftw_free(real);
    fftw_free(half);
  }
};

std::size_t half_size(std::size_t n) { return n * n * (n / 2 + 1); }

const Plans& plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<Plans>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    const int ni = static_cast<int>(n);
    double* real = fftw_alloc_real(n * n * n);
    fftw_complex* half = fftw_alloc_complex(half_size(n));
    auto plans = std::make_unique<Plans>();
    plans->forward = fftw_plan_dft_r2c_3d(ni, ni, ni, real, half, FFTW_ESTIMATE);
    plans->backward = fftw_plan_dft_c2r_3d(ni, ni, ni, half, real, FFTW_ESTIMATE);
    fftw_free(real);
    fftw_free(half);
    if (!plans->forward || !plans->backward)
      throw ConfigurationError("could not create FFT plan for n=" + std::to_string(n));
    slot = std::move(plans);
  }
  return *slot;
}

// Per-thread aligned work arrays, reused across calls of the same size.
Scratch& scratch_for(std::size_t n) {
  thread_local std::map<std::size_t, Scratch> buffers;
  Scratch& s = buffers[n];
  if (!s.real) {
    s.n = n;
    s.real = fftw_alloc_real(n * n * n);
    s.half = fftw_alloc_complex(half_size(n));
  }
  return s;
}

constexpr double kHermitianTolerance = 1e-12;

}  // namespace

SpectralField transform(const PhysicalField& f) {
  if (!f.is_finite()) throw NonFiniteError("transform: physical field contains NaN or Inf");
  const Grid& grid = f.grid();
  const std::size_t n = grid.n(), nh = n / 2 + 1;
  const auto& plans = plans_for(n);
  Scratch& s = scratch_for(n);
  std::copy(f.values().begin(), f.values().end(), s.real);
  fftw_execute_dft_r2c(plans.forward, s.real, s.half);

  // Expand the half spectrum; the other half follows from c(-k) = conj c(k).
  const double scale = 1.0 / static_cast<double>(grid.size());
  std::vector<Complex> out(grid.size());
  for (std::size_t i1 = 0; i1 < n; ++i1)
    for (std::size_t i2 = 0; i2 < n; ++i2) {
      const fftw_complex* row = s.half + (i1 * n + i2) * nh;
      Complex* dst = out.data() + (i1 * n + i2) * n;
      Complex* mirror = out.data() + (grid.mirror(i1) * n + grid.mirror(i2)) * n;
      for (std::size_t i3 = 0; i3 < nh; ++i3) {
        const Complex c(row[i3][0] * scale, row[i3][1] * scale);
        dst[i3] = c;
        if (i3 != 0 && i3 != n / 2) mirror[n - i3] = std::conj(c);
      }
    }
  SpectralField result(grid, std::move(out));
  // Only the planes i3 = 0 and i3 = n/2 hold independently computed pairs.
  result.symmetrize();
  return result;
}

PhysicalField inverse_transform(const SpectralField& f) {
  const Grid& grid = f.grid();
  const std::size_t n = grid.n(), nh = n / 2 + 1;
  // Defect and magnitude in one pass; every mirror pair has a member with i3 <= n/2.
  double d2 = 0.0, m2 = 0.0;
  for (std::size_t i1 = 0; i1 < n; ++i1)
    for (std::size_t i2 = 0; i2 < n; ++i2) {
      const Complex* row = f.coeffs().data() + (i1 * n + i2) * n;
      const Complex* mirror = f.coeffs().data() + (grid.mirror(i1) * n + grid.mirror(i2)) * n;
      for (std::size_t i3 = 0; i3 < nh; ++i3) {
        const Complex a = row[i3];
        const Complex b = mirror[i3 == 0 ? 0 : n - i3];
        d2 = std::max(d2, std::norm(a - std::conj(b)));
        m2 = std::max({m2, std::norm(a), std::norm(b)});
      }
    }
  const double defect = std::sqrt(d2);
  if (defect > kHermitianTolerance * std::sqrt(m2) || std::isnan(d2) || std::isnan(m2))
    throw SymmetryError("inverse_transform: coefficients are not Hermitian (defect " + std::to_string(defect) + ")");
  const auto& plans = plans_for(n);
  Scratch& s = scratch_for(n);
  for (std::size_t r = 0; r < n * n; ++r) {
    const Complex* src = f.coeffs().data() + r * n;
    fftw_complex* row = s.half + r * nh;
    for (std::size_t i3 = 0; i3 < nh; ++i3) {
      row[i3][0] = src[i3].real();
      row[i3][1] = src[i3].imag();
    }
  }
  fftw_execute_dft_c2r(plans.backward, s.half, s.real);
  return PhysicalField(grid, std::vector<double>(s.real, s.real + grid.size()));
}

SpectralVectorField transform(const PhysicalVectorField& f) {
  return SpectralVectorField(transform(f[0]), transform(f[1]), transform(f[2]));
}

PhysicalVectorField inverse_transform(const SpectralVectorField& f) {
  return {inverse_transform(f[0]), inverse_transform(f[1]), inverse_transform(f[2])};
}

SpectralField derivative(const SpectralField& f, int axis, int order) {
  if (axis < 0 || axis > 2) throw ParameterError("derivative: axis must be 0, 1 or 2");
  if (order < 1) throw ParameterError("derivative: order must be >= 1");
  const Grid& grid = f.grid();
  const std::size_t n = grid.n();
  // (i k)^order for each index along the axis.
  std::vector<Complex> factor(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (order % 2 == 1 && grid.is_nyquist(i)) {
      factor[i] = 0.0;
      continue;
    }
    // i^order * k^order, built from the real power so integer orders stay exact.
    const double mag = std::pow(std::abs(grid.wavenumber(i)), order);
    const double sign = grid.wavenumber(i) < 0.0 && order % 2 == 1 ? -1.0 : 1.0;
    switch (order % 4) {
      case 0: factor[i] = Complex(mag, 0.0); break;
      case 1: factor[i] = Complex(0.0, sign * mag); break;
      case 2: factor[i] = Complex(-mag, 0.0); break;
      case 3: factor[i] = Complex(0.0, -sign * mag); break;
    }
  }
  // The factor is real or imaginary, so the product is written out by hand.
  auto times = [](const Complex& a, const Complex& b) {
    return Complex(a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real());
  };
  SpectralField out(grid);
  const Complex* in = f.coeffs().data();
  Complex* dst = out.coeffs().data();
  for (std::size_t i1 = 0; i1 < n; ++i1)
    for (std::size_t i2 = 0; i2 < n; ++i2) {
      const std::size_t base = (i1 * n + i2) * n;
      if (axis == 2) {
        for (std::size_t i3 = 0; i3 < n; ++i3) dst[base + i3] = times(factor[i3], in[base + i3]);
      } else {
        const Complex c = factor[axis == 0 ? i1 : i2];
        for (std::size_t i3 = 0; i3 < n; ++i3) dst[base + i3] = times(c, in[base + i3]);
      }
    }
  return out;
}

SpectralVectorField gradient(const SpectralField& f) {
  return SpectralVectorField(derivative(f, 0), derivative(f, 1), derivative(f, 2));
}

SpectralField laplacian(const SpectralField& f) {
  const Grid& grid = f.grid();
  SpectralField out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double k = grid.wavenumber_norm(i);
    out[i] = -(k * k) * f[i];
  }
  return out;
}

SpectralVectorField laplacian(const SpectralVectorField& u) {
  return SpectralVectorField(laplacian(u[0]), laplacian(u[1]), laplacian(u[2]));
}

SpectralField divergence(const SpectralVectorField& u) {
  SpectralField out = derivative(u[0], 0);
  out += derivative(u[1], 1);
  out += derivative(u[2], 2);
  return out;
}

std::vector<SpectralField> velocity_gradient(const SpectralVectorField& u) {
  std::vector<SpectralField> out;
  out.reserve(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.push_back(derivative(u[i], j));
  return out;
}

void derivative_wavenumber(const Grid& grid, std::size_t flat_index, double k[3]) noexcept {
  std::size_t idx[3];
  grid.unflat(flat_index, idx[0], idx[1], idx[2]);
  for (int a = 0; a < 3; ++a) k[a] = grid.is_nyquist(idx[a]) ? 0.0 : grid.wavenumber(idx[a]);
}

SpectralVectorField leray_project(const SpectralVectorField& u) {
  const Grid& grid = u.grid();
  SpectralVectorField out = u;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double k[3];
    derivative_wavenumber(grid, i, k);
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (k2 == 0.0) continue;
    const Complex kdotu = k[0] * u[0][i] + k[1] * u[1][i] + k[2] * u[2][i];
    for (int c = 0; c < 3; ++c) out[c][i] -= (k[c] / k2) * kdotu;
  }
  return out;
}

double divergence_defect(const SpectralVectorField& u) {
  const Grid& grid = u.grid();
  const double umax = u.max_abs();
  if (umax == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double k[3];
    derivative_wavenumber(grid, i, k);
    worst = std::max(worst, std::abs(k[0] * u[0][i] + k[1] * u[1][i] + k[2] * u[2][i]));
  }
  return worst / umax;
}

SpectralField apply_radial_multiplier(const SpectralField& f, const std::function<double(double)>& m) {
  const Grid& grid = f.grid();
  SpectralField out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = m(grid.wavenumber_norm(i)) * f[i];
  return out;
}

Complex spectral_inner(const SpectralVectorField& a, const SpectralVectorField& b) {
  require_same_grid(a.grid(), b.grid(), "spectral_inner");
  Complex sum{};
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < a.grid().size(); ++i) sum += a[c][i] * std::conj(b[c][i]);
  return sum;
}

PhysicalVectorField convective_product_physical(const SpectralVectorField& u) {
  const Grid& grid = u.grid();
  const PhysicalVectorField velocity = inverse_transform(u);
  PhysicalVectorField product{PhysicalField(grid), PhysicalField(grid), PhysicalField(grid)};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const PhysicalField dj_ui = inverse_transform(derivative(u[i], j));
      auto out = product[i].values();
      const auto uj = velocity[j].values();
      const auto d = dj_ui.values();
      for (std::size_t p = 0; p < grid.size(); ++p) out[p] += uj[p] * d[p];
    }
  }
  return product;
}

SpectralVectorField convective_product(const SpectralVectorField& u) {
  return transform(convective_product_physical(u));
}

SpectralField pressure_from(const SpectralVectorField& u) {
  const Grid& grid = u.grid();
  const SpectralVectorField nonlinear = convective_product(u);
  SpectralField pressure(grid);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    double k[3];
    derivative_wavenumber(grid, i, k);
    const double knorm = grid.wavenumber_norm(i);
    const Complex kdotn = k[0] * nonlinear[0][i] + k[1] * nonlinear[1][i] + k[2] * nonlinear[2][i];
    pressure[i] = Complex(0.0, 1.0) * kdotn / (knorm * knorm);
  }
  return pressure;
}

}  // namespace lpnse
