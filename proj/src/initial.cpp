#include <cmath>
#include <random>

#include "lpnse/errors.hpp"
#include "lpnse/harness.hpp"
#include "lpnse/spectral.hpp"

namespace lpnse::harness {
namespace {

double lattice_norm2(const Grid& grid, std::size_t flat) {
  std::size_t i1, i2, i3;
  grid.unflat(flat, i1, i2, i3);
  const long k1 = grid.lattice(i1), k2 = grid.lattice(i2), k3 = grid.lattice(i3);
  return static_cast<double>(k1 * k1 + k2 * k2 + k3 * k3);
}

bool touches_nyquist(const Grid& grid, std::size_t flat) {
  std::size_t i1, i2, i3;
  grid.unflat(flat, i1, i2, i3);
  return grid.is_nyquist(i1) || grid.is_nyquist(i2) || grid.is_nyquist(i3);
}

bool inside_two_thirds(const Grid& grid, std::size_t flat) {
  std::size_t idx[3];
  grid.unflat(flat, idx[0], idx[1], idx[2]);
  const long n = static_cast<long>(grid.n());
  for (auto a : idx)
    if (3 * std::abs(grid.lattice(a)) > n) return false;
  return true;
}

// Draws a complex Gaussian for every lattice point (so the stream position
// does not depend on the mask) and keeps weight(flat) times it.
template <class Weight>
SpectralField gaussian_field(const Grid& grid, std::mt19937_64& rng, Weight&& weight) {
  std::normal_distribution<double> normal;
  SpectralField f(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    const double w = weight(i);
    if (w != 0.0) f[i] = w * Complex(re, im);
  }
  f.symmetrize();
  f[0] = 0.0;
  return f;
}

void add_sine(SpectralField& f, long k1, long k2, long k3, double a) {
  // a sin(k.x) = a (e^{ik.x} - e^{-ik.x}) / 2i
  f.mode(k1, k2, k3) += Complex(0.0, -0.5 * a);
  f.mode(-k1, -k2, -k3) += Complex(0.0, 0.5 * a);
}

void add_cosine(SpectralField& f, long k1, long k2, long k3, double a) {
  f.mode(k1, k2, k3) += 0.5 * a;
  f.mode(-k1, -k2, -k3) += 0.5 * a;
}

SpectralVectorField normalized(SpectralVectorField u, double amplitude) {
  if (amplitude == 0.0) return SpectralVectorField(u.grid());
  const PhysicalVectorField v = inverse_transform(u);
  double umax2 = 0.0;
  for (std::size_t p = 0; p < u.grid().size(); ++p)
    umax2 = std::max(umax2, v[0][p] * v[0][p] + v[1][p] * v[1][p] + v[2][p] * v[2][p]);
  if (umax2 == 0.0) throw DegenerateInputError("initial condition has no resolved modes");
  u *= amplitude / std::sqrt(umax2);
  return u;
}

SpectralVectorField solenoidal(SpectralVectorField u) {
  u = leray_project(u);
  for (int c = 0; c < 3; ++c) u[c][0] = 0.0;
  return u;
}

}  // namespace

IcKind parse_ic_kind(const std::string& tag) {
  if (tag == "taylor_green_2d3") return IcKind::taylor_green_2d3;
  if (tag == "random_spectrum") return IcKind::random_spectrum;
  if (tag == "single_shell") return IcKind::single_shell;
  if (tag == "abc_flow") return IcKind::abc_flow;
  throw ParameterError("unknown initial condition '" + tag +
                       "' (expected taylor_green_2d3, random_spectrum, single_shell or abc_flow)");
}

std::string to_string(IcKind kind) {
  switch (kind) {
    case IcKind::taylor_green_2d3: return "taylor_green_2d3";
    case IcKind::random_spectrum: return "random_spectrum";
    case IcKind::single_shell: return "single_shell";
    case IcKind::abc_flow: return "abc_flow";
  }
  return "unknown";
}

SpectralVectorField make_initial(const InitialCondition& ic, const Grid& grid) {
  if (!std::isfinite(ic.amplitude) || ic.amplitude < 0.0) throw ParameterError("amplitude must be >= 0");
  SpectralVectorField u(grid);
  const double a = ic.amplitude;
  switch (ic.kind) {
    case IcKind::taylor_green_2d3:
      // sin x1 cos x2 = (sin(x1 + x2) + sin(x1 - x2)) / 2
      add_sine(u[0], 1, 1, 0, 0.5 * a);
      add_sine(u[0], 1, -1, 0, 0.5 * a);
      // -cos x1 sin x2 = -(sin(x1 + x2) - sin(x1 - x2)) / 2
      add_sine(u[1], 1, 1, 0, -0.5 * a);
      add_sine(u[1], 1, -1, 0, 0.5 * a);
      return u;
    case IcKind::abc_flow:
      add_sine(u[0], 0, 0, 1, a);
      add_cosine(u[0], 0, 1, 0, a);
      add_sine(u[1], 1, 0, 0, a);
      add_cosine(u[1], 0, 0, 1, a);
      add_sine(u[2], 0, 1, 0, a);
      add_cosine(u[2], 1, 0, 0, a);
      return u;
    case IcKind::random_spectrum: {
      if (!(ic.peak_shell > 0.0)) throw ParameterError("random_spectrum needs peak_shell > 0");
      if (!(ic.slope > 0.0)) throw ParameterError("random_spectrum needs slope > 0");
      std::mt19937_64 rng(ic.seed);
      auto weight = [&](std::size_t i) {
        if (i == 0 || touches_nyquist(grid, i) || !inside_two_thirds(grid, i)) return 0.0;
        const double k = std::sqrt(lattice_norm2(grid, i));
        const double x = k / ic.peak_shell;
        const double energy = std::pow(x, ic.slope) * std::exp(-0.5 * ic.slope * x * x);
        return std::sqrt(energy / (4.0 * std::numbers::pi * k * k));
      };
      for (int c = 0; c < 3; ++c) u[c] = gaussian_field(grid, rng, weight);
      return normalized(solenoidal(std::move(u)), a);
    }
    case IcKind::single_shell: {
      const double radius = std::round(ic.peak_shell);
      if (radius < 1.0 || std::abs(radius - ic.peak_shell) > 1e-12)
        throw ParameterError("single_shell needs a positive integer peak_shell");
      if (2.0 * radius >= static_cast<double>(grid.n()))
        throw ParameterError("single_shell radius is not resolved on this grid");
      std::mt19937_64 rng(ic.seed);
      auto weight = [&](std::size_t i) {
        return !touches_nyquist(grid, i) && lattice_norm2(grid, i) == radius * radius ? 1.0 : 0.0;
      };
      for (int c = 0; c < 3; ++c) u[c] = gaussian_field(grid, rng, weight);
      return normalized(solenoidal(std::move(u)), a);
    }
  }
  throw ParameterError("unhandled initial condition");
}

namespace {

SpectralField band_limited_member(const Grid& grid, std::mt19937_64& rng) {
  const long top = std::max<long>(1, static_cast<long>(grid.n()) / 3);
  std::uniform_int_distribution<long> cutoff_dist(1, top);
  std::uniform_real_distribution<double> decay_dist(0.0, 3.0);
  const double cutoff = static_cast<double>(cutoff_dist(rng));
  const double decay = decay_dist(rng);
  auto weight = [&](std::size_t i) {
    if (i == 0 || touches_nyquist(grid, i)) return 0.0;
    const double k = std::sqrt(lattice_norm2(grid, i));
    return k <= cutoff ? std::pow(k, -decay) : 0.0;
  };
  return gaussian_field(grid, rng, weight);
}

}  // namespace

SpectralField random_band_limited(const Grid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return band_limited_member(grid, rng);
}

SpectralVectorField random_band_limited_vector(const Grid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SpectralField c1 = band_limited_member(grid, rng);
  SpectralField c2 = band_limited_member(grid, rng);
  SpectralField c3 = band_limited_member(grid, rng);
  return SpectralVectorField(std::move(c1), std::move(c2), std::move(c3));
}

}  // namespace lpnse::harness
