#include <doctest.h>

#include <cmath>

#include "lpnse/errors.hpp"
#include "lpnse/littlewood_paley.hpp"
#include "lpnse/norms.hpp"
#include "support.hpp"

using namespace lpnse;
using lpnse::testing::max_abs_diff;
using lpnse::testing::white_noise;

TEST_CASE("profiles") {
  CHECK_NOTHROW(lp::validate_profile(lp::CutoffProfile::box()));
  CHECK_NOTHROW(lp::validate_profile(lp::CutoffProfile::smooth()));
  const auto s = lp::CutoffProfile::smooth();
  CHECK(s.phi_hat(0.0) == 1.0);
  CHECK(s.phi_hat(1.0) == 1.0);
  CHECK(s.phi_hat(1.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.phi_hat(2.0) == 0.0);
  CHECK(s.phi_hat(7.0) == 0.0);
  CHECK_THROWS_AS(lp::CutoffProfile::named("gaussian"), ParameterError);

  const lp::CutoffProfile rising{"rising", [](double r) { return r <= 1 ? 1.0 : (r < 1.5 ? 1.2 : 0.0); }};
  CHECK_THROWS_AS(lp::validate_profile(rising), InvalidProfileError);
  const lp::CutoffProfile long_tail{"tail", [](double r) { return r <= 1 ? 1.0 : std::exp(1.0 - r); }};
  CHECK_THROWS_AS(lp::validate_profile(long_tail), InvalidProfileError);
  const lp::CutoffProfile bump{"bump", [](double r) { return r <= 1 ? 1.0 : (r < 1.3 ? 0.2 : (r < 1.6 ? 0.4 : 0.0)); }};
  CHECK_THROWS_AS(lp::validate_profile(bump), InvalidProfileError);
  const lp::CutoffProfile soft{"soft", [](double r) { return r < 0.5 ? 1.0 : 0.0; }};
  CHECK_THROWS_AS(lp::build_partition(Grid(8), soft), InvalidProfileError);
}

TEST_CASE("dyadic range") {
  const auto p32 = lp::build_partition(Grid(32), lp::CutoffProfile::smooth());
  CHECK(p32.j_min() == 0);
  CHECK(p32.j_max() == 6);  // 2^5 = 32 >= sqrt(3) * 16
  const auto p8 = lp::build_partition(Grid(8), lp::CutoffProfile::box());
  CHECK(p8.j_min() == 0);
  CHECK(p8.j_max() == 4);
}

TEST_CASE("band multipliers telescope to one on every nonzero lattice point") {
  for (const auto& profile : {lp::CutoffProfile::box(), lp::CutoffProfile::smooth()})
    for (std::size_t n : {8u, 16u, 32u}) {
      const Grid g(n);
      const auto part = lp::build_partition(g, profile);
      double worst = 0.0;
      for (std::size_t i = 1; i < g.size(); ++i) {
        const double k = g.wavenumber_norm(i);
        double sum = 0.0;
        for (int j = part.j_min(); j <= part.j_max(); ++j) sum += part.band_multiplier(j, k);
        worst = std::max(worst, std::abs(sum - 1.0));
      }
      CHECK(worst <= 1e-14);
      double at_zero = 0.0;
      for (int j = part.j_min(); j <= part.j_max(); ++j) at_zero += part.band_multiplier(j, 0.0);
      CHECK(at_zero == 0.0);
    }
}

TEST_CASE("box profile gives exact dyadic annuli") {
  const Grid g(16);
  const auto part = lp::build_partition(g, lp::CutoffProfile::box());
  for (std::size_t i = 1; i < g.size(); ++i) {
    const double k = g.wavenumber_norm(i);
    for (int j = part.j_min(); j <= part.j_max(); ++j) {
      const double m = part.band_multiplier(j, k);
      const bool inside = k <= std::ldexp(1.0, j) && (j == part.j_min() || k > std::ldexp(1.0, j - 1));
      CHECK(m == (inside ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("low-pass limits") {
  const Grid g(16);
  const auto part = lp::build_partition(g, lp::CutoffProfile::smooth());
  auto f = white_noise(g, 3);
  f[0] = 0.25;
  const auto top = lp::low_pass(f, part.j_max(), part);
  CHECK(max_abs_diff(top, f) == 0.0);
  const auto bottom = lp::low_pass(f, part.j_min() - 1, part);
  CHECK(bottom[0] == f[0]);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(bottom[i] == 0.0);
}

TEST_CASE("decompose and reconstruct") {
  const Grid g(16);
  for (const auto& profile : {lp::CutoffProfile::box(), lp::CutoffProfile::smooth()}) {
    const auto part = lp::build_partition(g, profile);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto f = white_noise(g, seed);
      const auto blocks = lp::decompose(f, part);
      CHECK(blocks.size() == static_cast<std::size_t>(part.j_max() - part.j_min() + 1));
      CHECK(blocks.front().j == part.j_min());
      const auto back = lp::reconstruct(blocks);
      const std::vector<SpectralField> diff{back - f};
      const std::vector<SpectralField> orig{f};
      CHECK(norms::lp_norm(diff, 2.0) <= 1e-13 * norms::lp_norm(orig, 2.0));

      // Sum of block energies against the total: exact for box, within [1, 2] otherwise.
      double block_energy = 0.0;
      for (const auto& b : blocks) block_energy += std::pow(norms::sobolev_norm(b.field, 0.0), 2);
      const double ratio = std::pow(norms::sobolev_norm(f, 0.0), 2) / block_energy;
      if (profile.name == "box")
        CHECK(ratio == doctest::Approx(1.0).epsilon(1e-13));
      else {
        CHECK(ratio >= 1.0 - 1e-13);
        CHECK(ratio <= 2.0);
      }
    }
  }
}

TEST_CASE("vector band pass acts per component") {
  const Grid g(8);
  const auto part = lp::build_partition(g, lp::CutoffProfile::smooth());
  SpectralVectorField u(white_noise(g, 1), white_noise(g, 2), white_noise(g, 3));
  const auto b = lp::band_pass(u, 1, part);
  for (int c = 0; c < 3; ++c) CHECK(max_abs_diff(b[c], lp::band_pass(u[c], 1, part).field) == 0.0);
}
