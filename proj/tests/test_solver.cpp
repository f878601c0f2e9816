#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "lpnse/errors.hpp"
#include "lpnse/harness.hpp"
#include "lpnse/littlewood_paley.hpp"
#include "lpnse/norms.hpp"
#include "lpnse/solver.hpp"
#include "support.hpp"

using namespace lpnse;
using lpnse::testing::max_abs_diff;

namespace {

SpectralVectorField taylor_green(const Grid& g, double amplitude = 1.0) {
  return harness::make_initial({harness::IcKind::taylor_green_2d3, amplitude}, g);
}

SpectralVectorField shear(const Grid& g, double k, double a) {
  PhysicalVectorField v{PhysicalField::sample(g, [=](double, double y, double) { return a * std::sin(k * y); }),
                        PhysicalField(g), PhysicalField(g)};
  return transform(v);
}

nse::SolverState advance(nse::SolverState s, const nse::SolverConfig& cfg, long steps) {
  for (long i = 0; i < steps; ++i) s = nse::step(s, cfg);
  return s;
}

double relative_l2(const SpectralVectorField& a, const SpectralVectorField& b) {
  const auto d = a - b;
  return norms::sobolev_norm(d.components(), 0.0) / norms::sobolev_norm(b.components(), 0.0);
}

}  // namespace

TEST_CASE("solver config validation") {
  nse::SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.dt = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg.dt = 1e-3;
  cfg.viscosity = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg.viscosity = 1.0;
  cfg.diag_every = 0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  CHECK(nse::parse_dealias("none") == nse::Dealias::none);
  CHECK_THROWS_AS(nse::parse_dealias("three_halves"), ParameterError);
}

TEST_CASE("two-thirds mask") {
  const Grid g(12);
  auto u = lpnse::testing::white_noise_vector(g, 5);
  nse::apply_dealias(u, nse::Dealias::two_thirds);
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::size_t i1, i2, i3;
    g.unflat(i, i1, i2, i3);
    const bool cut = std::abs(g.lattice(i1)) > 4 || std::abs(g.lattice(i2)) > 4 || std::abs(g.lattice(i3)) > 4;
    if (cut) CHECK(u[0][i] == Complex{});
  }
  CHECK(u[0].mode(4, -4, 3) != Complex{});
}

TEST_CASE("single-mode shear decays exactly") {
  const Grid g(16);
  const nse::SolverConfig cfg{g, 0.01, 0.5, 0.7};
  const auto u0 = shear(g, 3.0, 0.2);
  const auto s = advance({0.0, u0, 0}, cfg, 50);
  CHECK(s.step_count == 50);
  const auto expected = std::exp(-0.7 * 9.0 * s.t) * u0;
  CHECK(relative_l2(s.u, expected) < 1e-13);
}

TEST_CASE("Taylor-Green decays as exp(-2 nu t)") {
  const Grid g(16);
  const nse::SolverConfig cfg{g, 1e-3, 0.1, 1.0};
  const auto u0 = taylor_green(g);
  const auto s = advance({0.0, u0, 0}, cfg, 100);
  CHECK(relative_l2(s.u, std::exp(-2.0 * s.t) * u0) < 1e-12);
  CHECK(divergence_defect(s.u) < 1e-14);
}

TEST_CASE("zero field") {
  const Grid g(8);
  const SpectralVectorField zero(g);
  CHECK(std::isinf(nse::cfl_limit(zero)));
  const auto s = advance({0.0, zero, 0}, nse::SolverConfig{g, 0.1}, 5);
  CHECK(s.u.max_abs() == 0.0);
  const auto part = lp::build_partition(g, lp::CutoffProfile::smooth());
  const auto d = nse::diagnose(s, part);
  CHECK(d.nonlinear_I == 0.0);
  CHECK(d.holder_bound == 0.0);
  CHECK(d.report.besov_m1_inf_inf == 0.0);
}

TEST_CASE("random flow: invariants along the trajectory") {
  const Grid g(16);
  harness::InitialCondition ic{harness::IcKind::random_spectrum, 1.0};
  ic.seed = 3;
  const nse::SolverConfig cfg{g, 5e-3, 0.2, 0.2, nse::Dealias::two_thirds, 1};
  const auto part = lp::build_partition(g, lp::CutoffProfile::smooth());
  nse::SolverState s{0.0, harness::make_initial(ic, g), 0};
  REQUIRE_NOTHROW(nse::check_state(s));
  std::vector<nse::Diagnostic> history{nse::diagnose(s, part)};
  double energy = history.back().report.l2;
  for (int i = 0; i < 40; ++i) {
    s = nse::step(s, cfg);
    CHECK_NOTHROW(nse::check_state(s));
    history.push_back(nse::diagnose(s, part));
    const auto& d = history.back();
    CHECK(d.report.l2 <= energy * (1 + 1e-12));
    energy = d.report.l2;
    CHECK(d.nonlinear_I <= d.holder_bound * (1 + 1e-9));
    CHECK(std::abs(d.nonlinear_I) > 0.0);
  }
  const auto ledger = nse::energy_ledger(history, history.front().report.l2, cfg.viscosity);
  CHECK(ledger.holds);
  CHECK(ledger.max_increment <= 1e-8 * std::pow(history.front().report.l2, 2));

  const auto balance = nse::enstrophy_balance(history, cfg.viscosity);
  CHECK(balance.size() == history.size() - 1);
  for (const auto& b : balance) CHECK(b.relative_residual < 1e-5);
}

TEST_CASE("Taylor-Green enstrophy budget and energy ledger") {
  const Grid g(16);
  const nse::SolverConfig cfg{g, 1e-3, 0.2, 1.0};
  const auto part = lp::build_partition(g, lp::CutoffProfile::smooth());
  nse::SolverState s{0.0, taylor_green(g), 0};
  std::vector<nse::Diagnostic> history{nse::diagnose(s, part)};
  for (int i = 0; i < 20; ++i) {
    s = advance(s, cfg, 10);
    history.push_back(nse::diagnose(s, part));
  }
  for (const auto& d : history) CHECK(std::abs(d.nonlinear_I) < 1e-12 * d.holder_bound);
  for (const auto& b : nse::enstrophy_balance(history, 1.0)) CHECK(std::abs(b.residual) <= 1e-6 * b.dissipation);
  const auto ledger = nse::energy_ledger(history, history.front().report.l2, 1.0);
  CHECK(ledger.holds);
  CHECK(ledger.max_residual <= 1e-6 * std::pow(history.front().report.l2, 2));
  CHECK_THROWS_AS(nse::enstrophy_balance(std::span(history).first(1), 1.0), ParameterError);
}

TEST_CASE("time step limits and blow-up") {
  const Grid g(16);
  const auto u = taylor_green(g, 50.0);
  nse::SolverConfig cfg{g, 0.1};
  CHECK_THROWS_AS(nse::step({0.0, u, 0}, cfg), nse::StepRejectedError);

  auto bad = taylor_green(g);
  bad[0].mode(1, 1, 0) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  bad[0].mode(-1, -1, 0) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  try {
    nse::step({0.25, bad, 7}, nse::SolverConfig{g, 1e-3});
    FAIL("expected a blow-up");
  } catch (const nse::BlowUpError& e) {
    CHECK(e.last_good_state().t == 0.25);
    CHECK(e.last_good_state().step_count == 7);
  }
}
