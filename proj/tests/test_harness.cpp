#include <doctest.h>

#include <cmath>
#include <vector>

#include "lpnse/errors.hpp"
#include "lpnse/harness.hpp"
#include "lpnse/norms.hpp"
#include "lpnse/spectral.hpp"
#include "support.hpp"

using namespace lpnse;
using harness::IcKind;
using lpnse::testing::kPi;
using lpnse::testing::max_abs_diff;

namespace {

harness::InitialCondition ic_of(IcKind kind, double amplitude, std::uint64_t seed = 0) {
  harness::InitialCondition ic;
  ic.kind = kind;
  ic.amplitude = amplitude;
  ic.seed = seed;
  return ic;
}

harness::ConstantEstimate small_estimate(std::size_t n = 16) {
  harness::CorpusSpec spec;
  spec.size = 24;
  spec.n = n;
  const auto pairs = harness::default_pairs();
  return harness::estimate_constant(spec, pairs, 1);
}

}  // namespace

TEST_CASE("initial conditions") {
  const Grid g(16);
  SUBCASE("Taylor-Green closed form") {
    const auto u = inverse_transform(harness::make_initial(ic_of(IcKind::taylor_green_2d3, 1.5), g));
    CHECK(max_abs_diff(u[0], PhysicalField::sample(g, [](double x, double y, double) {
                         return 1.5 * std::sin(x) * std::cos(y);
                       })) < 1e-15);
    CHECK(max_abs_diff(u[1], PhysicalField::sample(g, [](double x, double y, double) {
                         return -1.5 * std::cos(x) * std::sin(y);
                       })) < 1e-15);
    CHECK(u[2].values()[0] == 0.0);
  }
  SUBCASE("every kind is real, mean-zero and divergence-free") {
    for (auto kind : {IcKind::taylor_green_2d3, IcKind::random_spectrum, IcKind::single_shell, IcKind::abc_flow}) {
      const auto u = harness::make_initial(ic_of(kind, 0.8, 5), g);
      CHECK(divergence_defect(u) <= 1e-10);
      for (int c = 0; c < 3; ++c) {
        CHECK(u[c][0] == Complex{});
        CHECK(u[c].hermitian_defect() == 0.0);
      }
      // ABC peaks at sqrt(6) times its amplitude; the others are normalized to it.
      const double peak = kind == IcKind::abc_flow ? 0.8 * std::sqrt(6.0) : 0.8;
      CHECK(norms::lp_norm(u.components(), norms::kInfinity) == doctest::Approx(peak).epsilon(1e-12));
    }
  }
  SUBCASE("determinism and seed dependence") {
    const auto a = harness::make_initial(ic_of(IcKind::random_spectrum, 1.0, 42), g);
    const auto b = harness::make_initial(ic_of(IcKind::random_spectrum, 1.0, 42), g);
    const auto c = harness::make_initial(ic_of(IcKind::random_spectrum, 1.0, 43), g);
    for (int k = 0; k < 3; ++k) CHECK(max_abs_diff(a[k], b[k]) == 0.0);
    CHECK(max_abs_diff(a[0], c[0]) > 0.0);
  }
  SUBCASE("zero amplitude") {
    CHECK(harness::make_initial(ic_of(IcKind::single_shell, 0.0), g).max_abs() == 0.0);
  }
  SUBCASE("bad parameters") {
    CHECK_THROWS_AS(harness::parse_ic_kind("vortex_ring"), ParameterError);
    auto ic = ic_of(IcKind::single_shell, 1.0);
    ic.peak_shell = 2.5;
    CHECK_THROWS_AS(harness::make_initial(ic, g), ParameterError);
    ic.peak_shell = 8.0;
    CHECK_THROWS_AS(harness::make_initial(ic, g), ParameterError);
  }
}

TEST_CASE("single shell Besov norm equals the direct block value") {
  const Grid g(32);
  const auto part = lp::build_partition(g, lp::CutoffProfile::box());
  auto ic = ic_of(IcKind::single_shell, 0.6, 2);
  ic.peak_shell = 4.0;
  const auto u = harness::make_initial(ic, g);
  // Every mode has |k| = 4, so the whole field sits in the block j = 2.
  const auto block = lp::band_pass(u, 2, part);
  const double direct = 0.25 * norms::lp_norm(block.components(), norms::kInfinity);
  const double besov = norms::besov_norm(u.components(), {}, part);
  CHECK(besov == doctest::Approx(direct).epsilon(1e-14));
  CHECK(besov == doctest::Approx(0.6 * 0.25).epsilon(1e-13));
}

TEST_CASE("constant estimate over explicit fields") {
  const Grid g(32);
  const auto part = lp::build_partition(g, lp::CutoffProfile::box());
  const auto cos1 = transform(PhysicalField::sample(g, [](double x, double, double) { return std::cos(x); }));
  const std::vector<harness::ExponentPair> pair{{6.0, 1.0}};
  const std::vector<std::uint64_t> seed{7};
  const auto est = harness::estimate_constant(std::span(&cos1, 1), seed, pair, part);
  const double expected = norms::check_interpolation(cos1, 6.0, 1.0, part).ratio;
  CHECK(est.c_hat == expected);
  CHECK(est.pairs.front().argmax_seed == 7);
  CHECK(est.c_hat * est.eps0_hat == 1.0);

  // Scaling every member leaves the constant unchanged; zero members are skipped.
  std::vector<SpectralField> fields{harness::random_band_limited(g, 1), harness::random_band_limited(g, 2),
                                    SpectralField(g)};
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  const auto pairs = harness::default_pairs();
  const auto base = harness::estimate_constant(fields, seeds, pairs, part);
  CHECK(base.skipped == 1);
  for (auto& f : fields) f *= 3.0;
  const auto scaled = harness::estimate_constant(fields, seeds, pairs, part);
  CHECK(scaled.c_hat == doctest::Approx(base.c_hat).epsilon(1e-13));
  CHECK(base.identity_max_defect < 1e-12);
  CHECK_THROWS_AS(harness::estimate_constant(std::span(fields).last(1), std::span(seeds).last(1), pairs, part),
                  DegenerateInputError);
}

TEST_CASE("corpus estimate is independent of thread count and round-trips through JSON") {
  harness::CorpusSpec spec;
  spec.size = 12;
  spec.n = 16;
  const auto pairs = harness::default_pairs();
  const auto one = harness::estimate_constant(spec, pairs, 1);
  const auto three = harness::estimate_constant(spec, pairs, 3);
  CHECK(harness::to_json(one) == harness::to_json(three));
  CHECK(one.c_hat > 0.0);
  CHECK(one.c_hat * one.eps0_hat == 1.0);
  CHECK(one.pairs.size() == 2);
  const auto back = harness::constant_from_json(harness::to_json(one));
  CHECK(back.c_hat == one.c_hat);
  CHECK(back.pair_max(3.0, 2.0) == one.pair_max(3.0, 2.0));
  CHECK(harness::to_json(back) == harness::to_json(one));
  CHECK_THROWS_AS(harness::constant_from_json("{\"c_hat\": 1}"), IoError);
}

TEST_CASE("reciprocal") {
  for (double c : {0.9143769988984914, 3.0, 49.0, 1.0 / 3.0, 7.123456789}) {
    const double e = harness::reciprocal(c);
    CHECK(std::abs(e * c - 1.0) <= 2.3e-16);
  }
}

TEST_CASE("exponent audit") {
  const Grid g(32);
  const auto box = lp::build_partition(g, lp::CutoffProfile::box());
  for (int J = 1; J <= 3; ++J) {
    auto ic = ic_of(IcKind::single_shell, 1.0, J);
    ic.peak_shell = std::ldexp(1.0, J);
    const auto a = harness::exponent_audit(harness::make_initial(ic, g), box);
    REQUIRE(a.identity_ratio);
    CHECK(std::abs(*a.identity_ratio - 1.0) <= 1e-12);
    CHECK(a.h2 == doctest::Approx(a.grad_h1).epsilon(1e-13));
    int with_ratio = 0;
    for (const auto& s : a.shells)
      if (s.ratio) {
        ++with_ratio;
        CHECK(s.j == J);
        CHECK(*s.ratio >= 0.5);
        CHECK(*s.ratio <= 2.0);
      }
    CHECK(with_ratio == 1);
  }
  const auto zero = harness::exponent_audit(SpectralVectorField(g), box);
  CHECK_FALSE(zero.identity_ratio);
  CHECK_FALSE(zero.besov_ratio);
  for (const auto& s : zero.shells) CHECK_FALSE(s.ratio);
}

TEST_CASE("Taylor-Green run verdict") {
  const auto est = small_estimate();
  const nse::SolverConfig cfg{Grid(16), 1e-3, 0.3, 1.0};
  const auto r = harness::run_experiment(cfg, ic_of(IcKind::taylor_green_2d3, 1.0), est, lp::CutoffProfile::smooth());
  CHECK(r.record.status == "ok");
  CHECK(r.record.steps == 300);
  CHECK(r.record.samples.size() == 31);
  CHECK(r.verdict.enstrophy_monotone);
  CHECK(r.verdict.criterion_consistent);
  CHECK(r.verdict.holder_ok);
  CHECK(r.record.energy.holds);
  const double b0 = r.verdict.records.front().besov_m1_inf_inf;
  for (std::size_t i = 1; i < r.verdict.records.size(); ++i) {
    const auto& rec = r.verdict.records[i];
    CHECK(rec.grad_l2 < r.verdict.records[i - 1].grad_l2);
    CHECK(rec.besov_m1_inf_inf == doctest::Approx(b0 * std::exp(-2 * rec.t)).epsilon(1e-10));
  }
  CHECK(r.verdict.records.back().margin > r.verdict.records.front().margin);

  const auto rows = harness::diagnostics_rows(r.record);
  CHECK(rows.size() == r.record.samples.size());
  CHECK(rows.front().size() == harness::diagnostics_columns().size());
}

TEST_CASE("small single-shell run stays monotone") {
  const auto est = small_estimate();
  const Grid g(16);
  auto ic = ic_of(IcKind::single_shell, 1.0, 9);
  ic.peak_shell = 3.0;
  const auto part = lp::build_partition(g, lp::CutoffProfile::smooth());
  const double unit = norms::besov_norm(harness::make_initial(ic, g).components(), {}, part);
  ic.amplitude = 0.5 / (est.c_hat * unit);
  const nse::SolverConfig cfg{g, 2e-3, 0.2, 1.0, nse::Dealias::two_thirds, 5};
  const auto r = harness::run_experiment(cfg, ic, est, lp::CutoffProfile::smooth());
  CHECK(r.record.samples.front().margin == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.verdict.always_small);
  CHECK(r.verdict.enstrophy_monotone);
  CHECK(r.verdict.criterion_consistent);
  CHECK_FALSE(r.verdict.first_violation_time);
}

TEST_CASE("zero amplitude gives the trivial verdict") {
  const auto est = small_estimate();
  const nse::SolverConfig cfg{Grid(16), 1e-2, 0.1, 1.0, nse::Dealias::two_thirds, 2};
  const auto r = harness::run_experiment(cfg, ic_of(IcKind::random_spectrum, 0.0), est, lp::CutoffProfile::smooth());
  CHECK(r.record.status == "ok");
  CHECK(r.verdict.always_small);
  CHECK(r.verdict.enstrophy_monotone);
  CHECK(r.verdict.criterion_consistent);
  CHECK(r.record.serrin_p4_q6 == 0.0);
}

TEST_CASE("rejected step keeps the partial record") {
  const auto est = small_estimate();
  const nse::SolverConfig cfg{Grid(16), 0.5, 1.0, 1.0};
  const auto r = harness::run_experiment(cfg, ic_of(IcKind::abc_flow, 5.0), est, lp::CutoffProfile::smooth());
  CHECK(r.record.status == "step_rejected");
  CHECK(r.record.samples.size() == 1);
  CHECK(r.record.final_state);
}

TEST_CASE("sweep") {
  const auto est = small_estimate();
  const nse::SolverConfig cfg{Grid(16), 2e-3, 0.04, 1.0, nse::Dealias::two_thirds, 5};
  std::vector<harness::PlanEntry> plan{{"tg", cfg, ic_of(IcKind::taylor_green_2d3, 1.0)},
                                       {"rs", cfg, ic_of(IcKind::random_spectrum, 1.0, 4)},
                                       {"abc", cfg, ic_of(IcKind::abc_flow, 0.5)}};
  const auto profile = lp::CutoffProfile::smooth();
  const auto rows = harness::sweep(plan, est, profile, 1);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].name == "rs");

  // A plan of one reproduces the single-run verdict.
  const auto single = harness::run_experiment(cfg, plan[0].ic, est, profile);
  const auto alone = harness::sweep(std::span(plan).first(1), est, profile, 1);
  CHECK(alone.front().verdict.enstrophy_monotone == single.verdict.enstrophy_monotone);
  CHECK(alone.front().besov_initial == single.verdict.records.front().besov_m1_inf_inf);
  CHECK(alone.front().serrin_p4_q6 == single.record.serrin_p4_q6);

  // Thread count does not change the table.
  CHECK(harness::summary_csv(rows) == harness::summary_csv(harness::sweep(plan, est, profile, 3)));

  // A failing entry becomes an error row.
  plan.push_back({"bad", nse::SolverConfig{Grid(16), -1.0}, plan[0].ic});
  const auto with_error = harness::sweep(plan, est, profile, 2);
  CHECK(with_error.back().status == "error");
  CHECK(with_error.front().status == "ok");
  CHECK_THROWS_AS(harness::sweep(std::span<const harness::PlanEntry>(), est, profile, 1), ParameterError);
}
