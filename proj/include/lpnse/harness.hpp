#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lpnse/fields.hpp"
#include "lpnse/littlewood_paley.hpp"
#include "lpnse/norms.hpp"
#include "lpnse/solver.hpp"

namespace lpnse::harness {

enum class IcKind { taylor_green_2d3, random_spectrum, single_shell, abc_flow };

IcKind parse_ic_kind(const std::string& tag);
std::string to_string(IcKind kind);

/// Initial velocity recipe.
///
/// taylor_green_2d3  amplitude * (sin x1 cos x2, -cos x1 sin x2, 0)
/// abc_flow          amplitude * (sin x3 + cos x2, sin x1 + cos x3, sin x2 + cos x1)
/// random_spectrum   Gaussian modes with energy spectrum (k/k_p)^slope exp(-slope/2 (k/k_p)^2),
///                   restricted to the two-thirds band, scaled to max|u| = amplitude
/// single_shell      Gaussian modes on the lattice sphere |k| = peak_shell, scaled to max|u| = amplitude
struct InitialCondition {
  IcKind kind = IcKind::taylor_green_2d3;
  double amplitude = 1.0;
  double slope = 4.0;
  double peak_shell = 2.0;
  std::uint64_t seed = 0;
};

/// Divergence-free, mean-zero, real; bit-identical for equal inputs.
SpectralVectorField make_initial(const InitialCondition& ic, const Grid& grid);

/// Scalar corpus member: Gaussian coefficients with a seed-dependent cutoff
/// shell and power-law decay, mean and Nyquist modes removed.
SpectralField random_band_limited(const Grid& grid, std::uint64_t seed);

/// Same construction per component; not projected.
SpectralVectorField random_band_limited_vector(const Grid& grid, std::uint64_t seed);

using ExponentPair = std::pair<double, double>;  // (q, alpha)

/// The two instantiations used in the enstrophy estimate.
std::vector<ExponentPair> default_pairs();

struct PairEstimate {
  double q = 0.0;
  double alpha = 0.0;
  double max_ratio = 0.0;
  std::uint64_t argmax_seed = 0;
};

struct CorpusSpec {
  std::size_t size = 1000;
  std::size_t n = 32;
  std::string profile = "smooth";
  std::uint64_t first_seed = 0;
};

/// Empirical interpolation constant over a corpus.
///
/// c_hat is the largest ratio over all pairs; eps0_hat = 1 / c_hat. The chain
/// fields measure the collapsed estimate ||f||_{L^6} ||grad f||_{L^3} against
/// ||f||_{B^{-1}} ||lap f||_{L^2}: chain_max_ratio is its corpus maximum and
/// chain_gaps counts members where the product of the per-pair maxima does
/// not dominate it.
struct ConstantEstimate {
  double c_hat = 0.0;
  double eps0_hat = 0.0;
  std::vector<PairEstimate> pairs;
  CorpusSpec corpus;
  std::size_t skipped = 0;
  /// Ratios that came out NaN or infinite (counted per member and pair).
  std::size_t nonfinite = 0;
  double chain_max_ratio = 0.0;
  std::size_t chain_gaps = 0;
  /// Largest relative gap between the product of the two interpolation
  /// bounds and its collapsed form.
  double identity_max_defect = 0.0;

  double pair_max(double q, double alpha) const;
};

/// 1 / c, nudged by one ulp when that makes the product with c exactly 1.
double reciprocal(double c);

/// Sweep of check_interpolation over the seeded corpus. Work is split over
/// `threads` workers; the result does not depend on the thread count.
ConstantEstimate estimate_constant(const CorpusSpec& spec, std::span<const ExponentPair> pairs,
                                   unsigned threads = 1);

/// Same over explicit fields; seeds[i] labels fields[i]. Zero fields are
/// skipped and counted.
ConstantEstimate estimate_constant(std::span<const SpectralField> fields, std::span<const std::uint64_t> seeds,
                                   std::span<const ExponentPair> pairs, const lp::DyadicPartition& partition);

std::string to_json(const ConstantEstimate& estimate);
ConstantEstimate constant_from_json(const std::string& text);

struct ShellComparison {
  int j = 0;
  /// 2^(-2j) ||Delta_j grad u||_inf
  double gradient_term = 0.0;
  /// 2^(-j) ||Delta_j u||_inf
  double velocity_term = 0.0;
  std::optional<double> ratio;
};

/// Identities used when the two interpolation bounds are multiplied together.
struct ExponentAudit {
  double grad_h1 = 0.0;   // ||grad u||_{H^1}
  double h2 = 0.0;        // ||u||_{H^2}
  double lap_l2 = 0.0;    // ||lap u||_{L^2}, collocation
  std::optional<double> identity_ratio;  // grad_h1 / lap_l2
  double grad_besov_m2 = 0.0;
  double besov_m1 = 0.0;
  std::optional<double> besov_ratio;  // grad_besov_m2 / besov_m1
  std::vector<ShellComparison> shells;
};

ExponentAudit exponent_audit(const SpectralVectorField& u, const lp::DyadicPartition& partition);

/// One diagnostic time of a run.
struct RunSample {
  nse::Diagnostic diagnostic;
  double c_hat = 0.0;
  double margin = 0.0;
  /// ||grad u||_{B^{-2}} / ||u||_{B^{-1}}
  double audit_factor = 0.0;
  /// c61 * c32 * audit_factor^(1/3) * ||u||_{B^{-1}} * ||lap u||^2
  double chain_bound = 0.0;
  bool holder_ok = true;
  bool chain_ok = true;
};

struct VerdictRecord {
  double t = 0.0;
  double besov_m1_inf_inf = 0.0;
  double margin = 0.0;
  double grad_l2 = 0.0;
  bool grad_l2_nonincreasing = true;
};

struct CriterionVerdict {
  std::vector<VerdictRecord> records;
  bool always_small = true;
  bool enstrophy_monotone = true;
  /// grad_l2 did not grow over any interval with margin >= 0 at both ends.
  bool criterion_consistent = true;
  bool holder_ok = true;
  std::optional<double> first_violation_time;
};

struct RunRecord {
  std::string status = "ok";  // ok | blow_up | step_rejected
  std::string message;
  std::vector<RunSample> samples;
  std::vector<nse::EnstrophyInterval> enstrophy;
  nse::EnergyLedger energy;
  std::size_t chain_gaps = 0;
  double c_hat_final = 0.0;
  double c61 = 0.0;
  double c32 = 0.0;
  double serrin_p4_q6 = 0.0;
  double serrin_pinf_q3 = 0.0;
  std::optional<SpectralVectorField> initial;
  /// Last state reached (the last finite one after a blow-up).
  std::optional<SpectralVectorField> final_state;
  double t_final = 0.0;
  long steps = 0;
};

struct RunResult {
  CriterionVerdict verdict;
  RunRecord record;
};

/// Integrates from make_initial(ic), recording a diagnostic at t = 0, every
/// diag_every steps and at the end. Margins use c_hat; when a run field's
/// interpolation ratios exceed the estimate's per-pair maxima they are raised
/// (running maximum) and the margin follows.
RunResult run_experiment(const nse::SolverConfig& config, const InitialCondition& ic,
                         const ConstantEstimate& estimate, const lp::CutoffProfile& profile);

/// The diagnostics CSV of a run: NormReport columns, then
/// I, holder_bound, lhs_enstrophy, enstrophy_residual, energy_residual, c_hat, criterion_margin.
std::vector<std::string> diagnostics_columns();
std::vector<std::vector<double>> diagnostics_rows(const RunRecord& record);

struct PlanEntry {
  std::string name;
  nse::SolverConfig config;
  InitialCondition ic;
};

struct SummaryRow {
  std::string name;
  InitialCondition ic;
  nse::SolverConfig config;
  std::string status;
  long steps = 0;
  double t_final = 0.0;
  double c_hat_initial = 0.0;
  double c_hat_final = 0.0;
  double besov_initial = 0.0;
  double margin_initial = 0.0;
  CriterionVerdict verdict;
  double max_energy_residual = 0.0;
  double max_enstrophy_relative_residual = 0.0;
  double serrin_p4_q6 = 0.0;
  double serrin_pinf_q3 = 0.0;
  std::size_t chain_gaps = 0;
};

SummaryRow summarize(const std::string& name, const PlanEntry& entry, const RunResult& result);

/// Runs every entry (concurrently, up to `threads`) against the same starting
/// estimate; rows come back in plan order. A failing entry yields a row with
/// status "error" and the sweep continues.
std::vector<SummaryRow> sweep(std::span<const PlanEntry> plan, const ConstantEstimate& estimate,
                              const lp::CutoffProfile& profile, unsigned threads);

std::vector<std::string> summary_columns();
std::string summary_csv(std::span<const SummaryRow> rows);

/// Worker count from LPNSE_THREADS, else the hardware concurrency (at least 1).
unsigned worker_threads();

}  // namespace lpnse::harness
