#include "lpnse/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <thread>

#include <json.hpp>

#include "lpnse/csv.hpp"
#include "lpnse/errors.hpp"
#include "lpnse/spectral.hpp"

namespace lpnse::harness {

using norms::kInfinity;

std::vector<ExponentPair> default_pairs() { return {{6.0, 1.0}, {3.0, 2.0}}; }

double ConstantEstimate::pair_max(double q, double alpha) const {
  for (const auto& p : pairs)
    if (p.q == q && p.alpha == alpha) return p.max_ratio;
  return 0.0;
}

double reciprocal(double c) {
  double e = 1.0 / c;
  if (e * c == 1.0) return e;
  for (double candidate : {std::nextafter(e, 0.0), std::nextafter(e, kInfinity)})
    if (candidate * c == 1.0) return candidate;
  return e;
}

namespace {

struct MemberEvaluation {
  bool skipped = false;
  std::vector<double> ratios;
  // ||f||_{L^6} ||grad f||_{L^3}, ||f||_{B^{-1}} ||lap f||, and the two
  // forms of the product of interpolation bounds (without constants).
  double holder_pair = 0.0;
  double collapsed = 0.0;
  double bound_product = 0.0;
  double bound_collapsed = 0.0;
};

MemberEvaluation evaluate_member(const SpectralField& f, std::span<const ExponentPair> pairs,
                                 const lp::DyadicPartition& partition) {
  MemberEvaluation e;
  if (f.max_abs() == 0.0) {
    e.skipped = true;
    return e;
  }
  for (const auto& [q, alpha] : pairs) e.ratios.push_back(norms::check_interpolation(f, q, alpha, partition).ratio);

  const SpectralVectorField grad = gradient(f);
  const auto g = grad.components();
  const double l6 = norms::lp_norm(std::span<const SpectralField>(&f, 1), 6.0);
  const double grad_l3 = norms::lp_norm(g, 3.0);
  const double besov1 = norms::besov_norm(f, {-1.0, kInfinity, kInfinity}, partition);
  const double grad_besov2 = norms::besov_norm(g, {-2.0, kInfinity, kInfinity}, partition);
  const double h2 = norms::sobolev_norm(f, 2.0);
  const double grad_h1 = norms::sobolev_norm(g, 1.0);
  const double lap = norms::lp_norm(inverse_transform(laplacian(f)), 2.0);

  e.holder_pair = l6 * grad_l3;
  e.collapsed = besov1 * lap;
  e.bound_product = std::cbrt(h2) * std::pow(besov1, 2.0 / 3.0) * std::pow(grad_h1, 2.0 / 3.0) * std::cbrt(grad_besov2);
  e.bound_collapsed = lap * std::pow(besov1, 2.0 / 3.0) * std::cbrt(grad_besov2);
  return e;
}

ConstantEstimate reduce(std::span<const MemberEvaluation> evaluations, std::span<const std::uint64_t> seeds,
                        std::span<const ExponentPair> pairs) {
  ConstantEstimate est;
  for (const auto& [q, alpha] : pairs) est.pairs.push_back({q, alpha, 0.0, 0});
  for (std::size_t m = 0; m < evaluations.size(); ++m) {
    const auto& e = evaluations[m];
    if (e.skipped) {
      ++est.skipped;
      continue;
    }
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      if (!std::isfinite(e.ratios[p])) ++est.nonfinite;
      if (e.ratios[p] > est.pairs[p].max_ratio) {
        est.pairs[p].max_ratio = e.ratios[p];
        est.pairs[p].argmax_seed = seeds[m];
      }
    }
    if (e.collapsed > 0.0) est.chain_max_ratio = std::max(est.chain_max_ratio, e.holder_pair / e.collapsed);
    if (e.bound_collapsed > 0.0)
      est.identity_max_defect =
          std::max(est.identity_max_defect, std::abs(e.bound_product - e.bound_collapsed) / e.bound_collapsed);
  }
  for (const auto& p : est.pairs) est.c_hat = std::max(est.c_hat, p.max_ratio);
  if (!(est.c_hat > 0.0)) throw DegenerateInputError("estimate_constant: corpus has no usable member");
  est.eps0_hat = reciprocal(est.c_hat);

  const double c61 = est.pair_max(6.0, 1.0), c32 = est.pair_max(3.0, 2.0);
  if (c61 > 0.0 && c32 > 0.0) {
    for (const auto& e : evaluations)
      if (!e.skipped && e.holder_pair > c61 * c32 * e.bound_product * (1.0 + 1e-12)) ++est.chain_gaps;
  }
  return est;
}

template <class Job>
void parallel_for(std::size_t count, unsigned threads, Job&& job) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < threads; ++w)
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    });
  for (auto& t : workers) t.join();
}

}  // namespace

ConstantEstimate estimate_constant(std::span<const SpectralField> fields, std::span<const std::uint64_t> seeds,
                                   std::span<const ExponentPair> pairs, const lp::DyadicPartition& partition) {
  if (fields.empty()) throw ParameterError("estimate_constant: empty corpus");
  if (seeds.size() != fields.size()) throw ParameterError("estimate_constant: one seed label per field");
  std::vector<MemberEvaluation> evaluations;
  for (const auto& f : fields) {
    evaluations.push_back(evaluate_member(f, pairs, partition));
    if (evaluations.back().skipped) std::cerr << "warning: skipping zero corpus member\n";
  }
  ConstantEstimate est = reduce(evaluations, seeds, pairs);
  est.corpus = {fields.size(), fields.front().grid().n(), partition.profile().name,
                seeds.empty() ? 0 : seeds.front()};
  return est;
}

ConstantEstimate estimate_constant(const CorpusSpec& spec, std::span<const ExponentPair> pairs, unsigned threads) {
  if (spec.size == 0) throw ParameterError("estimate_constant: empty corpus");
  const Grid grid(spec.n);
  const auto partition = lp::build_partition(grid, lp::CutoffProfile::named(spec.profile));
  std::vector<MemberEvaluation> evaluations(spec.size);
  std::vector<std::uint64_t> seeds(spec.size);
  for (std::size_t m = 0; m < spec.size; ++m) seeds[m] = spec.first_seed + m;
  parallel_for(spec.size, threads, [&](std::size_t m) {
    evaluations[m] = evaluate_member(random_band_limited(grid, seeds[m]), pairs, partition);
  });
  ConstantEstimate est = reduce(evaluations, seeds, pairs);
  est.corpus = spec;
  return est;
}

std::string to_json(const ConstantEstimate& estimate) {
  nlohmann::ordered_json j;
  j["c_hat"] = estimate.c_hat;
  j["eps0_hat"] = estimate.eps0_hat;
  j["pairs"] = nlohmann::ordered_json::array();
  for (const auto& p : estimate.pairs)
    j["pairs"].push_back({{"q", p.q}, {"alpha", p.alpha}, {"max_ratio", p.max_ratio}, {"argmax_seed", p.argmax_seed}});
  std::vector<std::uint64_t> seeds;
  for (std::size_t m = 0; m < estimate.corpus.size; ++m) seeds.push_back(estimate.corpus.first_seed + m);
  j["corpus"] = {{"size", estimate.corpus.size},
                 {"n", estimate.corpus.n},
                 {"profile", estimate.corpus.profile},
                 {"seeds", seeds}};
  j["skipped"] = estimate.skipped;
  j["nonfinite"] = estimate.nonfinite;
  j["chain"] = {{"max_ratio", estimate.chain_max_ratio},
                {"gaps", estimate.chain_gaps},
                {"identity_max_defect", estimate.identity_max_defect}};
  return j.dump(2) + "\n";
}

ConstantEstimate constant_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    ConstantEstimate est;
    est.c_hat = j.at("c_hat").get<double>();
    est.eps0_hat = j.at("eps0_hat").get<double>();
    for (const auto& p : j.at("pairs"))
      est.pairs.push_back({p.at("q").get<double>(), p.at("alpha").get<double>(), p.at("max_ratio").get<double>(),
                           p.at("argmax_seed").get<std::uint64_t>()});
    const auto& c = j.at("corpus");
    est.corpus.size = c.at("size").get<std::size_t>();
    est.corpus.n = c.at("n").get<std::size_t>();
    est.corpus.profile = c.at("profile").get<std::string>();
    const auto& seeds = c.at("seeds");
    est.corpus.first_seed = seeds.empty() ? 0 : seeds.front().get<std::uint64_t>();
    if (j.contains("skipped")) est.skipped = j["skipped"].get<std::size_t>();
    if (j.contains("nonfinite")) est.nonfinite = j["nonfinite"].get<std::size_t>();
    if (j.contains("chain")) {
      est.chain_max_ratio = j["chain"].value("max_ratio", 0.0);
      est.chain_gaps = j["chain"].value("gaps", std::size_t{0});
      est.identity_max_defect = j["chain"].value("identity_max_defect", 0.0);
    }
    if (!(est.c_hat > 0.0)) throw IoError("constant estimate must have c_hat > 0");
    return est;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed constant estimate: ") + e.what());
  }
}

ExponentAudit exponent_audit(const SpectralVectorField& u, const lp::DyadicPartition& partition) {
  ExponentAudit a;
  const auto grad = velocity_gradient(u);
  const std::span<const SpectralField> g(grad);
  const auto components = u.components();
  a.grad_h1 = norms::sobolev_norm(g, 1.0);
  a.h2 = norms::sobolev_norm(components, 2.0);
  const PhysicalVectorField lap = inverse_transform(laplacian(u));
  a.lap_l2 = norms::lp_norm(std::span<const PhysicalField>(lap), 2.0);
  if (a.lap_l2 > 0.0) a.identity_ratio = a.grad_h1 / a.lap_l2;

  const auto velocity_blocks = norms::block_lp_norms(components, kInfinity, partition);
  const auto gradient_blocks = norms::block_lp_norms(g, kInfinity, partition);
  a.besov_m1 = norms::combine_blocks(velocity_blocks, partition.j_min(), -1.0, kInfinity);
  a.grad_besov_m2 = norms::combine_blocks(gradient_blocks, partition.j_min(), -2.0, kInfinity);
  if (a.besov_m1 > 0.0) a.besov_ratio = a.grad_besov_m2 / a.besov_m1;

  double largest = 0.0;
  for (std::size_t b = 0; b < velocity_blocks.size(); ++b) {
    const int j = partition.j_min() + static_cast<int>(b);
    ShellComparison s;
    s.j = j;
    s.gradient_term = std::exp2(-2.0 * j) * gradient_blocks[b];
    s.velocity_term = std::exp2(-1.0 * j) * velocity_blocks[b];
    largest = std::max(largest, s.velocity_term);
    a.shells.push_back(s);
  }
  // Shells holding only rounding noise report no ratio.
  for (auto& s : a.shells)
    if (largest > 0.0 && s.velocity_term > 1e-13 * largest) s.ratio = s.gradient_term / s.velocity_term;
  return a;
}

namespace {

double enstrophy_of(const SpectralVectorField& u) {
  const Grid& grid = u.grid();
  double sum = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double k = grid.wavenumber_norm(i);
    sum += k * k * (std::norm(u[0][i]) + std::norm(u[1][i]) + std::norm(u[2][i]));
  }
  return grid.volume() * sum;
}

constexpr double kBlowUpFactor = 1e8;
constexpr double kMonotoneSlack = 1e-9;
constexpr double kHolderSlack = 1e-9;
constexpr double kChainSlack = 1e-6;

}  // namespace

RunResult run_experiment(const nse::SolverConfig& config, const InitialCondition& ic,
                         const ConstantEstimate& estimate, const lp::CutoffProfile& profile) {
  config.validate();
  if (!(estimate.c_hat > 0.0)) throw ParameterError("run_experiment needs c_hat > 0");
  const auto partition = lp::build_partition(config.grid, profile);

  RunResult result;
  RunRecord& rec = result.record;
  double c_hat = estimate.c_hat;
  double c61 = estimate.pair_max(6.0, 1.0);
  double c32 = estimate.pair_max(3.0, 2.0);

  auto sample = [&](const nse::SolverState& state) {
    RunSample s;
    s.diagnostic = nse::diagnose(state, partition);
    const auto& report = s.diagnostic.report;
    const double besov = report.besov_m1_inf_inf;
    const auto grad = velocity_gradient(state.u);
    const std::span<const SpectralField> g(grad);
    const double grad_besov = norms::besov_norm(g, {-2.0, kInfinity, kInfinity}, partition);
    s.audit_factor = besov > 0.0 ? grad_besov / besov : 0.0;
    s.holder_ok = std::abs(s.diagnostic.nonlinear_I) <= s.diagnostic.holder_bound * (1.0 + kHolderSlack);
    s.chain_bound = c61 * c32 * std::cbrt(s.audit_factor) * besov * report.lap_l2 * report.lap_l2;
    s.chain_ok = s.diagnostic.holder_bound <= s.chain_bound * (1.0 + kChainSlack);
    if (!s.chain_ok && besov > 0.0) {
      // The field is outside what the corpus covers: fold it in.
      ++rec.chain_gaps;
      const double r61 = norms::check_interpolation(state.u.components(), 6.0, 1.0, partition).ratio;
      const double r32 = norms::check_interpolation(g, 3.0, 2.0, partition).ratio;
      c61 = std::max(c61, r61);
      c32 = std::max(c32, r32);
      c_hat = std::max({c_hat, r61, r32});
      s.chain_bound = c61 * c32 * std::cbrt(s.audit_factor) * besov * report.lap_l2 * report.lap_l2;
    }
    s.c_hat = c_hat;
    s.margin = 1.0 - c_hat * besov;
    rec.samples.push_back(std::move(s));
  };

  nse::SolverState state{0.0, make_initial(ic, config.grid), 0};
  rec.initial = state.u;
  const long total_steps = std::max<long>(1, static_cast<long>(std::ceil(config.t_end / config.dt - 1e-9)));
  const double enstrophy0 = enstrophy_of(state.u);
  sample(state);
  std::optional<double> blow_up_time;
  try {
    for (long s = 1; s <= total_steps; ++s) {
      nse::SolverState next = nse::step(state, config);
      if (enstrophy0 > 0.0 && enstrophy_of(next.u) > kBlowUpFactor * enstrophy0)
        throw nse::BlowUpError("enstrophy exceeded 1e8 times its initial value", state);
      state = std::move(next);
      if (s % config.diag_every == 0 || s == total_steps) sample(state);
    }
  } catch (const nse::BlowUpError& e) {
    rec.status = "blow_up";
    rec.message = e.what();
    state = e.last_good_state();
    blow_up_time = state.t + config.dt;
  } catch (const nse::StepRejectedError& e) {
    rec.status = "step_rejected";
    rec.message = e.what();
  }
  rec.final_state = state.u;
  rec.t_final = state.t;
  rec.steps = state.step_count;
  rec.c_hat_final = c_hat;
  rec.c61 = c61;
  rec.c32 = c32;

  std::vector<nse::Diagnostic> history;
  std::vector<norms::NormReport> reports;
  for (const auto& s : rec.samples) {
    history.push_back(s.diagnostic);
    reports.push_back(s.diagnostic.report);
  }
  if (history.size() >= 2) rec.enstrophy = nse::enstrophy_balance(history, config.viscosity);
  rec.energy = nse::energy_ledger(history, history.front().report.l2, config.viscosity);
  rec.serrin_p4_q6 = norms::serrin_quantity(reports, 4.0, 6.0);
  rec.serrin_pinf_q3 = norms::serrin_quantity(reports, kInfinity, 3.0);

  CriterionVerdict& v = result.verdict;
  double grad_max = 0.0;
  for (const auto& s : rec.samples) grad_max = std::max(grad_max, s.diagnostic.report.grad_l2);
  for (std::size_t i = 0; i < rec.samples.size(); ++i) {
    const auto& s = rec.samples[i];
    VerdictRecord r;
    r.t = s.diagnostic.report.time;
    r.besov_m1_inf_inf = s.diagnostic.report.besov_m1_inf_inf;
    r.margin = s.margin;
    r.grad_l2 = s.diagnostic.report.grad_l2;
    if (i > 0) {
      const auto& prev = rec.samples[i - 1];
      const double g0 = prev.diagnostic.report.grad_l2;
      r.grad_l2_nonincreasing = r.grad_l2 <= g0 + kMonotoneSlack * grad_max;
      if (prev.margin >= 0.0 && s.margin >= 0.0 && r.grad_l2 > g0 * (1.0 + kMonotoneSlack))
        v.criterion_consistent = false;
    }
    v.enstrophy_monotone = v.enstrophy_monotone && r.grad_l2_nonincreasing;
    v.always_small = v.always_small && s.margin >= 0.0;
    v.holder_ok = v.holder_ok && s.holder_ok;
    if (s.margin < 0.0 && !v.first_violation_time) v.first_violation_time = r.t;
    v.records.push_back(r);
  }
  if (blow_up_time && (!v.first_violation_time || *blow_up_time < *v.first_violation_time))
    v.first_violation_time = blow_up_time;
  return result;
}

std::vector<std::string> diagnostics_columns() {
  auto columns = norms::norm_report_columns();
  for (const char* c : {"I", "holder_bound", "lhs_enstrophy", "enstrophy_residual", "energy_residual", "c_hat",
                        "criterion_margin"})
    columns.push_back(c);
  return columns;
}

std::vector<std::vector<double>> diagnostics_rows(const RunRecord& record) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < record.samples.size(); ++i) {
    const auto& s = record.samples[i];
    auto row = norms::norm_report_values(s.diagnostic.report);
    row.push_back(s.diagnostic.nonlinear_I);
    row.push_back(s.diagnostic.holder_bound);
    // Interval quantities belong to the row that closes the interval.
    const bool has_interval = i > 0 && i - 1 < record.enstrophy.size();
    row.push_back(has_interval ? record.enstrophy[i - 1].lhs : std::nan(""));
    row.push_back(has_interval ? record.enstrophy[i - 1].residual : std::nan(""));
    row.push_back(i < record.energy.entries.size() ? record.energy.entries[i].residual : std::nan(""));
    row.push_back(s.c_hat);
    row.push_back(s.margin);
    rows.push_back(std::move(row));
  }
  return rows;
}

SummaryRow summarize(const std::string& name, const PlanEntry& entry, const RunResult& result) {
  SummaryRow row;
  row.name = name;
  row.ic = entry.ic;
  row.config = entry.config;
  const auto& rec = result.record;
  row.status = rec.status;
  row.steps = rec.steps;
  row.t_final = rec.t_final;
  if (!rec.samples.empty()) {
    row.c_hat_initial = rec.samples.front().c_hat;
    row.besov_initial = rec.samples.front().diagnostic.report.besov_m1_inf_inf;
    row.margin_initial = rec.samples.front().margin;
  }
  row.c_hat_final = rec.c_hat_final;
  row.verdict = result.verdict;
  row.max_energy_residual = rec.energy.max_residual;
  for (const auto& e : rec.enstrophy)
    row.max_enstrophy_relative_residual = std::max(row.max_enstrophy_relative_residual, e.relative_residual);
  row.serrin_p4_q6 = rec.serrin_p4_q6;
  row.serrin_pinf_q3 = rec.serrin_pinf_q3;
  row.chain_gaps = rec.chain_gaps;
  return row;
}

std::vector<SummaryRow> sweep(std::span<const PlanEntry> plan, const ConstantEstimate& estimate,
                              const lp::CutoffProfile& profile, unsigned threads) {
  if (plan.empty()) throw ParameterError("sweep: empty plan");
  std::vector<SummaryRow> rows(plan.size());
  parallel_for(plan.size(), threads, [&](std::size_t i) {
    const auto& entry = plan[i];
    try {
      rows[i] = summarize(entry.name, entry, run_experiment(entry.config, entry.ic, estimate, profile));
    } catch (const std::exception& e) {
      SummaryRow failed;
      failed.name = entry.name;
      failed.ic = entry.ic;
      failed.config = entry.config;
      failed.status = "error";
      rows[i] = failed;
      std::cerr << "sweep: " << entry.name << " failed: " << e.what() << "\n";
    }
  });
  return rows;
}

std::vector<std::string> summary_columns() {
  return {"run",           "initial_condition",
          "amplitude",     "seed",
          "n",             "dt",
          "t_end",         "viscosity",
          "status",        "steps",
          "t_final",       "c_hat_initial",
          "c_hat_final",   "besov_initial",
          "margin_initial", "always_small",
          "enstrophy_monotone", "criterion_consistent",
          "holder_ok",     "first_violation_time",
          "max_energy_residual", "max_enstrophy_relative_residual",
          "serrin_p4_q6",  "serrin_pinf_q3",
          "chain_gaps"};
}

std::string summary_csv(std::span<const SummaryRow> rows) {
  using io::format_double;
  std::string out = io::csv_line(summary_columns());
  for (const auto& r : rows) {
    const auto& v = r.verdict;
    out += io::csv_line({r.name,
                         to_string(r.ic.kind),
                         format_double(r.ic.amplitude),
                         std::to_string(r.ic.seed),
                         std::to_string(r.config.grid.n()),
                         format_double(r.config.dt),
                         format_double(r.config.t_end),
                         format_double(r.config.viscosity),
                         r.status,
                         std::to_string(r.steps),
                         format_double(r.t_final),
                         format_double(r.c_hat_initial),
                         format_double(r.c_hat_final),
                         format_double(r.besov_initial),
                         format_double(r.margin_initial),
                         v.always_small ? "1" : "0",
                         v.enstrophy_monotone ? "1" : "0",
                         v.criterion_consistent ? "1" : "0",
                         v.holder_ok ? "1" : "0",
                         format_double(v.first_violation_time ? *v.first_violation_time : std::nan("")),
                         format_double(r.max_energy_residual),
                         format_double(r.max_enstrophy_relative_residual),
                         format_double(r.serrin_p4_q6),
                         format_double(r.serrin_pinf_q3),
                         std::to_string(r.chain_gaps)});
  }
  return out;
}

unsigned worker_threads() {
  if (const char* env = std::getenv("LPNSE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace lpnse::harness
