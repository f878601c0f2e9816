// lpnse: command-line front end.
//
// Exit codes: 0 all asserted invariants held, 1 an invariant failed or a run
// did not finish, 2 bad input (config, plan, snapshot, I/O).

#include <cmath>
#include <cstdint>
#include <cstring>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lpnse/config.hpp"
#include "lpnse/csv.hpp"
#include "lpnse/errors.hpp"
#include "lpnse/harness.hpp"
#include "lpnse/littlewood_paley.hpp"
#include "lpnse/norms.hpp"
#include "lpnse/snapshot.hpp"
#include "lpnse/spectral.hpp"

using namespace lpnse;
using nlohmann::ordered_json;

namespace {

double json_number(double v) { return std::isfinite(v) ? v : std::nan(""); }

ordered_json report_json(const norms::NormReport& r) {
  ordered_json j;
  const auto columns = norms::norm_report_columns();
  const auto values = norms::norm_report_values(r);
  for (std::size_t i = 0; i < columns.size(); ++i) j[columns[i]] = json_number(values[i]);
  return j;
}

ordered_json verdict_json(const harness::RunResult& result) {
  const auto& v = result.verdict;
  const auto& rec = result.record;
  ordered_json j;
  j["status"] = rec.status;
  if (!rec.message.empty()) j["message"] = rec.message;
  j["steps"] = rec.steps;
  j["t_final"] = rec.t_final;
  j["always_small"] = v.always_small;
  j["enstrophy_monotone"] = v.enstrophy_monotone;
  j["criterion_consistent"] = v.criterion_consistent;
  j["holder_ok"] = v.holder_ok;
  j["first_violation_time"] = v.first_violation_time ? ordered_json(*v.first_violation_time) : ordered_json();
  j["energy_inequality_holds"] = rec.energy.holds;
  j["max_energy_residual"] = rec.energy.max_residual;
  j["chain_gaps"] = rec.chain_gaps;
  j["c_hat_final"] = rec.c_hat_final;
  j["eps0_hat_final"] = harness::reciprocal(rec.c_hat_final);
  j["serrin_p4_q6"] = rec.serrin_p4_q6;
  j["serrin_pinf_q3"] = rec.serrin_pinf_q3;
  return j;
}

bool is_snapshot(const std::string& bytes) {
  return bytes.size() >= 6 && std::memcmp(bytes.data(), io::kSnapshotMagic, 6) == 0;
}

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed, bool force,
                 const std::string& out, unsigned threads) {
  std::map<std::string, std::string> overrides;
  if (seed) overrides["ic.seed"] = std::to_string(*seed);
  if (!out.empty()) overrides["output.dir"] = out;
  auto cfg = io::parse_config(config_path, overrides);
  if (!out.empty()) cfg.options.output_dir = out;
  cfg.options.force = cfg.options.force || force;

  io::RunManifest manifest;
  manifest.config_hash = io::config_hash(cfg);
  manifest.start_time = io::utc_timestamp();
  manifest.seeds = {cfg.ic.seed};

  const auto estimate = io::resolve_estimate(cfg, threads);
  const auto profile = lp::CutoffProfile::named(cfg.options.profile);
  const auto result = harness::run_experiment(cfg.solver, cfg.ic, estimate, profile);
  manifest.end_time = io::utc_timestamp();

  std::vector<std::pair<std::string, std::string>> extras;
  extras.emplace_back("config.txt", io::canonical_form(cfg));
  extras.emplace_back("constant.json", harness::to_json(estimate));
  extras.emplace_back("verdict.json", verdict_json(result).dump(2) + "\n");
  if (cfg.options.snapshots) {
    if (result.record.initial) {
      const auto phys = inverse_transform(*result.record.initial);
      extras.emplace_back("u_initial.bin", io::encode_snapshot(phys));
    }
    if (result.record.final_state) {
      const auto phys = inverse_transform(*result.record.final_state);
      extras.emplace_back("u_final.bin", io::encode_snapshot(phys));
    }
  }
  io::write_run_dir(cfg.options.output_dir, manifest, harness::diagnostics_columns(),
                    harness::diagnostics_rows(result.record), extras, cfg.options.force);

  const auto j = verdict_json(result);
  std::cout << j.dump(2) << "\n";
  const auto& v = result.verdict;
  const bool ok = result.record.status == "ok" && v.holder_ok && v.criterion_consistent && result.record.energy.holds;
  return ok ? 0 : 1;
}

int cmd_norms(const std::string& path, const std::string& profile_name) {
  const std::string bytes = io::read_file(path);
  if (is_snapshot(bytes)) {
    const auto snap = io::decode_snapshot(bytes);
    const auto u = io::to_vector_field(snap);
    const auto partition = lp::build_partition(u.grid(), lp::CutoffProfile::named(profile_name));
    ordered_json j = report_json(norms::make_norm_report(u, 0.0, partition));
    j["divergence_defect"] = divergence_defect(u);
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  // Otherwise a diagnostics CSV: reload the series and integrate it.
  const auto reports = io::read_norm_reports(path);
  ordered_json j;
  j["samples"] = reports.size();
  if (!reports.empty()) {
    j["first"] = report_json(reports.front());
    j["last"] = report_json(reports.back());
    j["serrin_p4_q6"] = norms::serrin_quantity(reports, 4.0, 6.0);
    j["serrin_pinf_q3"] = norms::serrin_quantity(reports, norms::kInfinity, 3.0);
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_check_interp(const harness::CorpusSpec& spec, const std::string& out, unsigned threads) {
  const auto pairs = harness::default_pairs();
  const auto est = harness::estimate_constant(spec, pairs, threads);
  const std::string text = harness::to_json(est);
  if (out.empty())
    std::cout << text;
  else
    io::write_file(out, text);
  bool ok = est.c_hat > 0.0 && std::isfinite(est.c_hat) && est.c_hat * est.eps0_hat == 1.0 && est.nonfinite == 0;
  for (const auto& p : est.pairs) ok = ok && std::isfinite(p.max_ratio) && p.max_ratio > 0.0;
  if (est.skipped) std::cerr << "check-interp: skipped " << est.skipped << " degenerate member(s)\n";
  std::cerr << "c_hat = " << io::format_double(est.c_hat) << ", eps0_hat = " << io::format_double(est.eps0_hat)
            << "\n";
  return ok ? 0 : 1;
}

int cmd_audit(const std::string& path, const std::string& profile_name) {
  const auto u = io::to_vector_field(io::read_snapshot(path));
  const auto partition = lp::build_partition(u.grid(), lp::CutoffProfile::named(profile_name));
  const auto a = harness::exponent_audit(u, partition);
  auto opt = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(); };
  ordered_json j;
  j["grad_h1"] = a.grad_h1;
  j["h2"] = a.h2;
  j["lap_l2"] = a.lap_l2;
  j["identity_ratio"] = opt(a.identity_ratio);
  j["grad_besov_m2"] = a.grad_besov_m2;
  j["besov_m1"] = a.besov_m1;
  j["besov_ratio"] = opt(a.besov_ratio);
  j["shells"] = ordered_json::array();
  for (const auto& s : a.shells)
    j["shells"].push_back({{"j", s.j}, {"gradient_term", s.gradient_term}, {"velocity_term", s.velocity_term},
                           {"ratio", opt(s.ratio)}});
  std::cout << j.dump(2) << "\n";
  // The H^1/L^2 identity is exact for fields without Nyquist content.
  const bool ok = !a.identity_ratio || std::abs(*a.identity_ratio - 1.0) <= 1e-10;
  if (!ok) std::cerr << "audit: identity ratio deviates from 1\n";
  return ok ? 0 : 1;
}

int cmd_sweep(const std::string& plan_path, const std::string& out, std::optional<double> c_hat,
              const std::string& constant_file, unsigned threads) {
  std::vector<io::RunConfig> configs;
  const auto plan = io::parse_plan(plan_path, &configs);
  auto base = configs.front();
  if (c_hat) {
    base.options.c_hat = c_hat;
  } else if (!constant_file.empty()) {
    base.options.c_hat.reset();
    base.options.constant_file = constant_file;
  }
  const auto estimate = io::resolve_estimate(base, threads);
  const auto profile = lp::CutoffProfile::named(base.options.profile);
  const auto rows = harness::sweep(plan, estimate, profile, threads);
  const std::string text = harness::summary_csv(rows);
  if (out.empty())
    std::cout << text;
  else
    io::write_file(out, text);
  bool ok = true;
  for (const auto& r : rows) {
    const bool row_ok = r.status == "ok" && r.verdict.holder_ok && r.verdict.criterion_consistent;
    if (!row_ok) std::cerr << "sweep: run " << r.name << " status " << r.status << "\n";
    ok = ok && row_ok;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Littlewood-Paley Navier-Stokes criterion harness"};
  app.set_version_flag("--version", std::string(io::kToolVersion));
  app.require_subcommand(1);
  unsigned threads = harness::worker_threads();
  app.add_option("--threads", threads, "Worker threads (default: LPNSE_THREADS or hardware)");

  std::string config_path, out, profile = "smooth", input, constant_file;
  std::optional<std::uint64_t> seed;
  std::optional<double> c_hat;
  bool force = false;
  harness::CorpusSpec spec;
  spec.size = 1000;

  auto* simulate = app.add_subcommand("simulate", "Run one experiment from a config file");
  simulate->add_option("config", config_path)->required();
  simulate->add_option("--seed", seed, "Override ic.seed");
  simulate->add_option("--out", out, "Run directory (overrides output.dir)");
  simulate->add_flag("--force", force, "Replace an existing run directory");

  auto* norms_cmd = app.add_subcommand("norms", "Norm report of a snapshot or a diagnostics CSV");
  norms_cmd->add_option("input", input)->required();
  norms_cmd->add_option("--profile", profile);

  auto* interp = app.add_subcommand("check-interp", "Estimate the interpolation constant over a corpus");
  interp->add_option("--size", spec.size);
  interp->add_option("--n", spec.n);
  interp->add_option("--profile", spec.profile);
  interp->add_option("--first-seed", spec.first_seed);
  interp->add_option("--out", out, "JSON output file (default stdout)");

  auto* audit = app.add_subcommand("audit", "Exponent audit of a snapshot");
  audit->add_option("snapshot", input)->required();
  audit->add_option("--profile", profile);

  auto* sweep = app.add_subcommand("sweep", "Run a plan file and write the summary CSV");
  sweep->add_option("plan", input)->required();
  sweep->add_option("--out", out, "Summary CSV (default stdout)");
  auto* c_opt = sweep->add_option("--c-hat", c_hat, "Use this constant instead of a corpus estimate");
  sweep->add_option("--constant-file", constant_file, "ConstantEstimate JSON")->excludes(c_opt);

  CLI11_PARSE(app, argc, argv);
  if (threads == 0) threads = 1;

  try {
    if (*simulate) return cmd_simulate(config_path, seed, force, out, threads);
    if (*norms_cmd) return cmd_norms(input, profile);
    if (*interp) return cmd_check_interp(spec, out, threads);
    if (*audit) return cmd_audit(input, profile);
    if (*sweep) return cmd_sweep(input, out, c_hat, constant_file, threads);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
