#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lpnse/harness.hpp"
#include "lpnse/solver.hpp"

namespace lpnse::io {

inline constexpr const char* kToolVersion = "0.1.0";

/// Settings that steer the harness rather than the solver.
struct HarnessOptions {
  std::string profile = "smooth";
  std::optional<double> c_hat;
  std::string constant_file;
  std::size_t corpus_size = 100;
  std::filesystem::path output_dir = "run";
  bool snapshots = true;
  bool force = false;
};

struct RunConfig {
  nse::SolverConfig solver;
  harness::InitialCondition ic;
  HarnessOptions options;
  /// Every key with its resolved value, defaults included.
  std::map<std::string, std::string> resolved;
};

/// Key-value text, one `key = value` per line, `#` starts a comment.
///
/// Required: grid.n, dt, t_end, initial_condition.
/// Optional: box_length, viscosity, dealias, diag_every, ic.amplitude,
/// ic.slope, ic.peak_shell, ic.seed, profile, c_hat, constant_file,
/// corpus.size, output.dir, output.snapshots, output.force.
///
/// `overrides` replace (or add) keys after the file is read. Relative paths
/// in the file are resolved against `base_dir`. Errors are ParseError with
/// the offending line.
RunConfig parse_config_text(const std::string& text, const std::map<std::string, std::string>& overrides = {},
                            const std::filesystem::path& base_dir = {});
RunConfig parse_config(const std::filesystem::path& path, const std::map<std::string, std::string>& overrides = {});

/// Closest known key by edit distance, if any is reasonably close.
std::optional<std::string> suggest_key(const std::string& unknown);

/// Sorted `key=value` lines of the resolved configuration (output keys excluded).
std::string canonical_form(const RunConfig& config);
/// SHA-256 of canonical_form, lowercase hex.
std::string config_hash(const RunConfig& config);

/// Starting constant for a run: c_hat from the config, else the
/// constant_file, else a fresh corpus estimate of corpus.size members.
harness::ConstantEstimate resolve_estimate(const RunConfig& config, unsigned threads);

struct RunManifest {
  std::string config_hash;
  std::string tool_version = kToolVersion;
  std::string start_time;
  std::string end_time;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> files;
};

std::string utc_timestamp();
std::string to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& text);

/// Writes diagnostics.csv, the extra files and manifest.json into `dir`.
/// An existing non-empty directory is replaced only with `force`; otherwise
/// IoError. The manifest inventory lists exactly the files written.
void write_run_dir(const std::filesystem::path& dir, RunManifest manifest, const std::vector<std::string>& columns,
                   const std::vector<std::vector<double>>& rows,
                   const std::vector<std::pair<std::string, std::string>>& extra_files, bool force);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

/// NormReports from a diagnostics CSV written by write_run_dir.
std::vector<norms::NormReport> read_norm_reports(const std::filesystem::path& csv_path);

/// Plan file for `sweep`: one run per line,
///   <name> <config path> [key=value ...]
/// with paths relative to the plan file and `#` comments.
std::vector<harness::PlanEntry> parse_plan(const std::filesystem::path& path,
                                           std::vector<RunConfig>* configs = nullptr);

}  // namespace lpnse::io
