#include "lpnse/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lpnse/csv.hpp"
#include "lpnse/errors.hpp"

namespace lpnse::io {
namespace {

struct KeySpec {
  const char* name;
  const char* default_value;  // nullptr: required
};

constexpr KeySpec kKeys[] = {
    {"grid.n", nullptr},
    {"box_length", "6.2831853071795862"},
    {"dt", nullptr},
    {"t_end", nullptr},
    {"viscosity", "1"},
    {"dealias", "two_thirds"},
    {"diag_every", "10"},
    {"initial_condition", nullptr},
    {"ic.amplitude", "1"},
    {"ic.slope", "4"},
    {"ic.peak_shell", "2"},
    {"ic.seed", "0"},
    {"profile", "smooth"},
    {"c_hat", ""},
    {"constant_file", ""},
    {"corpus.size", "100"},
    {"output.dir", "run"},
    {"output.snapshots", "true"},
    {"output.force", "false"},
};

const KeySpec* find_key(const std::string& name) {
  for (const auto& k : kKeys)
    if (name == k.name) return &k;
  return nullptr;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t above = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diagonal + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diagonal = above;
    }
  }
  return row[b.size()];
}

struct Entry {
  std::string value;
  int line = 0;
};

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  const Entry& entry(const std::string& key) const { return entries_.at(key); }

  double real(const std::string& key) const {
    const auto& e = entry(key);
    try {
      const double v = parse_double(e.value);
      if (!std::isfinite(v)) throw IoError("");
      return v;
    } catch (const IoError&) {
      throw ParseError(key + ": expected a number, got '" + e.value + "'", e.line);
    }
  }

  std::uint64_t integer(const std::string& key) const {
    const auto& e = entry(key);
    std::uint64_t v = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
      throw ParseError(key + ": expected a non-negative integer, got '" + e.value + "'", e.line);
    return v;
  }

  bool boolean(const std::string& key) const {
    const auto& e = entry(key);
    if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
    if (e.value == "false" || e.value == "0" || e.value == "no") return false;
    throw ParseError(key + ": expected true or false, got '" + e.value + "'", e.line);
  }

  const std::string& text(const std::string& key) const { return entry(key).value; }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    throw ParseError(key + ": " + message, entry(key).line);
  }

 private:
  std::map<std::string, Entry> entries_;
};

[[noreturn]] void reject_unknown(const std::string& key, int line) {
  std::string message = "unknown key '" + key + "'";
  if (const auto s = suggest_key(key)) message += " (did you mean '" + *s + "'?)";
  throw ParseError(message, line);
}

}  // namespace

std::optional<std::string> suggest_key(const std::string& unknown) {
  std::optional<std::string> best;
  std::size_t best_distance = std::max<std::size_t>(2, unknown.size() / 3) + 1;
  for (const auto& k : kKeys) {
    const std::size_t d = edit_distance(unknown, k.name);
    if (d < best_distance) {
      best_distance = d;
      best = k.name;
    }
  }
  return best;
}

RunConfig parse_config_text(const std::string& text, const std::map<std::string, std::string>& overrides,
                            const std::filesystem::path& base_dir) {
  std::map<std::string, Entry> entries;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value', got '" + content + "'", line);
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (key.empty()) throw ParseError("missing key before '='", line);
    if (!find_key(key)) reject_unknown(key, line);
    if (value.empty()) throw ParseError(key + ": missing value", line);
    if (entries.count(key)) throw ParseError("duplicate key '" + key + "'", line);
    entries[key] = {value, line};
  }
  for (const auto& [key, value] : overrides) {
    if (!find_key(key)) reject_unknown(key, 0);
    entries[key] = {value, 0};
  }

  std::set<std::string> defaulted;
  for (const auto& k : kKeys) {
    if (entries.count(k.name)) continue;
    if (!k.default_value) throw ParseError(std::string("missing required key '") + k.name + "'", 0);
    entries[k.name] = {k.default_value, 0};
    defaulted.insert(k.name);
  }

  const Reader r(entries);
  RunConfig cfg;

  const std::uint64_t n = r.integer("grid.n");
  if (n < 8 || n % 2 != 0 || n > 1024) r.fail("grid.n", "must be an even integer in [8, 1024]");
  const double box_length = r.real("box_length");
  if (!(box_length > 0.0)) r.fail("box_length", "must be positive");
  cfg.solver.grid = Grid(n, box_length);

  cfg.solver.dt = r.real("dt");
  if (!(cfg.solver.dt > 0.0)) r.fail("dt", "must be positive, got " + r.text("dt"));
  cfg.solver.t_end = r.real("t_end");
  if (!(cfg.solver.t_end > 0.0)) r.fail("t_end", "must be positive, got " + r.text("t_end"));
  cfg.solver.viscosity = r.real("viscosity");
  if (!(cfg.solver.viscosity > 0.0)) r.fail("viscosity", "must be positive, got " + r.text("viscosity"));
  try {
    cfg.solver.dealias = nse::parse_dealias(r.text("dealias"));
  } catch (const ParameterError& e) {
    r.fail("dealias", e.what());
  }
  const std::uint64_t diag_every = r.integer("diag_every");
  if (diag_every < 1 || diag_every > 1000000) r.fail("diag_every", "must be >= 1");
  cfg.solver.diag_every = static_cast<int>(diag_every);

  try {
    cfg.ic.kind = harness::parse_ic_kind(r.text("initial_condition"));
  } catch (const ParameterError& e) {
    r.fail("initial_condition", e.what());
  }
  cfg.ic.amplitude = r.real("ic.amplitude");
  if (cfg.ic.amplitude < 0.0) r.fail("ic.amplitude", "must be >= 0");
  cfg.ic.slope = r.real("ic.slope");
  if (!(cfg.ic.slope > 0.0)) r.fail("ic.slope", "must be positive");
  cfg.ic.peak_shell = r.real("ic.peak_shell");
  if (!(cfg.ic.peak_shell > 0.0)) r.fail("ic.peak_shell", "must be positive");
  cfg.ic.seed = r.integer("ic.seed");

  cfg.options.profile = r.text("profile");
  if (cfg.options.profile != "box" && cfg.options.profile != "smooth") r.fail("profile", "must be box or smooth");
  if (!defaulted.count("c_hat")) {
    cfg.options.c_hat = r.real("c_hat");
    if (!(*cfg.options.c_hat > 0.0)) r.fail("c_hat", "must be positive");
  }
  if (!defaulted.count("constant_file")) {
    std::filesystem::path p = r.text("constant_file");
    cfg.options.constant_file = (p.is_relative() && !base_dir.empty() ? base_dir / p : p).string();
  }
  cfg.options.corpus_size = r.integer("corpus.size");
  if (cfg.options.corpus_size < 1) r.fail("corpus.size", "must be >= 1");
  {
    std::filesystem::path p = r.text("output.dir");
    cfg.options.output_dir = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }
  cfg.options.snapshots = r.boolean("output.snapshots");
  cfg.options.force = r.boolean("output.force");

  // Normalized values for hashing.
  auto& res = cfg.resolved;
  res["grid.n"] = std::to_string(n);
  res["box_length"] = format_double(box_length);
  res["dt"] = format_double(cfg.solver.dt);
  res["t_end"] = format_double(cfg.solver.t_end);
  res["viscosity"] = format_double(cfg.solver.viscosity);
  res["dealias"] = nse::to_string(cfg.solver.dealias);
  res["diag_every"] = std::to_string(cfg.solver.diag_every);
  res["initial_condition"] = harness::to_string(cfg.ic.kind);
  res["ic.amplitude"] = format_double(cfg.ic.amplitude);
  res["ic.slope"] = format_double(cfg.ic.slope);
  res["ic.peak_shell"] = format_double(cfg.ic.peak_shell);
  res["ic.seed"] = std::to_string(cfg.ic.seed);
  res["profile"] = cfg.options.profile;
  res["c_hat"] = cfg.options.c_hat ? format_double(*cfg.options.c_hat) : "";
  res["constant_file"] = cfg.options.constant_file;
  res["corpus.size"] = std::to_string(cfg.options.corpus_size);
  res["output.dir"] = cfg.options.output_dir.string();
  res["output.snapshots"] = cfg.options.snapshots ? "true" : "false";
  res["output.force"] = cfg.options.force ? "true" : "false";
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path, const std::map<std::string, std::string>& overrides) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    throw ParseError(e.what(), 0);
  }
  return parse_config_text(text, overrides, path.parent_path());
}

std::string canonical_form(const RunConfig& config) {
  std::string out;
  for (const auto& [key, value] : config.resolved) {
    if (key.rfind("output.", 0) == 0) continue;
    out += key + "=" + value + "\n";
  }
  return out;
}

std::string config_hash(const RunConfig& config) {
  const std::string text = canonical_form(config);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw IoError("SHA-256 failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

harness::ConstantEstimate resolve_estimate(const RunConfig& config, unsigned threads) {
  if (config.options.c_hat) {
    harness::ConstantEstimate est;
    est.c_hat = *config.options.c_hat;
    est.eps0_hat = harness::reciprocal(est.c_hat);
    // A user-supplied constant is taken to bound both interpolation pairs.
    for (const auto& [q, alpha] : harness::default_pairs()) est.pairs.push_back({q, alpha, est.c_hat, 0});
    est.corpus = {0, config.solver.grid.n(), config.options.profile, 0};
    return est;
  }
  if (!config.options.constant_file.empty()) return harness::constant_from_json(read_file(config.options.constant_file));
  harness::CorpusSpec spec;
  spec.size = config.options.corpus_size;
  spec.n = config.solver.grid.n();
  spec.profile = config.options.profile;
  const auto pairs = harness::default_pairs();
  return harness::estimate_constant(spec, pairs, threads);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

std::string to_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["config_hash"] = m.config_hash;
  j["tool_version"] = m.tool_version;
  j["start_time"] = m.start_time;
  j["end_time"] = m.end_time;
  j["seeds"] = m.seeds;
  j["files"] = m.files;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RunManifest m;
    m.config_hash = j.at("config_hash").get<std::string>();
    m.tool_version = j.at("tool_version").get<std::string>();
    m.start_time = j.at("start_time").get<std::string>();
    m.end_time = j.at("end_time").get<std::string>();
    m.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    m.files = j.at("files").get<std::vector<std::string>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed manifest: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

void write_run_dir(const std::filesystem::path& dir, RunManifest manifest, const std::vector<std::string>& columns,
                   const std::vector<std::vector<double>>& rows,
                   const std::vector<std::pair<std::string, std::string>>& extra_files, bool force) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::exists(dir, ec)) {
    if (!fs::is_directory(dir, ec)) throw IoError(dir.string() + " exists and is not a directory");
    if (!fs::is_empty(dir, ec)) {
      if (!force) throw IoError(dir.string() + " already exists; pass --force to overwrite");
      fs::remove_all(dir, ec);
      if (ec) throw IoError("cannot clear " + dir.string() + ": " + ec.message());
    }
  }
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  std::vector<std::string> inventory;
  write_file(dir / "diagnostics.csv", write_csv(columns, rows));
  inventory.push_back("diagnostics.csv");
  for (const auto& [name, bytes] : extra_files) {
    if (name.find('/') != std::string::npos || name == "manifest.json" || name == "diagnostics.csv")
      throw IoError("invalid run file name '" + name + "'");
    write_file(dir / name, bytes);
    inventory.push_back(name);
  }
  inventory.push_back("manifest.json");
  std::sort(inventory.begin(), inventory.end());
  manifest.files = inventory;
  write_file(dir / "manifest.json", to_json(manifest));
}

std::vector<norms::NormReport> read_norm_reports(const std::filesystem::path& csv_path) {
  const CsvTable table = parse_csv(read_file(csv_path));
  const auto columns = norms::norm_report_columns();
  std::vector<std::size_t> index;
  for (const auto& c : columns) index.push_back(table.column(c));
  std::vector<norms::NormReport> reports;
  for (const auto& row : table.rows) {
    std::vector<double> values;
    for (auto i : index) values.push_back(parse_double(row[i]));
    reports.push_back(norms::norm_report_from_values(values));
  }
  return reports;
}

std::vector<harness::PlanEntry> parse_plan(const std::filesystem::path& path, std::vector<RunConfig>* configs) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  std::vector<harness::PlanEntry> plan;
  std::set<std::string> names;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    std::istringstream tokens(hash == std::string::npos ? raw : raw.substr(0, hash));
    std::string name, config_path, token;
    if (!(tokens >> name)) continue;
    if (!(tokens >> config_path)) throw ParseError("plan entry '" + name + "' has no config path", line);
    if (!names.insert(name).second) throw ParseError("duplicate plan entry '" + name + "'", line);
    std::map<std::string, std::string> overrides;
    while (tokens >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos || eq == 0) throw ParseError("expected key=value override, got '" + token + "'", line);
      overrides[token.substr(0, eq)] = token.substr(eq + 1);
    }
    std::filesystem::path cfg_path = config_path;
    if (cfg_path.is_relative()) cfg_path = path.parent_path() / cfg_path;
    RunConfig cfg;
    try {
      cfg = parse_config(cfg_path, overrides);
    } catch (const ParseError& e) {
      throw ParseError("plan entry '" + name + "' (" + cfg_path.string() + "): " + e.what(), line);
    }
    plan.push_back({name, cfg.solver, cfg.ic});
    if (configs) configs->push_back(std::move(cfg));
  }
  if (plan.empty()) throw ParseError("plan is empty", 0);
  return plan;
}

}  // namespace lpnse::io
