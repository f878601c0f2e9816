#include "lpnse/littlewood_paley.hpp"

#include <cmath>
#include <sstream>

#include "lpnse/errors.hpp"

namespace lpnse::lp {

CutoffProfile CutoffProfile::box() {
  return {"box", [](double r) { return r <= 1.0 ? 1.0 : 0.0; }};
}

CutoffProfile CutoffProfile::smooth() {
  return {"smooth", [](double r) {
            if (r <= 1.0) return 1.0;
            if (r >= 2.0) return 0.0;
            const double x = r - 1.0;
            return 1.0 - x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
          }};
}

CutoffProfile CutoffProfile::named(const std::string& name) {
  if (name == "box") return box();
  if (name == "smooth") return smooth();
  throw ParameterError("unknown cutoff profile '" + name + "' (expected box or smooth)");
}

void validate_profile(const CutoffProfile& profile) {
  if (!profile.phi_hat) throw InvalidProfileError("profile '" + profile.name + "' has no function");
  constexpr int kSamples = 4000;
  double previous = 1.0;
  for (int s = 0; s <= kSamples; ++s) {
    const double r = 4.0 * s / kSamples;
    const double v = profile.phi_hat(r);
    auto fail = [&](const char* what) {
      std::ostringstream msg;
      msg << "profile '" << profile.name << "' " << what << " at r=" << r << " (value " << v << ")";
      throw InvalidProfileError(msg.str());
    };
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) fail("leaves [0, 1]");
    if (r <= 1.0 && v != 1.0) fail("is not 1 on [0, 1]");
    if (r >= 2.0 && v != 0.0) fail("is not 0 on [2, inf)");
    if (v > previous) fail("is increasing");
    previous = v;
  }
}

DyadicPartition::DyadicPartition(const Grid& grid, CutoffProfile profile, int j_min, int j_max)
    : grid_(grid), profile_(std::move(profile)), j_min_(j_min), j_max_(j_max) {
  auto tables = std::make_shared<std::vector<std::vector<double>>>();
  for (int j = j_min_ - 1; j <= j_max_; ++j) {
    std::vector<double> t(grid_.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = low_pass_multiplier(j, grid_.wavenumber_norm(i));
    tables->push_back(std::move(t));
  }
  tables_ = std::move(tables);
}

const double* DyadicPartition::low_pass_table(int j) const noexcept {
  if (j < j_min_ - 1 || j > j_max_) return nullptr;
  return (*tables_)[static_cast<std::size_t>(j - (j_min_ - 1))].data();
}

double DyadicPartition::low_pass_multiplier(int j, double k) const {
  return profile_.phi_hat(k / std::ldexp(1.0, j));
}

double DyadicPartition::band_multiplier(int j, double k) const {
  return low_pass_multiplier(j, k) - low_pass_multiplier(j - 1, k);
}

DyadicPartition build_partition(const Grid& grid, CutoffProfile profile) {
  validate_profile(profile);
  const double k_min = grid.min_wavenumber_norm();
  const double k_max = grid.max_wavenumber_norm();
  // Largest j with 2^j <= k_min: the smallest mode sits in the lower half of
  // shell j_min's support, so phi_hat(k_min / 2^(j_min-1)) = 0.
  int j_min = static_cast<int>(std::floor(std::log2(k_min)));
  while (std::ldexp(1.0, j_min) > k_min) --j_min;
  while (std::ldexp(1.0, j_min + 1) <= k_min) ++j_min;
  // Smallest j with 2^(j-1) >= k_max.
  int j_max = static_cast<int>(std::ceil(std::log2(k_max))) + 1;
  while (std::ldexp(1.0, j_max - 2) >= k_max) --j_max;
  while (std::ldexp(1.0, j_max - 1) < k_max) ++j_max;
  return DyadicPartition(grid, std::move(profile), j_min, j_max);
}

SpectralField low_pass(const SpectralField& f, int j, const DyadicPartition& partition) {
  require_same_grid(f.grid(), partition.grid(), "low_pass");
  const Grid& grid = f.grid();
  SpectralField out(grid);
  if (const double* table = partition.low_pass_table(j)) {
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (table[i] != 0.0) out[i] = table[i] * f[i];
    return out;
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double m = partition.low_pass_multiplier(j, grid.wavenumber_norm(i));
    if (m != 0.0) out[i] = m * f[i];
  }
  return out;
}

DyadicBlock band_pass(const SpectralField& f, int j, const DyadicPartition& partition) {
  SpectralField block = low_pass(f, j, partition);
  block -= low_pass(f, j - 1, partition);
  return {j, std::move(block)};
}

std::vector<DyadicBlock> decompose(const SpectralField& f, const DyadicPartition& partition) {
  std::vector<DyadicBlock> blocks;
  blocks.reserve(static_cast<std::size_t>(partition.j_max() - partition.j_min() + 1));
  SpectralField previous = low_pass(f, partition.j_min() - 1, partition);
  for (int j = partition.j_min(); j <= partition.j_max(); ++j) {
    SpectralField current = low_pass(f, j, partition);
    SpectralField block = current;
    block -= previous;
    blocks.push_back({j, std::move(block)});
    previous = std::move(current);
  }
  return blocks;
}

SpectralField reconstruct(const std::vector<DyadicBlock>& blocks) {
  if (blocks.empty()) throw DegenerateInputError("reconstruct: no blocks");
  SpectralField sum(blocks.front().field.grid());
  for (const auto& b : blocks) sum += b.field;
  return sum;
}

SpectralVectorField low_pass(const SpectralVectorField& u, int j, const DyadicPartition& partition) {
  return SpectralVectorField(low_pass(u[0], j, partition), low_pass(u[1], j, partition),
                             low_pass(u[2], j, partition));
}

SpectralVectorField band_pass(const SpectralVectorField& u, int j, const DyadicPartition& partition) {
  return SpectralVectorField(band_pass(u[0], j, partition).field, band_pass(u[1], j, partition).field,
                             band_pass(u[2], j, partition).field);
}

}  // namespace lpnse::lp
