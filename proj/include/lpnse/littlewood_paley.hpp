#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lpnse/fields.hpp"

namespace lpnse::lp {

/// Radial cutoff phi_hat(r): 1 on [0, 1], 0 on [2, inf), nonincreasing in between.
struct CutoffProfile {
  std::string name;
  std::function<double(double)> phi_hat;

  /// Indicator of r <= 1. Gives exact dyadic annuli 2^(j-1) < |k| <= 2^j.
  static CutoffProfile box();
  /// 1 - s(r - 1) on [1, 2] with the C^2 quintic s(x) = x^3 (10 - 15x + 6x^2).
  static CutoffProfile smooth();
  /// "box" or "smooth"; ParameterError otherwise.
  static CutoffProfile named(const std::string& name);
};

/// Checks the support, range and monotonicity constraints on a dense sample of
/// [0, 4]. Throws InvalidProfileError naming the first violation.
void validate_profile(const CutoffProfile& profile);

/// Dyadic partition of the grid's frequency lattice.
///
/// psi_hat_j(k) = phi_hat(|k| / 2^j) - phi_hat(|k| / 2^(j-1)) for j in
/// [j_min, j_max]; the range is chosen so the blocks sum to one on every
/// nonzero resolved wavenumber. The mean mode belongs to no block.
class DyadicPartition {
 public:
  const Grid& grid() const noexcept { return grid_; }
  const CutoffProfile& profile() const noexcept { return profile_; }
  int j_min() const noexcept { return j_min_; }
  int j_max() const noexcept { return j_max_; }

  double phi_hat(double r) const { return profile_.phi_hat(r); }
  /// Multiplier of S_j at wavenumber magnitude k.
  double low_pass_multiplier(int j, double k) const;
  /// Multiplier of Delta_j, computed as the difference of the two low passes.
  double band_multiplier(int j, double k) const;
  /// low_pass_multiplier(j, |k|) at every flat index, for j_min - 1 <= j <= j_max;
  /// nullptr outside that range.
  const double* low_pass_table(int j) const noexcept;

 private:
  friend DyadicPartition build_partition(const Grid& grid, CutoffProfile profile);
  DyadicPartition(const Grid& grid, CutoffProfile profile, int j_min, int j_max);

  Grid grid_;
  CutoffProfile profile_;
  int j_min_;
  int j_max_;
  std::shared_ptr<const std::vector<std::vector<double>>> tables_;
};

DyadicPartition build_partition(const Grid& grid, CutoffProfile profile);

struct DyadicBlock {
  int j;
  SpectralField field;
};

/// S_j f
SpectralField low_pass(const SpectralField& f, int j, const DyadicPartition& partition);
/// Delta_j f = S_j f - S_{j-1} f
DyadicBlock band_pass(const SpectralField& f, int j, const DyadicPartition& partition);
/// Blocks j_min..j_max in order.
std::vector<DyadicBlock> decompose(const SpectralField& f, const DyadicPartition& partition);
/// Sum of the blocks (the mean is not included).
SpectralField reconstruct(const std::vector<DyadicBlock>& blocks);

SpectralVectorField low_pass(const SpectralVectorField& u, int j, const DyadicPartition& partition);
SpectralVectorField band_pass(const SpectralVectorField& u, int j, const DyadicPartition& partition);

}  // namespace lpnse::lp
