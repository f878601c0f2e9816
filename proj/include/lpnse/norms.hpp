#pragma once

#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpnse/fields.hpp"
#include "lpnse/littlewood_paley.hpp"

namespace lpnse::norms {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// (h^3 sum |f|^q)^(1/q); q = inf gives the collocation maximum. Several
/// components are combined through the pointwise Euclidean magnitude.
double lp_norm(const PhysicalField& f, double q);
double lp_norm(std::span<const PhysicalField> components, double q);
/// Same, starting from spectral data (one inverse transform per component).
double lp_norm(std::span<const SpectralField> components, double q);

/// Homogeneous Sobolev norm (L^3 sum_{k != 0} |k|^(2s) |c(k)|^2)^(1/2).
/// With s = 0 it equals the L^2 norm of a mean-zero field.
double sobolev_norm(const SpectralField& f, double s);
double sobolev_norm(std::span<const SpectralField> components, double s);

struct BesovParams {
  double s = -1.0;
  double p = kInfinity;
  double q = kInfinity;
};

/// ||Delta_j f||_{L^p} for j = j_min..j_max, each block evaluated in physical space.
std::vector<double> block_lp_norms(std::span<const SpectralField> components, double p,
                                   const lp::DyadicPartition& partition);

/// l^q norm over j of 2^(j s) * block_norms[j - j_min].
double combine_blocks(std::span<const double> block_norms, int j_min, double s, double q);

/// Homogeneous Besov norm over the partition's dyadic range; the mean is excluded.
double besov_norm(const SpectralField& f, const BesovParams& params, const lp::DyadicPartition& partition);
double besov_norm(std::span<const SpectralField> components, const BesovParams& params,
                  const lp::DyadicPartition& partition);

/// Factors of the interpolation inequality
///   ||f||_{L^q} <= C ||f||_{H^{alpha (q/2 - 1)}}^{2/q} ||f||_{B^{-alpha}_{inf,inf}}^{1 - 2/q}
/// and the ratio of the two sides with C = 1.
struct InterpolationReport {
  double q = 0.0;
  double alpha = 0.0;
  double sobolev_index = 0.0;
  double lq = 0.0;
  double sobolev = 0.0;
  double besov = 0.0;
  double ratio = 0.0;
};

/// Requires 2 < q < inf and alpha > 0 (ParameterError), a mean-zero field
/// (ParameterError) and a nonzero field (DegenerateInputError).
InterpolationReport check_interpolation(const SpectralField& f, double q, double alpha,
                                        const lp::DyadicPartition& partition);
InterpolationReport check_interpolation(std::span<const SpectralField> components, double q, double alpha,
                                        const lp::DyadicPartition& partition);

/// Norms of a velocity field at one time.
///
/// Extras are keyed by name and serialized in key order:
///   grad_l3  ||grad u||_{L^3}
///   l3, l6   ||u||_{L^3}, ||u||_{L^6}
///   linf     collocation max of |u|
struct NormReport {
  double time = 0.0;
  double l2 = 0.0;
  double grad_l2 = 0.0;
  double lap_l2 = 0.0;
  double besov_m1_inf_inf = 0.0;
  std::map<std::string, double> extras;

  std::optional<double> extra(const std::string& key) const;
};

NormReport make_norm_report(const SpectralVectorField& u, double time, const lp::DyadicPartition& partition);

/// Column names: time, l2, grad_l2, lap_l2, besov_m1_inf_inf, then the
/// standard extras in key order.
std::vector<std::string> norm_report_columns();
std::vector<double> norm_report_values(const NormReport& report);
NormReport norm_report_from_values(std::span<const double> values);

/// Key under which a report stores ||u||_{L^q}: "l3", "l6", "linf", ...
std::string lq_key(double q);

/// (int_0^T ||u(t)||_{L^q}^p dt)^(1/p) over a time-ordered history; p = inf
/// gives the sup. The exponents must satisfy 2/p + 3/q = 1 with q >= 3 (1e-9).
double serrin_quantity(std::span<const NormReport> history, double p, double q);

/// Integral of sampled data using a piecewise cubic through the four nearest
/// samples on each interval (fourth order; falls back to lower order with
/// fewer than four samples). Entry i of the cumulative form is the integral
/// from t[0] to t[i].
double time_integral(std::span<const double> t, std::span<const double> f);
std::vector<double> cumulative_time_integral(std::span<const double> t, std::span<const double> f);

}  // namespace lpnse::norms
