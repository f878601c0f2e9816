#include "lpnse/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lpnse/errors.hpp"
#include "lpnse/spectral.hpp"

namespace lpnse::norms {
namespace {

void check_exponent(double q, const char* what) {
  if (std::isnan(q) || q < 1.0) {
    std::ostringstream msg;
    msg << what << ": exponent must lie in [1, inf], got " << q;
    throw ParameterError(msg.str());
  }
}

// (sum over points of |v|^q) with |v|^2 accumulated first.
double lp_norm_from_squares(std::span<const double> magnitude2, double q, double cell_volume) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : magnitude2) m = std::max(m, v);
    return std::sqrt(m);
  }
  double sum = 0.0;
  if (q == 2.0) {
    for (double v : magnitude2) sum += v;
  } else {
    for (double v : magnitude2) sum += std::pow(v, 0.5 * q);
  }
  return std::pow(cell_volume * sum, 1.0 / q);
}

std::vector<PhysicalField> to_physical(std::span<const SpectralField> components) {
  std::vector<PhysicalField> out;
  out.reserve(components.size());
  for (const auto& c : components) out.push_back(inverse_transform(c));
  return out;
}

}  // namespace

double lp_norm(const PhysicalField& f, double q) { return lp_norm(std::span<const PhysicalField>(&f, 1), q); }

double lp_norm(std::span<const PhysicalField> components, double q) {
  check_exponent(q, "lp_norm");
  if (components.empty()) throw ParameterError("lp_norm: no components");
  const Grid& grid = components.front().grid();
  std::vector<double> magnitude2(grid.size(), 0.0);
  for (const auto& c : components) {
    require_same_grid(grid, c.grid(), "lp_norm");
    if (!c.is_finite()) throw NonFiniteError("lp_norm: field contains NaN or Inf");
    const auto v = c.values();
    for (std::size_t i = 0; i < grid.size(); ++i) magnitude2[i] += v[i] * v[i];
  }
  return lp_norm_from_squares(magnitude2, q, grid.cell_volume());
}

double lp_norm(std::span<const SpectralField> components, double q) {
  check_exponent(q, "lp_norm");
  const auto physical = to_physical(components);
  return lp_norm(std::span<const PhysicalField>(physical), q);
}

double sobolev_norm(const SpectralField& f, double s) { return sobolev_norm(std::span<const SpectralField>(&f, 1), s); }

double sobolev_norm(std::span<const SpectralField> components, double s) {
  if (!std::isfinite(s)) throw ParameterError("sobolev_norm: index must be finite");
  if (components.empty()) throw ParameterError("sobolev_norm: no components");
  const Grid& grid = components.front().grid();
  double sum = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double k = grid.wavenumber_norm(i);
    const double weight = s == 0.0 ? 1.0 : std::pow(k, 2.0 * s);
    double a2 = 0.0;
    for (const auto& c : components) a2 += std::norm(c[i]);
    sum += weight * a2;
  }
  return std::sqrt(grid.volume() * sum);
}

std::vector<double> block_lp_norms(std::span<const SpectralField> components, double p,
                                   const lp::DyadicPartition& partition) {
  check_exponent(p, "besov_norm");
  std::vector<double> norms;
  for (int j = partition.j_min(); j <= partition.j_max(); ++j) {
    std::vector<PhysicalField> block;
    block.reserve(components.size());
    for (const auto& c : components) block.push_back(inverse_transform(lp::band_pass(c, j, partition).field));
    norms.push_back(lp_norm(std::span<const PhysicalField>(block), p));
  }
  return norms;
}

double combine_blocks(std::span<const double> block_norms, int j_min, double s, double q) {
  check_exponent(q, "besov_norm");
  double acc = 0.0;
  for (std::size_t b = 0; b < block_norms.size(); ++b) {
    const double term = std::exp2(s * (j_min + static_cast<int>(b))) * block_norms[b];
    if (std::isinf(q))
      acc = std::max(acc, term);
    else
      acc += std::pow(term, q);
  }
  return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
}

double besov_norm(const SpectralField& f, const BesovParams& params, const lp::DyadicPartition& partition) {
  return besov_norm(std::span<const SpectralField>(&f, 1), params, partition);
}

double besov_norm(std::span<const SpectralField> components, const BesovParams& params,
                  const lp::DyadicPartition& partition) {
  if (!std::isfinite(params.s)) throw ParameterError("besov_norm: s must be finite");
  check_exponent(params.q, "besov_norm");
  const auto blocks = block_lp_norms(components, params.p, partition);
  return combine_blocks(blocks, partition.j_min(), params.s, params.q);
}

InterpolationReport check_interpolation(const SpectralField& f, double q, double alpha,
                                        const lp::DyadicPartition& partition) {
  return check_interpolation(std::span<const SpectralField>(&f, 1), q, alpha, partition);
}

InterpolationReport check_interpolation(std::span<const SpectralField> components, double q, double alpha,
                                        const lp::DyadicPartition& partition) {
  if (!(q > 2.0) || !std::isfinite(q)) throw ParameterError("check_interpolation: q must lie in (2, inf)");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("check_interpolation: alpha must be positive");
  double scale = 0.0, mean = 0.0;
  for (const auto& c : components) {
    scale = std::max(scale, c.max_abs());
    mean = std::max(mean, std::abs(c.mean()));
  }
  if (scale == 0.0) throw DegenerateInputError("check_interpolation: zero field");
  if (mean > 1e-12 * scale) throw ParameterError("check_interpolation: field must have zero mean");

  InterpolationReport r;
  r.q = q;
  r.alpha = alpha;
  r.sobolev_index = alpha * (0.5 * q - 1.0);
  r.lq = lp_norm(components, q);
  r.sobolev = sobolev_norm(components, r.sobolev_index);
  r.besov = besov_norm(components, {-alpha, kInfinity, kInfinity}, partition);
  const double denominator = std::pow(r.sobolev, 2.0 / q) * std::pow(r.besov, 1.0 - 2.0 / q);
  if (!(denominator > 0.0)) throw DegenerateInputError("check_interpolation: zero denominator");
  r.ratio = r.lq / denominator;
  return r;
}

std::optional<double> NormReport::extra(const std::string& key) const {
  const auto it = extras.find(key);
  if (it == extras.end()) return std::nullopt;
  return it->second;
}

NormReport make_norm_report(const SpectralVectorField& u, double time, const lp::DyadicPartition& partition) {
  const auto components = u.components();
  const PhysicalVectorField velocity = inverse_transform(u);
  const std::span<const PhysicalField> v(velocity);
  const auto grad = velocity_gradient(u);

  NormReport r;
  r.time = time;
  r.l2 = lp_norm(v, 2.0);
  r.grad_l2 = sobolev_norm(std::span<const SpectralField>(grad), 0.0);
  r.lap_l2 = sobolev_norm(components, 2.0);
  r.besov_m1_inf_inf = besov_norm(components, {-1.0, kInfinity, kInfinity}, partition);
  r.extras["l3"] = lp_norm(v, 3.0);
  r.extras["l6"] = lp_norm(v, 6.0);
  r.extras["linf"] = lp_norm(v, kInfinity);
  r.extras["grad_l3"] = lp_norm(std::span<const SpectralField>(grad), 3.0);
  return r;
}

std::vector<std::string> norm_report_columns() {
  return {"time", "l2", "grad_l2", "lap_l2", "besov_m1_inf_inf", "grad_l3", "l3", "l6", "linf"};
}

std::vector<double> norm_report_values(const NormReport& report) {
  std::vector<double> values{report.time, report.l2, report.grad_l2, report.lap_l2, report.besov_m1_inf_inf};
  for (const char* key : {"grad_l3", "l3", "l6", "linf"}) {
    const auto v = report.extra(key);
    values.push_back(v ? *v : std::nan(""));
  }
  return values;
}

NormReport norm_report_from_values(std::span<const double> values) {
  const auto columns = norm_report_columns();
  if (values.size() < columns.size()) throw ParameterError("norm report row is too short");
  NormReport r;
  r.time = values[0];
  r.l2 = values[1];
  r.grad_l2 = values[2];
  r.lap_l2 = values[3];
  r.besov_m1_inf_inf = values[4];
  for (std::size_t c = 5; c < columns.size(); ++c)
    if (!std::isnan(values[c])) r.extras[columns[c]] = values[c];
  return r;
}

std::string lq_key(double q) {
  if (std::isinf(q)) return "linf";
  std::ostringstream key;
  key << "l" << q;
  return key.str();
}

double serrin_quantity(std::span<const NormReport> history, double p, double q) {
  if (std::isnan(p) || std::isnan(q) || q < 3.0 || p < 1.0)
    throw ParameterError("serrin_quantity: need 3 <= q <= inf and p >= 1");
  const double line = (std::isinf(p) ? 0.0 : 2.0 / p) + (std::isinf(q) ? 0.0 : 3.0 / q);
  if (std::abs(line - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "serrin_quantity: (p, q) = (" << p << ", " << q << ") is off the line 2/p + 3/q = 1";
    throw ParameterError(msg.str());
  }
  if (history.empty()) return 0.0;
  const std::string key = lq_key(q);
  std::vector<double> t, f;
  double sup = 0.0;
  for (const auto& r : history) {
    const auto v = r.extra(key);
    if (!v) throw ParameterError("serrin_quantity: history has no stored " + key + " norm");
    if (!t.empty() && r.time < t.back()) throw ParameterError("serrin_quantity: history is not time-ordered");
    t.push_back(r.time);
    sup = std::max(sup, *v);
    f.push_back(std::isinf(p) ? 0.0 : std::pow(*v, p));
  }
  if (std::isinf(p)) return sup;
  return std::pow(std::max(time_integral(t, f), 0.0), 1.0 / p);
}

std::vector<double> cumulative_time_integral(std::span<const double> t, std::span<const double> f) {
  if (t.size() != f.size()) throw ParameterError("time_integral: size mismatch");
  const std::size_t m = t.size();
  std::vector<double> out(m, 0.0);
  if (m < 2) return out;

  auto lagrange = [&](std::size_t first, std::size_t count, double x) {
    double value = 0.0;
    for (std::size_t a = first; a < first + count; ++a) {
      double w = 1.0;
      for (std::size_t b = first; b < first + count; ++b)
        if (b != a) w *= (x - t[b]) / (t[a] - t[b]);
      value += w * f[a];
    }
    return value;
  };

  const std::size_t order = std::min<std::size_t>(m, 4);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double h = t[i + 1] - t[i];
    if (!(h > 0.0)) throw ParameterError("time_integral: sample times must be strictly increasing");
    double piece;
    if (order == 2) {
      piece = 0.5 * h * (f[i] + f[i + 1]);
    } else {
      const std::size_t first = order == 4 ? std::min(i == 0 ? 0 : i - 1, m - 4) : 0;
      // Two-point Gauss-Legendre is exact for the interpolating cubic.
      const double mid = 0.5 * (t[i] + t[i + 1]);
      const double offset = 0.5 * h / std::sqrt(3.0);
      piece = 0.5 * h * (lagrange(first, order, mid - offset) + lagrange(first, order, mid + offset));
    }
    out[i + 1] = out[i] + piece;
  }
  return out;
}

double time_integral(std::span<const double> t, std::span<const double> f) {
  const auto cumulative = cumulative_time_integral(t, f);
  return cumulative.empty() ? 0.0 : cumulative.back();
}

}  // namespace lpnse::norms
