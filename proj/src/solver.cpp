#include "lpnse/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lpnse/spectral.hpp"

namespace lpnse::nse {

Dealias parse_dealias(const std::string& name) {
  if (name == "two_thirds" || name == "two-thirds" || name == "2/3") return Dealias::two_thirds;
  if (name == "none") return Dealias::none;
  throw ParameterError("unknown dealias rule '" + name + "' (expected two_thirds or none)");
}

std::string to_string(Dealias rule) { return rule == Dealias::two_thirds ? "two_thirds" : "none"; }

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ParameterError("t_end must be positive");
  if (!(viscosity > 0.0) || !std::isfinite(viscosity)) throw ParameterError("viscosity must be positive");
  if (diag_every < 1) throw ParameterError("diag_every must be >= 1");
}

void apply_dealias(SpectralVectorField& u, Dealias rule) {
  if (rule == Dealias::none) return;
  const Grid& grid = u.grid();
  const long n = static_cast<long>(grid.n());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::size_t idx[3];
    grid.unflat(i, idx[0], idx[1], idx[2]);
    bool keep = true;
    for (auto a : idx) keep = keep && 3 * std::abs(grid.lattice(a)) <= n;
    if (!keep)
      for (int c = 0; c < 3; ++c) u[c][i] = 0.0;
  }
}

SpectralVectorField advection(const SpectralVectorField& u, Dealias rule) {
  SpectralVectorField out = convective_product(u);
  apply_dealias(out, rule);
  return out;
}

double cfl_limit(const SpectralVectorField& u) {
  const PhysicalVectorField v = inverse_transform(u);
  double umax2 = 0.0;
  for (std::size_t p = 0; p < u.grid().size(); ++p)
    umax2 = std::max(umax2, v[0][p] * v[0][p] + v[1][p] * v[1][p] + v[2][p] * v[2][p]);
  if (umax2 == 0.0) return std::numeric_limits<double>::infinity();
  return 0.5 * u.grid().spacing() / std::sqrt(umax2);
}

void check_state(const SolverState& state) {
  const auto& u = state.u;
  for (int c = 0; c < 3; ++c)
    if (u[c][0] != Complex{}) throw ParameterError("solver state must have zero mean");
  if (divergence_defect(u) > 1e-10) throw ParameterError("solver state is not divergence-free");
}

namespace {

// -P (u.grad)u with the mean removed.
SpectralVectorField nonlinear_rhs(const SpectralVectorField& u, Dealias rule) {
  SpectralVectorField n = leray_project(advection(u, rule));
  n *= -1.0;
  for (int c = 0; c < 3; ++c) n[c][0] = 0.0;
  return n;
}

std::vector<double> viscous_factor(const Grid& grid, double viscosity, double h) {
  std::vector<double> factor(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double k = grid.wavenumber_norm(i);
    factor[i] = std::exp(-viscosity * k * k * h);
  }
  return factor;
}

SpectralVectorField scaled(const SpectralVectorField& u, const std::vector<double>& factor) {
  SpectralVectorField out = u;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < factor.size(); ++i) out[c][i] *= factor[i];
  return out;
}

}  // namespace

SolverState step(const SolverState& state, const SolverConfig& config) {
  const double h = config.dt;
  const auto& u = state.u;
  const double limit = cfl_limit(u);
  if (h > limit) {
    std::ostringstream msg;
    msg << "step rejected at t=" << state.t << ": dt=" << h << " exceeds CFL limit " << limit;
    throw StepRejectedError(msg.str(), limit);
  }

  // The factors only depend on the grid, nu and dt; reuse them across steps.
  thread_local struct {
    std::size_t n = 0;
    double box = 0.0, nu = 0.0, dt = 0.0;
    std::vector<double> half, full;
  } factors;
  if (factors.n != u.grid().n() || factors.box != u.grid().box_length() || factors.nu != config.viscosity ||
      factors.dt != h) {
    factors.half = viscous_factor(u.grid(), config.viscosity, 0.5 * h);
    factors.full = viscous_factor(u.grid(), config.viscosity, h);
    factors.n = u.grid().n();
    factors.box = u.grid().box_length();
    factors.nu = config.viscosity;
    factors.dt = h;
  }
  const auto& half = factors.half;
  const auto& full = factors.full;

  SolverState next{state.t + h, SpectralVectorField(u.grid()), state.step_count + 1};
  try {
    // Lawson RK4 on v = exp(nu |k|^2 t) u.
    const SpectralVectorField a = nonlinear_rhs(u, config.dealias);
    SpectralVectorField stage = u;
    stage.add_scaled(a, 0.5 * h);
    const SpectralVectorField b = nonlinear_rhs(scaled(stage, half), config.dealias);

    const SpectralVectorField u_half = scaled(u, half);
    stage = u_half;
    stage.add_scaled(b, 0.5 * h);
    const SpectralVectorField c = nonlinear_rhs(stage, config.dealias);

    stage = scaled(u, full);
    stage.add_scaled(scaled(c, half), h);
    const SpectralVectorField d = nonlinear_rhs(stage, config.dealias);

    SpectralVectorField increment = scaled(a, full);
    SpectralVectorField bc = b;
    bc += c;
    increment.add_scaled(scaled(bc, half), 2.0);
    increment += d;

    next.u = scaled(u, full);
    next.u.add_scaled(increment, h / 6.0);
  } catch (const NonFiniteError& e) {
    throw BlowUpError(std::string("non-finite values during step: ") + e.what(), state);
  }
  for (int c = 0; c < 3; ++c) next.u[c][0] = 0.0;
  if (!next.u.is_finite()) {
    std::ostringstream msg;
    msg << "non-finite velocity after step " << next.step_count << " (t=" << next.t << ")";
    throw BlowUpError(msg.str(), state);
  }
  return next;
}

double nonlinear_integral_I(const SpectralVectorField& u) {
  const Grid& grid = u.grid();
  const PhysicalVectorField product = convective_product_physical(u);
  const PhysicalVectorField lap = inverse_transform(laplacian(u));
  double sum = 0.0;
  for (int c = 0; c < 3; ++c) {
    const auto a = product[c].values();
    const auto b = lap[c].values();
    for (std::size_t p = 0; p < grid.size(); ++p) sum += a[p] * b[p];
  }
  return grid.cell_volume() * sum;
}

Diagnostic diagnose(const SolverState& state, const lp::DyadicPartition& partition) {
  Diagnostic d;
  d.report = norms::make_norm_report(state.u, state.t, partition);
  d.nonlinear_I = nonlinear_integral_I(state.u);
  d.holder_bound = *d.report.extra("l6") * *d.report.extra("grad_l3") * d.report.lap_l2;
  return d;
}

std::vector<EnstrophyInterval> enstrophy_balance(std::span<const Diagnostic> history, double viscosity) {
  if (history.size() < 2) throw ParameterError("enstrophy_balance needs at least two samples");
  std::vector<double> t, dissipation, nonlinear;
  for (const auto& d : history) {
    t.push_back(d.report.time);
    dissipation.push_back(viscosity * d.report.lap_l2 * d.report.lap_l2);
    nonlinear.push_back(d.nonlinear_I);
  }
  const auto dissipation_cum = norms::cumulative_time_integral(t, dissipation);
  const auto nonlinear_cum = norms::cumulative_time_integral(t, nonlinear);

  std::vector<EnstrophyInterval> out;
  for (std::size_t i = 0; i + 1 < history.size(); ++i) {
    EnstrophyInterval r;
    r.t0 = t[i];
    r.t1 = t[i + 1];
    const double h = r.t1 - r.t0;
    const double g0 = history[i].report.grad_l2, g1 = history[i + 1].report.grad_l2;
    r.dissipation = (dissipation_cum[i + 1] - dissipation_cum[i]) / h;
    r.lhs = 0.5 * (g1 * g1 - g0 * g0) / h + r.dissipation;
    r.rhs = (nonlinear_cum[i + 1] - nonlinear_cum[i]) / h;
    r.residual = std::abs(r.lhs - r.rhs);
    r.relative_residual = r.dissipation > 0.0 ? r.residual / r.dissipation : r.residual;
    out.push_back(r);
  }
  return out;
}

EnergyLedger energy_ledger(std::span<const Diagnostic> history, double u0_l2, double viscosity) {
  EnergyLedger ledger;
  const double e0 = u0_l2 * u0_l2;
  ledger.tolerance = 1e-6 * e0;
  std::vector<double> t, enstrophy;
  for (const auto& d : history) {
    t.push_back(d.report.time);
    enstrophy.push_back(d.report.grad_l2 * d.report.grad_l2);
  }
  const auto integral = norms::cumulative_time_integral(t, enstrophy);
  for (std::size_t i = 0; i < history.size(); ++i) {
    EnergyLedgerEntry e;
    e.t = t[i];
    e.energy = history[i].report.l2 * history[i].report.l2;
    e.dissipation_integral = 2.0 * viscosity * integral[i];
    e.residual = e.energy + e.dissipation_integral - e0;
    e.violated = e.residual > ledger.tolerance;
    ledger.holds = ledger.holds && !e.violated;
    ledger.max_residual = std::max(ledger.max_residual, std::abs(e.residual));
    if (i > 0)
      ledger.max_increment = std::max(ledger.max_increment, std::abs(e.residual - ledger.entries.back().residual));
    ledger.entries.push_back(e);
  }
  return ledger;
}

}  // namespace lpnse::nse
