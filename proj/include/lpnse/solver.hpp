#pragma once

#include <span>
#include <string>
#include <vector>

#include "lpnse/errors.hpp"
#include "lpnse/fields.hpp"
#include "lpnse/littlewood_paley.hpp"
#include "lpnse/norms.hpp"

namespace lpnse::nse {

enum class Dealias { two_thirds, none };

Dealias parse_dealias(const std::string& name);
std::string to_string(Dealias rule);

struct SolverConfig {
  Grid grid{32};
  double dt = 1e-3;
  double t_end = 1.0;
  double viscosity = 1.0;
  Dealias dealias = Dealias::two_thirds;
  int diag_every = 10;

  /// ParameterError on dt, t_end, viscosity or diag_every out of range.
  void validate() const;
};

/// Velocity at one time. u is divergence-free, mean-zero and Hermitian.
struct SolverState {
  double t = 0.0;
  SpectralVectorField u;
  long step_count = 0;
};

/// Raised when a step produces NaN/Inf or the enstrophy runs away; holds the
/// last state that was still finite.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& message, SolverState last_good)
      : Error(message), last_good_(std::move(last_good)) {}
  const SolverState& last_good_state() const noexcept { return last_good_; }

 private:
  SolverState last_good_;
};

/// dt exceeds the advective limit 0.5 h / max|u|.
class StepRejectedError : public Error {
 public:
  StepRejectedError(const std::string& message, double limit) : Error(message), limit_(limit) {}
  double limit() const noexcept { return limit_; }

 private:
  double limit_;
};

/// Zero every mode with |k_i| > n/3 in some axis (two-thirds rule).
void apply_dealias(SpectralVectorField& u, Dealias rule);

/// Pseudospectral (u.grad)u with the dealiasing mask applied to the result.
SpectralVectorField advection(const SpectralVectorField& u, Dealias rule);

/// 0.5 h / max|u| over the collocation points; +inf for the zero field.
double cfl_limit(const SpectralVectorField& u);

/// Throws ParameterError unless the state is mean-zero and divergence-free (1e-10).
void check_state(const SolverState& state);

/// One integrating-factor RK4 step: the viscous factor exp(-nu |k|^2 dt) is
/// exact, the projected advection is explicit. The mean mode stays exactly zero.
SolverState step(const SolverState& state, const SolverConfig& config);

/// Collocation quadrature of ((u.grad)u) . lap(u) over the box, undealiased.
double nonlinear_integral_I(const SpectralVectorField& u);

/// Everything recorded at a diagnostic time.
struct Diagnostic {
  norms::NormReport report;
  double nonlinear_I = 0.0;
  /// ||u||_{L^6} ||grad u||_{L^3} ||lap u||_{L^2}
  double holder_bound = 0.0;
};

Diagnostic diagnose(const SolverState& state, const lp::DyadicPartition& partition);

/// One interval of the enstrophy budget
///   d/dt (1/2 ||grad u||^2) + nu ||lap u||^2 = I.
/// Time derivatives are difference quotients over the interval; the two
/// integrands are averaged over it with the fourth-order sample quadrature.
struct EnstrophyInterval {
  double t0 = 0.0;
  double t1 = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  /// Interval average of nu ||lap u||^2.
  double dissipation = 0.0;
  double relative_residual = 0.0;
};

/// Needs at least two samples (ParameterError otherwise).
std::vector<EnstrophyInterval> enstrophy_balance(std::span<const Diagnostic> history, double viscosity);

/// ||u(t)||^2 + 2 nu int_0^t ||grad u||^2 ds - ||u_0||^2 at each sample.
struct EnergyLedgerEntry {
  double t = 0.0;
  double energy = 0.0;
  double dissipation_integral = 0.0;
  double residual = 0.0;
  bool violated = false;
};

struct EnergyLedger {
  std::vector<EnergyLedgerEntry> entries;
  double tolerance = 0.0;
  double max_residual = 0.0;
  /// Largest |residual(t_{i+1}) - residual(t_i)|.
  double max_increment = 0.0;
  bool holds = true;
};

/// Flags samples where the energy inequality fails by more than 1e-6 ||u_0||^2.
EnergyLedger energy_ledger(std::span<const Diagnostic> history, double u0_l2, double viscosity);

}  // namespace lpnse::nse
