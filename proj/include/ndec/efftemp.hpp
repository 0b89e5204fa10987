#pragma once

#include <vector>

#include "ndec/kernels.hpp"
#include "ndec/laplace.hpp"
#include "ndec/modes.hpp"

namespace ndec {

enum class Provenance { ClosedForm, PartialFraction, Numerical };

/// T(t) = delta_weight * delta(t) + sum of exponential modes, and its running
/// integral T_eff(t) (the atom at t = 0 counted in full). Numerical results
/// carry T_eff sampled on a uniform grid instead of modes.
struct EffectiveTemperature {
  double delta_weight = 0.0;
  std::vector<ExpMode> modes;
  /// T_eff(t -> infinity).
  double asymptote = 0.0;
  Provenance provenance = Provenance::PartialFraction;
  std::vector<double> grid_time;
  std::vector<double> grid_value;

  double operator()(double t) const;
  /// Smooth part of T(t).
  double rate(double t) const;
  /// Mode representation; not available for Numerical results.
  ModeSum series() const;
};

/// T[s] = C[s] / eta[s] as a reduced rational function.
LaplaceRational effective_temperature_laplace(const NoiseModel& model);

/// Partial-fraction inversion. Poles must be simple with Re(p) <= 0.
EffectiveTemperature invert_laplace(const LaplaceRational& transform);

struct VolterraOptions {
  /// Horizon of the sampled T_eff; 0 picks the tabulation horizon.
  double t_max = 0.0;
  std::size_t initial_steps = 256;
  std::size_t max_steps = 1 << 14;
  double tolerance = 1e-6;
};

/// Exact partial fractions for rational models; for tabulated models T_eff is
/// obtained from the time-domain relation int_0^t C = eta * T_eff solved on a
/// uniform grid with step halving until successive results agree to the
/// relative tolerance.
EffectiveTemperature effective_temperature(const NoiseModel& model, const VolterraOptions& options = {});

double t_eff(const NoiseModel& model, double t);

/// T_eff for a Markovian reservoir (eta_f, T_f) plus an exponential one
/// (eta_s, tau, T_s).
double two_reservoir_t_eff(double eta_f, double T_f, double eta_s, double T_s, double tau, double t);
EffectiveTemperature two_reservoir_effective_temperature(double eta_f, double T_f, double eta_s, double T_s,
                                                         double tau);

/// T_eff for a white field (intensity E1sq) plus an exponentially correlated
/// one (E2sq, tau) acting on a charge with constant friction eta. `ambient`
/// is the additive temperature of the equilibrium background.
double engineered_t_eff(double E1sq, double E2sq, double tau, double eta, double charge, double t,
                        double ambient = 0.0);

}  // namespace ndec
