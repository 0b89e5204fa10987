#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ndec/laplace.hpp"
#include "ndec/modes.hpp"

namespace ndec {

enum class KernelKind { Delta, Exponential, Tabulated };

/// Sampled spectral density J(omega), linearly interpolated between samples
/// and zero outside the sampled range.
struct SpectralTable {
  std::vector<double> omega;
  std::vector<double> density;

  double operator()(double w) const;
};

/// One equilibrium reservoir. Quantities are in whatever consistent units the
/// caller uses; temperature is an energy (k_B = 1).
struct ReservoirSpec {
  KernelKind kind = KernelKind::Delta;
  double coupling = 0.0;
  double temperature = 0.0;
  double corr_time = 0.0;
  SpectralTable table;

  static ReservoirSpec delta(double coupling, double temperature);
  static ReservoirSpec exponential(double coupling, double corr_time, double temperature);
  static ReservoirSpec tabulated(SpectralTable table, double temperature);

  void validate() const;
};

/// A classical random force with no friction of its own, such as a noisy
/// electric field acting on a charge. `intensity` is the field noise intensity
/// (variance times correlation time), so the force correlator carries the
/// weight charge^2 * intensity in the same place a reservoir carries eta*T.
struct FieldNoise {
  KernelKind kind = KernelKind::Delta;
  double intensity = 0.0;
  double corr_time = 0.0;
  double charge = 1.0;

  static FieldNoise delta(double intensity, double charge = 1.0);
  static FieldNoise exponential(double intensity, double corr_time, double charge = 1.0);

  double weight() const { return charge * charge * intensity; }
  void validate() const;
};

struct SystemParams {
  double mass = 1.0;
  double frequency = 0.0;
};

/// Exponential memory term: friction (weight/tau) e^{-t/tau} and force
/// correlator (noise/tau) e^{-t/tau}. For a reservoir noise = T * friction.
struct ExpComponent {
  double friction = 0.0;
  double noise = 0.0;
  double corr_time = 1.0;
};

/// Smooth kernels sampled once on a uniform time grid; linear interpolation
/// in between and zero past the last sample.
struct TabulatedKernel {
  std::vector<double> time;
  std::vector<double> friction;
  std::vector<double> noise;

  double friction_at(double t) const;
  double noise_at(double t) const;
};

struct TabulationOptions {
  double t_max = 50.0;
  std::size_t points = 4001;
};

/// Laplace-domain form sharing one denominator prod_k (s tau_k + 1) over the
/// distinct correlation times: eta[s] = friction / den, C[s] = noise / den.
struct CommonDenominatorForm {
  Polynomial friction;
  Polynomial noise;
  Polynomial denominator;
};

/// The composed environment: total friction kernel eta(t) and total force
/// correlator C(t). Delta atoms are kept as scalar weights.
class NoiseModel {
 public:
  double delta_friction() const { return delta_friction_; }
  double delta_noise() const { return delta_noise_; }
  const std::vector<ExpComponent>& exp_modes() const { return exp_; }
  const std::optional<TabulatedKernel>& tabulated() const { return tab_; }
  double mass() const { return system_.mass; }
  double frequency() const { return system_.frequency; }
  const SystemParams& system() const { return system_; }

  bool rational() const { return !tab_.has_value(); }
  /// int_0^inf eta(t) dt, atoms included.
  double total_friction() const;

  /// Smooth parts at t >= 0.
  double friction(double t) const;
  double correlator(double t) const;

  ModeSum friction_series() const;
  ModeSum correlator_series() const;

  LaplaceRational friction_laplace() const;
  LaplaceRational correlator_laplace() const;
  CommonDenominatorForm common_denominator() const;

  /// Laplace transforms at complex s, tabulated parts included.
  std::complex<double> friction_transform(std::complex<double> s) const;
  std::complex<double> correlator_transform(std::complex<double> s) const;

 private:
  friend NoiseModel compose(std::span<const ReservoirSpec>, SystemParams, std::span<const FieldNoise>,
                            TabulationOptions);

  double delta_friction_ = 0.0;
  double delta_noise_ = 0.0;
  std::vector<ExpComponent> exp_;
  std::optional<TabulatedKernel> tab_;
  SystemParams system_;
};

NoiseModel compose(std::span<const ReservoirSpec> reservoirs, SystemParams system,
                   std::span<const FieldNoise> fields = {}, TabulationOptions tabulation = {});

/// eta_k(t) for t >= 0. Delta kernels have no pointwise value.
double friction_kernel_time(const ReservoirSpec& spec, double t, double mass = 1.0);

LaplaceRational friction_kernel_laplace(const ReservoirSpec& spec);

struct CorrelatorValue {
  double value = 0.0;
  /// True when `value` is the weight of a delta atom rather than C_k(t).
  bool delta_weight = false;
};

CorrelatorValue correlator_time(const ReservoirSpec& spec, double t, double mass = 1.0);

/// eta(t) = 2/(pi m) int_0^inf J(w)/w cos(w t) dw by adaptive Gauss-Kronrod
/// panels, relative tolerance 1e-8. The 1/m factor follows the reservoir
/// Hamiltonian's convention; pass mass = 1 for the mass-free convention.
double spectral_to_kernel(const SpectralTable& table, double mass, double t);

}  // namespace ndec
