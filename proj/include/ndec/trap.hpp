#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "ndec/efftemp.hpp"
#include "ndec/kernels.hpp"
#include "ndec/units.hpp"

namespace ndec {

/// Trapped ion in SI units: mass kg, charge C, trap frequencies rad/s.
struct IonSpec {
  double mass = 40.0 * si::amu;
  double charge = si::e;
  double omega_min = 2.0 * 3.141592653589793 * 1e6;
  double omega_max = 2.0 * 3.141592653589793 * 1e8;

  void validate() const;
};

struct HeatingDataset {
  std::vector<double> omega;
  std::vector<double> rate;
  std::vector<double> rel_uncertainty;
  /// Set for synthetic data.
  std::optional<std::uint64_t> seed;

  void validate() const;
};

void write_dataset_csv(std::ostream& out, const HeatingDataset& data);
HeatingDataset read_dataset_csv(std::istream& in);

struct Lorentzian {
  double amplitude = 0.0;
  double corr_time = 0.0;
};

/// S(w) = flat + sum_j 2 b_j / (1 + w^2 tau_j^2) in force-spectrum units.
struct SpectrumFit {
  double flat = 0.0;
  std::vector<Lorentzian> components;
  double chi_square = 0.0;
  double residual_norm = 0.0;
  double aicc = 0.0;
  std::size_t points = 0;
  /// Parameter covariance in the order (flat, b_1, tau_1, b_2, tau_2, ...).
  Eigen::MatrixXd covariance;

  double operator()(double omega) const;
};

/// Two-sided force spectrum of the stationary correlator: a delta atom of
/// weight c (one-sided convention, so the white level is 2c) and modes
/// 2 w_k / (1 + w^2 tau_k^2). Tabulated parts by their cosine transform.
double power_spectrum(const NoiseModel& model, double omega);

/// ndot = S_F / (4 m hbar w).
double heating_rate(const IonSpec& ion, double force_spectrum, double omega, double hbar = si::hbar);

HeatingDataset synthesize_dataset(const NoiseModel& model, const IonSpec& ion, std::span<const double> omegas,
                                  double rel_noise, std::uint64_t seed, double hbar = si::hbar);

/// Heating rates converted back to force spectra S_i = 4 m hbar w_i ndot_i with
/// standard deviations u_i S_i.
struct SpectrumSamples {
  std::vector<double> omega;
  std::vector<double> value;
  std::vector<double> sigma;
};

SpectrumSamples spectrum_samples(const HeatingDataset& data, const IonSpec& ion, double hbar = si::hbar);

struct FrictionCalibration {
  double friction = 0.0;
  double standard_error = 0.0;
  double reduced_chi_square = 0.0;
};

/// Weighted fit of a flat spectrum 2 eta T to ambient-only heating data.
FrictionCalibration calibrate_friction(const HeatingDataset& data, const IonSpec& ion, double temperature,
                                       double hbar = si::hbar);

/// Best fit with exactly `components` Lorentzians over 8 log-spaced tau seeds
/// per component.
SpectrumFit fit_spectrum_fixed(const HeatingDataset& data, const IonSpec& ion, std::size_t components,
                               double hbar = si::hbar);

/// Picks the component count in [0, max_components] with the smallest
/// small-sample corrected Akaike criterion.
SpectrumFit fit_spectrum(const HeatingDataset& data, const IonSpec& ion, std::size_t max_components,
                         double hbar = si::hbar);

struct ReconstructedTemperature {
  EffectiveTemperature temperature;
  SpectrumFit fit;
  double friction = 0.0;
  double friction_error = 0.0;

  double value(double t) const { return temperature(t); }
  /// One standard deviation from the fit covariance and the friction error.
  double uncertainty(double t) const;
};

/// C(t) = (flat/2) delta(t) + sum_j (b_j/tau_j) e^{-t/tau_j}, T = C / eta.
ReconstructedTemperature reconstruct_t_eff(const SpectrumFit& fit, double friction, double friction_error = 0.0);

}  // namespace ndec
