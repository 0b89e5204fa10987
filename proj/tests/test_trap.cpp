#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ndec/efftemp.hpp"
#include "ndec/error.hpp"
#include "ndec/trap.hpp"

using namespace ndec;

namespace {

const double kTwoPi = 2.0 * std::numbers::pi;
const double kEta = 1.06e-30;
const double kT = 300.0 * si::k_B;

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = lo * std::pow(hi / lo, double(i) / double(n - 1));
  return w;
}

NoiseModel engineered(const IonSpec& ion, double E1, double E2, double tau) {
  const std::vector<ReservoirSpec> amb = {ReservoirSpec::delta(kEta, kT)};
  const std::vector<FieldNoise> fields = {FieldNoise::delta(E1, ion.charge), FieldNoise::exponential(E2, tau, ion.charge)};
  return compose(amb, {ion.mass, 0.0}, fields);
}

NoiseModel ambient_only(const IonSpec& ion) {
  const std::vector<ReservoirSpec> amb = {ReservoirSpec::delta(kEta, kT)};
  return compose(amb, {ion.mass, 0.0});
}

}  // namespace

TEST(Trap, PowerSpectrumIsFlatPlusLorentzian) {
  const IonSpec ion;
  const double E1 = 1e-9, E2 = 6e-10, tau = 30e-9;
  const auto m = engineered(ion, E1, E2, tau);
  const double q2 = ion.charge * ion.charge;
  for (double w : {0.0, 1e6, 1e8}) {
    const double ref = 2.0 * (kEta * kT + q2 * E1) + 2.0 * q2 * E2 / (1.0 + w * w * tau * tau);
    EXPECT_NEAR(power_spectrum(m, w), ref, 1e-12 * ref);
  }
}

TEST(Trap, HeatingRateFormulaAndRange) {
  const IonSpec ion;
  const double w = kTwoPi * 5e6;
  EXPECT_NEAR(heating_rate(ion, 1e-40, w), 1e-40 / (4.0 * ion.mass * si::hbar * w), 1e-30);
  try {
    heating_rate(ion, 1e-40, kTwoPi * 1e9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::FrequencyOutOfRange);
  }
}

TEST(Trap, NoiselessDatasetIsExactAndRoundTripsThroughCsv) {
  const IonSpec ion;
  const auto m = engineered(ion, 1e-9, 6e-10, 30e-9);
  const auto omegas = log_grid(ion.omega_min, ion.omega_max, 10);
  const auto data = synthesize_dataset(m, ion, omegas, 0.0, 7);
  for (std::size_t i = 0; i < omegas.size(); ++i)
    EXPECT_NEAR(data.rate[i], heating_rate(ion, power_spectrum(m, omegas[i]), omegas[i]), 1e-12 * data.rate[i]);
  std::stringstream io;
  write_dataset_csv(io, data);
  const auto back = read_dataset_csv(io);
  EXPECT_EQ(back.omega, data.omega);
  EXPECT_EQ(back.rate, data.rate);
  EXPECT_EQ(back.rel_uncertainty, data.rel_uncertainty);
}

TEST(Trap, SameSeedSameData) {
  const IonSpec ion;
  const auto m = engineered(ion, 1e-9, 6e-10, 30e-9);
  const auto omegas = log_grid(ion.omega_min, ion.omega_max, 25);
  const auto a = synthesize_dataset(m, ion, omegas, 0.01, 42);
  const auto b = synthesize_dataset(m, ion, omegas, 0.01, 42);
  const auto c = synthesize_dataset(m, ion, omegas, 0.01, 43);
  EXPECT_EQ(a.rate, b.rate);
  EXPECT_NE(a.rate, c.rate);
  for (double r : a.rate) EXPECT_GT(r, 0.0);
}

TEST(Trap, CalibrationRecoversFriction) {
  const IonSpec ion;
  const auto omegas = log_grid(ion.omega_min, ion.omega_max, 25);
  const auto exact = calibrate_friction(synthesize_dataset(ambient_only(ion), ion, omegas, 0.0, 1), ion, kT);
  EXPECT_NEAR(exact.friction, kEta, 1e-10 * kEta);
  const auto noisy = calibrate_friction(synthesize_dataset(ambient_only(ion), ion, omegas, 0.01, 1), ion, kT);
  EXPECT_NEAR(noisy.friction, kEta, 0.01 * kEta);
  EXPECT_GT(noisy.standard_error, 0.0);
  EXPECT_LT(noisy.reduced_chi_square, 5.0);
}

TEST(Trap, CalibrationFlagsStructuredSpectrum) {
  const IonSpec ion;
  const auto omegas = log_grid(ion.omega_min, ion.omega_max, 25);
  const auto data = synthesize_dataset(engineered(ion, 0.0, 1e-8, 30e-9), ion, omegas, 0.01, 1);
  try {
    calibrate_friction(data, ion, kT);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InconsistentFlatness);
  }
}

TEST(Trap, FitRecoversSingleLorentzian) {
  const IonSpec ion;
  const double E1 = 1e-9, E2 = 6e-10, tau = 30e-9;
  const auto omegas = log_grid(ion.omega_min, ion.omega_max, 25);
  const auto data = synthesize_dataset(engineered(ion, E1, E2, tau), ion, omegas, 0.0, 1);
  const auto fit = fit_spectrum(data, ion, 2);
  ASSERT_EQ(fit.components.size(), 1u);
  const double q2 = ion.charge * ion.charge;
  EXPECT_NEAR(fit.components[0].corr_time, tau, 1e-8 * tau);
  EXPECT_NEAR(fit.components[0].amplitude, q2 * E2, 1e-8 * q2 * E2);
  EXPECT_NEAR(fit.flat, 2.0 * (kEta * kT + q2 * E1), 1e-8 * fit.flat);
  EXPECT_EQ(fit.covariance.rows(), 3);
}

TEST(Trap, FitWithNoiseAndReconstruction) {
  const IonSpec ion;
  const double E1 = 1e-9, E2 = 6e-10, tau = 30e-9;
  const auto omegas = log_grid(ion.omega_min, ion.omega_max, 25);
  const auto data = synthesize_dataset(engineered(ion, E1, E2, tau), ion, omegas, 0.01, 9);
  const auto fit = fit_spectrum_fixed(data, ion, 1);
  EXPECT_NEAR(fit.components[0].corr_time, tau, 0.1 * tau);
  const auto rec = reconstruct_t_eff(fit, kEta, 0.01 * kEta);
  for (double t : {0.0, tau, 5.0 * tau}) {
    const double ref = engineered_t_eff(E1, E2, tau, kEta, ion.charge, t, kT);
    EXPECT_NEAR(rec.value(t), ref, 0.05 * ref);
    EXPECT_GT(rec.uncertainty(t), 0.0);
  }
}

TEST(Trap, FitNeedsADecade) {
  const IonSpec ion;
  const auto omegas = log_grid(ion.omega_min, 5.0 * ion.omega_min, 10);
  const auto data = synthesize_dataset(ambient_only(ion), ion, omegas, 0.0, 1);
  EXPECT_THROW(fit_spectrum(data, ion, 2), Error);
}

TEST(Trap, FlatDataSelectsNoLorentzian) {
  const IonSpec ion;
  const auto omegas = log_grid(ion.omega_min, ion.omega_max, 25);
  const auto data = synthesize_dataset(ambient_only(ion), ion, omegas, 0.01, 3);
  const auto fit = fit_spectrum(data, ion, 1);
  EXPECT_TRUE(fit.components.empty());
  const auto rec = reconstruct_t_eff(fit, kEta);
  EXPECT_NEAR(rec.value(0.0), rec.value(1e-6), 1e-12 * rec.value(0.0));
  EXPECT_NEAR(rec.value(0.0), kT, 0.01 * kT);
}

TEST(Trap, SpectrumMatchesFourierQuadrature) {
  // S(w) = 2 int_0^inf C(t) cos(w t) dt for the smooth part.
  const std::vector<ReservoirSpec> specs = {ReservoirSpec::exponential(0.7, 1.3, 2.0)};
  const auto m = compose(specs, {});
  boost::math::quadrature::exp_sinh<double> integrator;
  for (double w : {0.0, 0.4, 2.0}) {
    const double ref =
        2.0 * integrator.integrate([&](double t) { return m.correlator(t) * std::cos(w * t); }, 1e-13);
    EXPECT_NEAR(power_spectrum(m, w), ref, 1e-9 * ref);
  }
  EXPECT_NEAR(power_spectrum(m, 0.0), 2.0 * 0.7 * 2.0, 1e-14);
}

TEST(Trap, HeatingRateScalesInverselyWithFrequency) {
  const IonSpec ion;
  const double w = kTwoPi * 3e6;
  EXPECT_EQ(heating_rate(ion, 0.0, w), 0.0);
  EXPECT_NEAR(heating_rate(ion, 1e-45, 2.0 * w), 0.5 * heating_rate(ion, 1e-45, w), 1e-15 * heating_rate(ion, 1e-45, w));
}

TEST(Trap, FittedSpectrumRoundTripsThroughCorrelator) {
  const IonSpec ion;
  const auto omegas = log_grid(ion.omega_min, ion.omega_max, 25);
  const auto data = synthesize_dataset(engineered(ion, 1e-9, 6e-10, 30e-9), ion, omegas, 0.01, 4);
  const auto fit = fit_spectrum(data, ion, 2);
  // Correlator implied by the fit, as a model, then back to a spectrum.
  std::vector<FieldNoise> fields = {FieldNoise::delta(0.5 * fit.flat, 1.0)};
  for (const auto& c : fit.components) fields.push_back(FieldNoise::exponential(c.amplitude, c.corr_time, 1.0));
  const std::vector<ReservoirSpec> amb = {ReservoirSpec::delta(1.0, 0.0)};
  const auto model = compose(amb, {}, fields);
  for (double w : omegas) {
    EXPECT_NEAR(power_spectrum(model, w), fit(w), 1e-10 * fit(w));
    EXPECT_GE(fit(w), 0.0);
  }
}
