#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>

#include "ndec/efftemp.hpp"
#include "ndec/error.hpp"
#include "ndec/kernels.hpp"

using namespace ndec;

namespace {

NoiseModel two_reservoir(double ef, double Tf, double es, double Ts, double tau) {
  const std::vector<ReservoirSpec> specs = {ReservoirSpec::delta(ef, Tf), ReservoirSpec::exponential(es, tau, Ts)};
  return compose(specs, {});
}

}  // namespace

TEST(EffectiveTemperature, EquilibriumIsConstant) {
  const std::vector<ReservoirSpec> specs = {ReservoirSpec::delta(0.4, 2.5)};
  const auto T = effective_temperature(compose(specs, {}));
  EXPECT_TRUE(T.modes.empty());
  EXPECT_DOUBLE_EQ(T.delta_weight, 2.5);
  for (double t : {0.0, 1.0, 100.0}) EXPECT_DOUBLE_EQ(T(t), 2.5);
}

TEST(EffectiveTemperature, SameTemperatureReservoirsStayEquilibrium) {
  const auto m = two_reservoir(1.0, 3.0, 2.0, 3.0, 0.7);
  for (double t : {0.0, 0.3, 5.0}) EXPECT_NEAR(t_eff(m, t), 3.0, 1e-12);
}

TEST(EffectiveTemperature, TwoReservoirClosedFormAgreesWithInversion) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double ef = u(rng), Tf = u(rng), es = u(rng), Ts = u(rng), tau = u(rng);
    const auto T = effective_temperature(two_reservoir(ef, Tf, es, Ts, tau));
    EXPECT_NEAR(T(0.0), Tf, 1e-10 * Tf);
    const double inf = (ef * Tf + es * Ts) / (ef + es);
    EXPECT_NEAR(T.asymptote, inf, 1e-10 * inf);
    for (double x : {0.1, 1.0, 4.0, 30.0}) {
      const double t = x * tau;
      const double ref = two_reservoir_t_eff(ef, Tf, es, Ts, tau, t);
      EXPECT_NEAR(T(t), ref, 1e-10 * std::abs(ref));
    }
  }
}

TEST(EffectiveTemperature, RateIntegratesToTEff) {
  const auto T = effective_temperature(two_reservoir(0.5, 1.0, 1.5, 4.0, 2.0));
  boost::math::quadrature::gauss_kronrod<double, 31> gk;
  for (double t : {0.5, 3.0, 10.0}) {
    const double integral = gk.integrate([&](double u) { return T.rate(u); }, 0.0, t, 15, 1e-13);
    EXPECT_NEAR(T.delta_weight + integral, T(t), 1e-11);
  }
}

TEST(EffectiveTemperature, SatisfiesFluctuationRelationInLaplaceSpace) {
  // eta[s] T[s] must reproduce C[s].
  const std::vector<ReservoirSpec> specs = {ReservoirSpec::delta(0.3, 1.0), ReservoirSpec::exponential(1.0, 0.5, 2.0),
                                            ReservoirSpec::exponential(0.7, 3.0, 0.5)};
  const auto m = compose(specs, {});
  const auto T = effective_temperature_laplace(m);
  const auto eta = m.friction_laplace();
  const auto C = m.correlator_laplace();
  for (double s : {0.0, 0.2, 1.0, 9.0}) EXPECT_NEAR(eta(s) * T(s), C(s), 1e-12 * C(s));
}

TEST(EffectiveTemperature, InversionMatchesTalbot) {
  const std::vector<ReservoirSpec> specs = {ReservoirSpec::exponential(1.0, 0.5, 2.0),
                                            ReservoirSpec::exponential(0.7, 3.0, 0.5)};
  const auto m = compose(specs, {});
  const auto lap = effective_temperature_laplace(m);
  const auto T = invert_laplace(lap);
  // Integrated form has transform T[s]/s.
  auto integrated = [&](std::complex<double> s) { return lap(s) / s; };
  for (double t : {0.2, 1.0, 6.0}) EXPECT_NEAR(T(t), talbot_inverse(integrated, t), 1e-8 * T(t));
}

TEST(EffectiveTemperature, EngineeredFieldsMatchClosedForm) {
  const double eta = 0.02, E1 = 3e-3, E2 = 1e-3, tau = 5.0, q = 1.0;
  const std::vector<ReservoirSpec> amb = {ReservoirSpec::delta(eta, 0.0)};
  const std::vector<FieldNoise> fields = {FieldNoise::delta(E1, q), FieldNoise::exponential(E2, tau, q)};
  const auto m = compose(amb, {}, fields);
  for (double t : {0.0, 1.0, 5.0, 40.0}) {
    const double ref = engineered_t_eff(E1, E2, tau, eta, q, t);
    EXPECT_NEAR(t_eff(m, t), ref, 1e-10 * ref);
  }
}

TEST(EffectiveTemperature, InverseWithRepeatedPoleRejected) {
  // 1/(s+1)^2 has a double pole.
  const LaplaceRational r({1.0}, {1.0, 2.0, 1.0});
  try {
    invert_laplace(r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::RepeatedPole);
  }
}

TEST(EffectiveTemperature, UnstablePoleRejected) {
  const LaplaceRational r({1.0}, {-1.0, 1.0});
  try {
    invert_laplace(r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnstablePole);
  }
}

TEST(EffectiveTemperature, ComplexPolesGiveRealResult) {
  // 1/(s^2 + 2s + 5): integral of e^{-t} sin(2t)/2.
  const LaplaceRational r({1.0}, {5.0, 2.0, 1.0});
  const auto T = invert_laplace(r);
  boost::math::quadrature::gauss_kronrod<double, 31> gk;
  for (double t : {0.3, 1.0, 4.0}) {
    const double ref = gk.integrate([](double u) { return 0.5 * std::exp(-u) * std::sin(2.0 * u); }, 0.0, t, 15, 1e-14);
    EXPECT_NEAR(T(t), ref, 1e-12);
  }
  EXPECT_NEAR(T.asymptote, 0.2, 1e-14);
}

TEST(EffectiveTemperature, FieldOnlyRejected) {
  const std::vector<FieldNoise> fields = {FieldNoise::delta(1.0, 1.0)};
  const std::vector<ReservoirSpec> none = {ReservoirSpec::delta(0.0, 0.0)};
  try {
    effective_temperature(compose(none, {}, fields));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ZeroFriction);
  }
}

TEST(EffectiveTemperature, TabulatedMatchesDirectTrapezoidSolve) {
  // J = w exp(-w^2/2) gives a positive Gaussian kernel. Oracle: march
  // int_0^t C = eta_d T_eff(t) + int_0^t eta_s(t - u) T_eff(u) du with the
  // plain trapezoid rule on a fine grid.
  SpectralTable table;
  for (int i = 0; i <= 800; ++i) {
    const double w = 0.01 * i;
    table.omega.push_back(w);
    table.density.push_back(w * std::exp(-0.5 * w * w));
  }
  const double Ts = 3.0;
  const std::vector<ReservoirSpec> specs = {ReservoirSpec::delta(1.0, 1.0), ReservoirSpec::tabulated(table, Ts)};
  const auto m = compose(specs, {}, {}, {10.0, 1001});
  const auto T = effective_temperature(m);
  EXPECT_EQ(T.provenance, Provenance::Numerical);

  const double h = 0.0025;
  const int n = 4000;
  std::vector<double> eta(n + 1), oracle(n + 1);
  for (int k = 0; k <= n; ++k) eta[k] = m.friction(k * h);
  double noise_integral = 1.0;  // delta atom
  oracle[0] = 1.0;
  for (int k = 1; k <= n; ++k) {
    noise_integral += 0.5 * h * Ts * (eta[k - 1] + eta[k]);
    double known = 0.5 * h * eta[k] * oracle[0];
    for (int j = 1; j < k; ++j) known += h * eta[k - j] * oracle[j];
    oracle[k] = (noise_integral - known) / (1.0 + 0.5 * h * eta[0]);
  }
  for (int k : {0, 400, 1000, 2000, 4000}) EXPECT_NEAR(T(k * h), oracle[k], 2e-5 * oracle[k]) << k * h;
  const double eta_s = m.total_friction() - 1.0;
  EXPECT_NEAR(eta_s, 1.0, 1e-3);
  EXPECT_NEAR(T(10.0), (1.0 + Ts * eta_s) / (1.0 + eta_s), 1e-2);
}

TEST(EffectiveTemperature, MonotoneWhenSlowReservoirHotter) {
  const auto T = effective_temperature(two_reservoir(1.0, 1.0, 1.0, 5.0, 1.0));
  double prev = T(0.0);
  for (double t = 0.1; t < 20.0; t += 0.1) {
    EXPECT_GE(T(t), prev - 1e-14);
    prev = T(t);
  }
}
