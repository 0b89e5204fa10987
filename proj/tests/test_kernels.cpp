#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "ndec/error.hpp"
#include "ndec/kernels.hpp"

using namespace ndec;

namespace {

// int_0^inf f(t) e^{-s t} dt
double laplace_quadrature(auto f, double s) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate([&](double t) { return f(t) * std::exp(-s * t); }, 1e-13);
}

SpectralTable ohmic(double mass, double eta, double cutoff, std::size_t n) {
  SpectralTable t;
  for (std::size_t i = 0; i <= n; ++i) {
    const double w = cutoff * double(i) / double(n);
    t.omega.push_back(w);
    t.density.push_back(mass * eta * w);
  }
  return t;
}

}  // namespace

TEST(FrictionKernel, ExponentialValues) {
  EXPECT_DOUBLE_EQ(friction_kernel_time(ReservoirSpec::exponential(1.0, 2.0, 0.0), 0.0), 0.5);
  EXPECT_NEAR(friction_kernel_time(ReservoirSpec::exponential(1.0, 1.0, 0.0), 1.0), std::exp(-1.0), 1e-15);
}

TEST(FrictionKernel, RejectsDeltaAndNegativeTime) {
  try {
    friction_kernel_time(ReservoirSpec::delta(1.0, 1.0), 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DeltaKernelNotPointwise);
  }
  try {
    friction_kernel_time(ReservoirSpec::exponential(1.0, 1.0, 1.0), -1e-3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NegativeTime);
  }
}

TEST(FrictionKernel, LaplaceFormsAndQuadratureAgree) {
  EXPECT_DOUBLE_EQ(friction_kernel_laplace(ReservoirSpec::delta(3.0, 1.0))(0.7), 3.0);
  const auto spec = ReservoirSpec::exponential(2.0, 5.0, 1.0);
  const auto lap = friction_kernel_laplace(spec);
  EXPECT_EQ(lap.numerator(), (Polynomial{2.0}));
  EXPECT_EQ(lap.denominator(), (Polynomial{1.0, 5.0}));
  EXPECT_EQ(lap.at_infinity(), 0.0);
  for (double s : {0.1, 1.0, 10.0}) {
    const double ref = laplace_quadrature([&](double t) { return friction_kernel_time(spec, t); }, s);
    EXPECT_NEAR(lap(s), ref, 1e-10 * ref);
  }
  try {
    friction_kernel_laplace(ReservoirSpec::tabulated(ohmic(1.0, 1.0, 1.0, 4), 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::TabulatedNotRational);
  }
}

TEST(FrictionKernel, TransformConsistencyOverWideRange) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto spec = ReservoirSpec::exponential(u(rng), u(rng), u(rng));
    const auto lap = friction_kernel_laplace(spec);
    for (double x : {0.01, 0.3, 1.0, 7.0, 100.0}) {
      const double s = x / spec.corr_time;
      const double ref = laplace_quadrature([&](double t) { return friction_kernel_time(spec, t); }, s);
      EXPECT_NEAR(lap(s), ref, 1e-7 * ref);
    }
  }
}

TEST(Correlator, ScalesKernelByTemperature) {
  EXPECT_DOUBLE_EQ(correlator_time(ReservoirSpec::exponential(1.0, 1.0, 2.0), 0.0).value, 2.0);
  EXPECT_NEAR(correlator_time(ReservoirSpec::exponential(4.0, 2.0, 0.5), 2.0).value, std::exp(-1.0), 1e-15);
  const auto d = correlator_time(ReservoirSpec::delta(1.0, 3.0), 0.0);
  EXPECT_TRUE(d.delta_weight);
  EXPECT_DOUBLE_EQ(d.value, 3.0);
}

TEST(SpectralKernel, OhmicCutoffMatchesSineIntegral) {
  const double m = 2.0, eta = 0.7, wc = 5.0;
  const auto table = ohmic(m, eta, wc, 10);
  EXPECT_NEAR(spectral_to_kernel(table, m, 0.0), 2.0 * eta * wc / std::numbers::pi, 1e-12);
  for (double t : {0.1, 1.0, 3.7, 40.0}) {
    const double ref = 2.0 * eta / std::numbers::pi * std::sin(wc * t) / t;
    EXPECT_NEAR(spectral_to_kernel(table, m, t), ref, 1e-8 * 2.0 * eta * wc / std::numbers::pi);
  }
}

TEST(SpectralKernel, DecaysFarPastCutoffTime) {
  // Smooth cutoff J = m eta w e^{-w/wc} gives eta(t) = (2 eta/pi) wc/(1 + wc^2 t^2).
  const double wc = 10.0;
  SpectralTable table;
  for (int i = 0; i <= 4000; ++i) {
    const double w = 0.025 * i;
    table.omega.push_back(w);
    table.density.push_back(w * std::exp(-w / wc));
  }
  const double peak = spectral_to_kernel(table, 1.0, 0.0);
  EXPECT_LT(std::abs(spectral_to_kernel(table, 1.0, 50.0 / wc)), 1e-3 * peak);
}

TEST(SpectralKernel, NarrowPeakGivesCosine) {
  // A bin of area A at w0: eta(t) -> (2 A/(pi m w0)) cos(w0 t) as the bin narrows.
  const double w0 = 3.0, m = 1.5;
  double previous = 1.0;
  for (double width : {0.1, 0.01, 0.001}) {
    SpectralTable t{{w0 - width, w0, w0 + width}, {0.0, 1.0 / width, 0.0}};
    const double area = 1.0;
    const double time = 2.0;
    const double ref = 2.0 * area / (std::numbers::pi * m * w0) * std::cos(w0 * time);
    const double err = std::abs(spectral_to_kernel(t, m, time) - ref);
    EXPECT_LT(err, previous);
    previous = err;
  }
  EXPECT_LT(previous, 1e-5);
}

TEST(SpectralKernel, ZeroDensityGivesZero) {
  SpectralTable t{{0.0, 1.0, 2.0}, {0.0, 0.0, 0.0}};
  for (double s : {0.0, 1.0, 10.0}) EXPECT_EQ(spectral_to_kernel(t, 1.0, s), 0.0);
}

TEST(Compose, TwoReservoirLaplaceForm) {
  const double ef = 1.3, es = 0.6, tau = 2.5;
  const std::vector<ReservoirSpec> specs = {ReservoirSpec::delta(ef, 1.0), ReservoirSpec::exponential(es, tau, 2.0)};
  const auto model = compose(specs, {});
  const auto eta = model.friction_laplace();
  for (double s : {0.0, 0.3, 4.0}) EXPECT_NEAR(eta(s), ef + es / (s * tau + 1.0), 1e-14);
  EXPECT_NEAR(model.correlator_laplace()(0.0), ef * 1.0 + es * 2.0, 1e-14);
  EXPECT_NEAR(model.total_friction(), ef + es, 1e-15);
}

TEST(Compose, EquilibriumAndAdditivity) {
  const std::vector<ReservoirSpec> eq = {ReservoirSpec::delta(2.0, 3.0)};
  const auto m = compose(eq, {});
  EXPECT_EQ(poly::degree(m.correlator_laplace().numerator()), 0);
  EXPECT_DOUBLE_EQ(m.correlator_laplace()(1.0), 6.0);

  const std::vector<ReservoirSpec> pair = {ReservoirSpec::exponential(1.0, 1.0, 0.7),
                                           ReservoirSpec::exponential(1.0, 1.0, 0.7)};
  const std::vector<ReservoirSpec> merged = {ReservoirSpec::exponential(2.0, 1.0, 0.7)};
  const auto a = compose(pair, {});
  const auto b = compose(merged, {});
  for (double t : {0.0, 0.5, 3.0}) {
    EXPECT_NEAR(a.friction(t), b.friction(t), 1e-15);
    EXPECT_NEAR(a.correlator(t), b.correlator(t), 1e-15);
  }
  EXPECT_EQ(a.common_denominator().denominator, b.common_denominator().denominator);
}

TEST(Compose, PointwiseAdditivityOfRandomSets) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<ReservoirSpec> A = {ReservoirSpec::delta(u(rng), u(rng)), ReservoirSpec::exponential(u(rng), u(rng), u(rng))};
    std::vector<ReservoirSpec> B = {ReservoirSpec::exponential(u(rng), u(rng), u(rng))};
    std::vector<ReservoirSpec> AB = A;
    AB.insert(AB.end(), B.begin(), B.end());
    const auto ma = compose(A, {}), mb = compose(B, {}), mab = compose(AB, {});
    EXPECT_NEAR(mab.delta_friction(), ma.delta_friction() + mb.delta_friction(), 1e-14);
    EXPECT_NEAR(mab.delta_noise(), ma.delta_noise() + mb.delta_noise(), 1e-13);
    for (double t : {0.0, 0.2, 1.0, 9.0}) {
      EXPECT_NEAR(mab.friction(t), ma.friction(t) + mb.friction(t), 1e-13);
      EXPECT_NEAR(mab.correlator(t), ma.correlator(t) + mb.correlator(t), 1e-13);
      EXPECT_GE(mab.friction(t), 0.0);
      EXPECT_GE(mab.correlator(t), 0.0);
    }
  }
}

TEST(Compose, FieldsAddNoiseOnly) {
  const std::vector<ReservoirSpec> amb = {ReservoirSpec::delta(0.5, 0.0)};
  const std::vector<FieldNoise> fields = {FieldNoise::delta(2.0, 3.0), FieldNoise::exponential(1.0, 4.0, 3.0)};
  const auto m = compose(amb, {}, fields);
  EXPECT_DOUBLE_EQ(m.delta_noise(), 18.0);
  EXPECT_DOUBLE_EQ(m.friction(0.0), 0.0);
  EXPECT_DOUBLE_EQ(m.correlator(0.0), 9.0 / 4.0);
}

TEST(Compose, TabulatedTransformMatchesKernel) {
  const std::vector<ReservoirSpec> specs = {ReservoirSpec::tabulated(ohmic(1.0, 1.0, 4.0, 8), 2.0)};
  const auto m = compose(specs, {}, {}, {20.0, 2001});
  EXPECT_FALSE(m.rational());
  EXPECT_NEAR(m.friction(0.0), 8.0 / std::numbers::pi, 1e-9);
  EXPECT_NEAR(m.correlator(1.0), 2.0 * m.friction(1.0), 1e-15);
  EXPECT_THROW(m.friction_laplace(), Error);
}

TEST(Compose, RejectsEmptyEnvironment) {
  try {
    compose(std::span<const ReservoirSpec>{}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyEnvironment);
  }
}

TEST(ReservoirSpec, ValidatesInvariants) {
  EXPECT_THROW(ReservoirSpec::delta(-1.0, 1.0), Error);
  EXPECT_THROW(ReservoirSpec::delta(1.0, -1.0), Error);
  EXPECT_THROW(ReservoirSpec::exponential(1.0, 0.0, 1.0), Error);
  EXPECT_THROW(ReservoirSpec::tabulated({{0.0, 2.0, 1.0}, {0.0, 1.0, 1.0}}, 1.0), Error);
  EXPECT_THROW(ReservoirSpec::tabulated({{0.0, 1.0}, {0.0, -1.0}}, 1.0), Error);
}
