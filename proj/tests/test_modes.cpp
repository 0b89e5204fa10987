#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "ndec/modes.hpp"

using namespace ndec;
using boost::math::quadrature::gauss_kronrod;

namespace {

double integrate(auto f, double a, double b) { return gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14); }

// Fixed composite rule for nested integrals of smooth integrands.
double integrate_fixed(auto f, double a, double b) {
  const int panels = 8;
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i)
    sum += boost::math::quadrature::gauss<double, 30>::integrate(f, a + h * i, a + h * (i + 1));
  return sum;
}

}  // namespace

TEST(ExpMoment, MatchesQuadratureOnBothBranches) {
  for (double x : {-30.0, -3.0, -0.5, 0.0, 1e-9, 1.5, 2.5}) {
    for (int k = 0; k < 6; ++k) {
      const double ref = integrate([&](double v) { return std::pow(v, k) * std::exp(x * v); }, 0.0, 1.0);
      EXPECT_NEAR(detail::exp_moment(k, x).real(), ref, 1e-13 * std::max(1.0, std::abs(ref))) << x << " " << k;
    }
  }
}

TEST(ModeSum, CumulativeAndRampMatchQuadrature) {
  ModeSum f{0.7, {{{1.3, 0.0}, {-0.4, 0.0}}, {{2.0, -1.0}, {-1.1, 2.3}}}};
  for (double t : {0.0, 0.01, 0.9, 7.0}) {
    const double cum = 0.7 + integrate([&](double u) { return f.smooth(u); }, 0.0, t);
    const double ramp = 0.7 * t + integrate([&](double u) { return (t - u) * f.smooth(u); }, 0.0, t);
    EXPECT_NEAR(f.cumulative(t), cum, 1e-12);
    EXPECT_NEAR(f.ramp(t), ramp, 1e-11);
  }
}

TEST(ModeSum, ConvolutionsMatchNestedQuadrature) {
  ModeSum a{0.5, {{{1.0, 0.0}, {-2.0, 0.0}}, {{0.3, 0.2}, {-0.5, 1.5}}}};
  ModeSum b{1.5, {{{0.8, 0.0}, {-2.0 + 1e-9, 0.0}}, {{-0.2, 0.0}, {-0.1, 0.0}}}};
  auto smooth_conv = [&](double s) {
    return a.delta_weight * b.smooth(s) + b.delta_weight * a.smooth(s) +
           integrate_fixed([&](double u) { return a.smooth(s - u) * b.smooth(u); }, 0.0, s);
  };
  for (double t : {0.05, 1.0, 4.0}) {
    EXPECT_NEAR(convolution_smooth(a, b, t), smooth_conv(t), 1e-11);
    const double ramp = a.delta_weight * b.delta_weight * t +
                        integrate_fixed([&](double s) { return (t - s) * smooth_conv(s); }, 0.0, t);
    EXPECT_NEAR(convolution_ramp(a, b, t), ramp, 1e-10 * std::max(1.0, ramp));
  }
}
