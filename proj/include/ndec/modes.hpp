#pragma once

#include <complex>
#include <vector>

namespace ndec {

/// One exponential term Re(amplitude * exp(rate * t)). A complex-conjugate
/// pole pair is stored once with its amplitude doubled.
struct ExpMode {
  std::complex<double> amplitude;
  std::complex<double> rate;

  double value(double t) const;
};

/// f(t) = delta_weight * delta(t) + sum_j Re(c_j exp(p_j t)) on t >= 0.
/// Integrals start at 0-, so the atom at t = 0 is always counted in full.
struct ModeSum {
  double delta_weight = 0.0;
  std::vector<ExpMode> modes;

  /// Smooth part only (the atom is never evaluated pointwise).
  double smooth(double t) const;
  /// delta_weight + int_0^t smooth.
  double cumulative(double t) const;
  /// int_0^t (t - u) f(u) du, atom included.
  double ramp(double t) const;

  ModeSum& operator+=(const ModeSum& other);
  ModeSum scaled(double factor) const;
};

ModeSum operator+(ModeSum a, const ModeSum& b);

/// Smooth part of the causal convolution (a * b)(t) for t > 0. The product of
/// the two atoms is an atom of weight a.delta_weight * b.delta_weight and is
/// not part of this value.
double convolution_smooth(const ModeSum& a, const ModeSum& b, double t);

/// int_0^t (t - s) (a * b)(s) ds with every atom handled analytically.
double convolution_ramp(const ModeSum& a, const ModeSum& b, double t);

namespace detail {

/// int_0^1 v^k exp(x v) dv.
std::complex<double> exp_moment(int k, std::complex<double> x);
/// (exp(x) - 1) / x, stable near zero.
std::complex<double> phi1(std::complex<double> x);
/// (exp(x) - 1 - x) / x^2, stable near zero.
std::complex<double> phi2(std::complex<double> x);

}  // namespace detail
}  // namespace ndec
