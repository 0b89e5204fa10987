#include "ndec/modes.hpp"

#include <array>
#include <cmath>

namespace ndec {

using cplx = std::complex<double>;

namespace detail {

cplx exp_moment(int k, cplx x) {
  if (std::abs(x) <= 2.0) {
    // sum_n x^n / (n! (n + k + 1))
    cplx term = 1.0;
    cplx sum = 1.0 / double(k + 1);
    for (int n = 1; n < 40; ++n) {
      term *= x / double(n);
      const cplx add = term / double(n + k + 1);
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  const cplx ex = std::exp(x);
  cplx value = (ex - 1.0) / x;
  for (int j = 1; j <= k; ++j) value = (ex - double(j) * value) / x;
  return value;
}

cplx phi1(cplx x) { return exp_moment(0, x); }

cplx phi2(cplx x) { return exp_moment(0, x) - exp_moment(1, x); }

}  // namespace detail

namespace {

// f_n(z) = t^(n+2) int_0^1 (1 - v) v^n exp(z t v) dv, the n-th z-derivative of
// the ramp integral int_0^t (t - u) exp(z u) du.
cplx ramp_derivative(int n, cplx z, double t) {
  const cplx x = z * t;
  return std::pow(t, n + 2) * (detail::exp_moment(n, x) - detail::exp_moment(n + 1, x));
}

cplx ramp_exp(cplx z, double t) { return ramp_derivative(0, z, t); }

// int_0^t (t - s) int_0^s exp(p (s - u)) exp(q u) du ds
cplx ramp_of_exp_convolution(cplx p, cplx q, double t) {
  const cplx h = q - p;
  if (std::abs(h) * t > 0.05) return (ramp_exp(q, t) - ramp_exp(p, t)) / h;
  // Divided difference expanded about the midpoint.
  const cplx m = 0.5 * (p + q);
  const cplx h2 = h * h;
  return ramp_derivative(1, m, t) + ramp_derivative(3, m, t) * h2 / 24.0 +
         ramp_derivative(5, m, t) * h2 * h2 / 1920.0;
}

// int_0^t exp(p (t - u)) exp(q u) du
cplx exp_convolution(cplx p, cplx q, double t) {
  const cplx m = 0.5 * (p + q);
  const cplx half = 0.5 * (q - p) * t;
  const cplx shape = std::abs(half) < 1e-8 ? cplx(1.0) : std::sinh(half) / half;
  return t * std::exp(m * t) * shape;
}

}  // namespace

double ExpMode::value(double t) const { return std::real(amplitude * std::exp(rate * t)); }

double ModeSum::smooth(double t) const {
  double sum = 0.0;
  for (const auto& m : modes) sum += m.value(t);
  return sum;
}

double ModeSum::cumulative(double t) const {
  double sum = delta_weight;
  for (const auto& m : modes) sum += std::real(m.amplitude * t * detail::phi1(m.rate * t));
  return sum;
}

double ModeSum::ramp(double t) const {
  double sum = delta_weight * t;
  for (const auto& m : modes) sum += std::real(m.amplitude * ramp_exp(m.rate, t));
  return sum;
}

ModeSum& ModeSum::operator+=(const ModeSum& other) {
  delta_weight += other.delta_weight;
  modes.insert(modes.end(), other.modes.begin(), other.modes.end());
  return *this;
}

ModeSum ModeSum::scaled(double factor) const {
  ModeSum out{delta_weight * factor, modes};
  for (auto& m : out.modes) m.amplitude *= factor;
  return out;
}

ModeSum operator+(ModeSum a, const ModeSum& b) {
  a += b;
  return a;
}

double convolution_smooth(const ModeSum& a, const ModeSum& b, double t) {
  double sum = a.delta_weight * b.smooth(t) + b.delta_weight * a.smooth(t);
  // Re(X) Re(Y) = (Re(X Y) + Re(X conj(Y))) / 2
  for (const auto& ma : a.modes) {
    for (const auto& mb : b.modes) {
      sum += 0.5 * std::real(ma.amplitude * mb.amplitude * exp_convolution(ma.rate, mb.rate, t));
      sum += 0.5 * std::real(ma.amplitude * std::conj(mb.amplitude) *
                             exp_convolution(ma.rate, std::conj(mb.rate), t));
    }
  }
  return sum;
}

double convolution_ramp(const ModeSum& a, const ModeSum& b, double t) {
  double sum = a.delta_weight * b.delta_weight * t;
  for (const auto& mb : b.modes) sum += a.delta_weight * std::real(mb.amplitude * ramp_exp(mb.rate, t));
  for (const auto& ma : a.modes) sum += b.delta_weight * std::real(ma.amplitude * ramp_exp(ma.rate, t));
  for (const auto& ma : a.modes) {
    for (const auto& mb : b.modes) {
      sum += 0.5 * std::real(ma.amplitude * mb.amplitude *
                             ramp_of_exp_convolution(ma.rate, mb.rate, t));
      sum += 0.5 * std::real(ma.amplitude * std::conj(mb.amplitude) *
                             ramp_of_exp_convolution(ma.rate, std::conj(mb.rate), t));
    }
  }
  return sum;
}

}  // namespace ndec
