#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace ndec {

/// Real polynomial, coefficients in ascending powers of s.
using Polynomial = std::vector<double>;

namespace poly {

Polynomial trimmed(Polynomial p);
int degree(const Polynomial& p);
Polynomial add(const Polynomial& a, const Polynomial& b);
Polynomial multiply(const Polynomial& a, const Polynomial& b);
Polynomial scale(const Polynomial& p, double factor);
Polynomial derivative(const Polynomial& p);
/// Quotient of long division; the remainder is dropped.
Polynomial divide(const Polynomial& numerator, const Polynomial& divisor);
std::complex<double> evaluate(const Polynomial& p, std::complex<double> s);
/// Companion-matrix eigenvalues refined by Newton steps.
std::vector<std::complex<double>> roots(const Polynomial& p);

}  // namespace poly

/// Ratio of real polynomials in the Laplace variable s. Common roots are
/// cancelled at construction (roots coinciding to 1e-12 relative).
class LaplaceRational {
 public:
  LaplaceRational(Polynomial numerator, Polynomial denominator);

  static LaplaceRational constant(double value);

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }

  std::complex<double> operator()(std::complex<double> s) const;
  double operator()(double s) const;

  /// lim s -> infinity; requires deg(num) <= deg(den).
  double at_infinity() const;
  bool proper() const;
  std::vector<std::complex<double>> poles() const;

  friend LaplaceRational operator+(const LaplaceRational& a, const LaplaceRational& b);
  friend LaplaceRational operator*(const LaplaceRational& a, const LaplaceRational& b);
  friend LaplaceRational operator/(const LaplaceRational& a, const LaplaceRational& b);

 private:
  Polynomial num_;
  Polynomial den_;
};

using LaplaceFunction = std::function<std::complex<double>(std::complex<double>)>;

/// Fixed-Talbot inversion: f(t) from F(s) by trapezoidal quadrature on a
/// deformed Bromwich contour. Requires t > 0 and singularities of F close
/// to the negative real axis.
double talbot_inverse(const LaplaceFunction& transform, double t, int nodes = 32);

}  // namespace ndec
