#include "ndec/laplace.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "ndec/error.hpp"

namespace ndec {

using cplx = std::complex<double>;

namespace poly {

Polynomial trimmed(Polynomial p) {
  while (p.size() > 1 && p.back() == 0.0) p.pop_back();
  if (p.empty()) p.push_back(0.0);
  return p;
}

int degree(const Polynomial& p) {
  const auto t = trimmed(p);
  return (t.size() == 1 && t[0] == 0.0) ? -1 : int(t.size()) - 1;
}

Polynomial add(const Polynomial& a, const Polynomial& b) {
  Polynomial out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return trimmed(std::move(out));
}

Polynomial multiply(const Polynomial& a, const Polynomial& b) {
  Polynomial out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return trimmed(std::move(out));
}

Polynomial scale(const Polynomial& p, double factor) {
  Polynomial out = p;
  for (auto& c : out) c *= factor;
  return trimmed(std::move(out));
}

Polynomial derivative(const Polynomial& p) {
  if (p.size() <= 1) return {0.0};
  Polynomial out(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) out[i - 1] = double(i) * p[i];
  return trimmed(std::move(out));
}

Polynomial divide(const Polynomial& numerator, const Polynomial& divisor) {
  const auto n = trimmed(numerator);
  const auto d = trimmed(divisor);
  require(degree(d) >= 0, Errc::InvalidArgument, "polynomial division by zero");
  if (degree(n) < degree(d)) return {0.0};
  Polynomial rem = n;
  Polynomial quo(n.size() - d.size() + 1, 0.0);
  for (std::size_t k = quo.size(); k-- > 0;) {
    const double c = rem[k + d.size() - 1] / d.back();
    quo[k] = c;
    for (std::size_t j = 0; j < d.size(); ++j) rem[k + j] -= c * d[j];
  }
  return trimmed(std::move(quo));
}

cplx evaluate(const Polynomial& p, cplx s) {
  cplx acc = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * s + p[i];
  return acc;
}

std::vector<cplx> roots(const Polynomial& p_in) {
  const auto p = trimmed(p_in);
  const int n = degree(p);
  require(n >= 0, Errc::InvalidArgument, "roots of the zero polynomial");
  std::vector<cplx> out;
  std::size_t low = 0;
  while (low < p.size() && p[low] == 0.0) {
    out.emplace_back(0.0);
    ++low;
  }
  const Polynomial q(p.begin() + long(low), p.end());
  const int m = int(q.size()) - 1;
  if (m <= 0) return out;

  // Rescale s = lambda u so the coefficients are of comparable size.
  const double lambda = std::pow(std::abs(q.front() / q.back()), 1.0 / m);
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
  for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < m; ++i)
    companion(i, m - 1) = -q[std::size_t(i)] * std::pow(lambda, i - m) / q.back();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  const auto dq = derivative(q);
  for (int i = 0; i < m; ++i) {
    cplx z = solver.eigenvalues()[i] * lambda;
    for (int it = 0; it < 8; ++it) {
      const cplx f = evaluate(q, z);
      const cplx df = evaluate(dq, z);
      if (df == 0.0) break;
      const cplx step = f / df;
      const cplx next = z - step;
      if (std::abs(evaluate(q, next)) >= std::abs(f)) break;
      z = next;
    }
    if (std::abs(z.imag()) <= 1e-14 * std::abs(z)) z = {z.real(), 0.0};
    out.push_back(z);
  }
  return out;
}

}  // namespace poly

namespace {

bool coincide(cplx a, cplx b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= 1e-12 * scale;
}

}  // namespace

LaplaceRational::LaplaceRational(Polynomial numerator, Polynomial denominator)
    : num_(poly::trimmed(std::move(numerator))), den_(poly::trimmed(std::move(denominator))) {
  require(poly::degree(den_) >= 0, Errc::InvalidArgument, "zero denominator");
  if (poly::degree(num_) < 0) {
    num_ = {0.0};
    den_ = {1.0};
    return;
  }
  if (poly::degree(num_) == 0 || poly::degree(den_) == 0) return;

  const auto num_roots = poly::roots(num_);
  auto den_roots = poly::roots(den_);
  std::vector<bool> used(den_roots.size(), false);
  Polynomial common = {1.0};
  for (const auto& r : num_roots) {
    if (r.imag() < 0.0) continue;
    for (std::size_t j = 0; j < den_roots.size(); ++j) {
      if (used[j] || den_roots[j].imag() < 0.0 || !coincide(r, den_roots[j])) continue;
      used[j] = true;
      const cplx z = 0.5 * (r + den_roots[j]);
      if (z.imag() == 0.0)
        common = poly::multiply(common, {-z.real(), 1.0});
      else
        common = poly::multiply(common, {std::norm(z), -2.0 * z.real(), 1.0});
      break;
    }
  }
  if (poly::degree(common) > 0) {
    num_ = poly::divide(num_, common);
    den_ = poly::divide(den_, common);
  }
}

LaplaceRational LaplaceRational::constant(double value) { return {{value}, {1.0}}; }

cplx LaplaceRational::operator()(cplx s) const { return poly::evaluate(num_, s) / poly::evaluate(den_, s); }

double LaplaceRational::operator()(double s) const { return std::real((*this)(cplx(s))); }

bool LaplaceRational::proper() const { return poly::degree(num_) <= poly::degree(den_); }

double LaplaceRational::at_infinity() const {
  const int dn = poly::degree(num_);
  const int dd = poly::degree(den_);
  require(dn <= dd, Errc::InvalidArgument, "improper rational function has no finite limit");
  return dn < dd ? 0.0 : num_.back() / den_.back();
}

std::vector<cplx> LaplaceRational::poles() const { return poly::roots(den_); }

LaplaceRational operator+(const LaplaceRational& a, const LaplaceRational& b) {
  if (a.den_ == b.den_) return {poly::add(a.num_, b.num_), a.den_};
  return {poly::add(poly::multiply(a.num_, b.den_), poly::multiply(b.num_, a.den_)),
          poly::multiply(a.den_, b.den_)};
}

LaplaceRational operator*(const LaplaceRational& a, const LaplaceRational& b) {
  return {poly::multiply(a.num_, b.num_), poly::multiply(a.den_, b.den_)};
}

LaplaceRational operator/(const LaplaceRational& a, const LaplaceRational& b) {
  require(poly::degree(b.num_) >= 0, Errc::InvalidArgument, "division by a zero rational function");
  if (a.den_ == b.den_) return {a.num_, b.num_};
  return {poly::multiply(a.num_, b.den_), poly::multiply(a.den_, b.num_)};
}

double talbot_inverse(const LaplaceFunction& transform, double t, int nodes) {
  require(t > 0.0, Errc::InvalidArgument, "contour inversion needs t > 0");
  require(nodes >= 2, Errc::InvalidArgument, "contour inversion needs at least two nodes");
  const double m = nodes;
  const double r = 2.0 * m / (5.0 * t);
  double sum = 0.5 * std::real(transform(cplx(r))) * std::exp(r * t);
  for (int k = 1; k < nodes; ++k) {
    const double theta = k * std::numbers::pi / m;
    const double cot = 1.0 / std::tan(theta);
    const cplx s = r * theta * cplx(cot, 1.0);
    const double sigma = theta + (theta * cot - 1.0) * cot;
    sum += std::real(std::exp(t * s) * transform(s) * cplx(1.0, sigma));
  }
  return r / m * sum;
}

}  // namespace ndec
