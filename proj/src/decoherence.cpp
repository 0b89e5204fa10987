#include "ndec/decoherence.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>

#include "ndec/error.hpp"

namespace ndec {

namespace {

using boost::math::quadrature::gauss_kronrod;

void check_time(double t) { require(t >= 0.0, Errc::NegativeTime, "time must be >= 0"); }

// int_0^t (t - u) C_tab(u) du; the integrand is quadratic on every
// tabulation interval, so one Gauss-Kronrod panel per interval is exact.
double tabulated_ramp(const TabulatedKernel& tab, double t) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < tab.time.size() && tab.time[i] < t; ++i) {
    const double lo = tab.time[i];
    const double hi = std::min(tab.time[i + 1], t);
    auto f = [&](double u) { return (t - u) * tab.noise_at(u); };
    sum += gauss_kronrod<double, 15>::integrate(f, lo, hi, 0, 0.0);
  }
  return sum;
}

double total_noise(const NoiseModel& model) {
  double sum = model.delta_noise();
  for (const auto& m : model.exp_modes()) sum += m.noise;
  if (const auto& tab = model.tabulated()) {
    for (std::size_t i = 0; i + 1 < tab->time.size(); ++i)
      sum += 0.5 * (tab->time[i + 1] - tab->time[i]) * (tab->noise[i] + tab->noise[i + 1]);
  }
  return sum;
}

}  // namespace

void CatState::validate() const {
  require(std::isfinite(separation) && separation > 0.0, Errc::InvalidArgument, "separation must be > 0");
  require(std::isfinite(width) && width > 0.0, Errc::InvalidArgument, "packet width must be > 0");
  require(std::isfinite(mass) && mass > 0.0, Errc::InvalidArgument, "mass must be > 0");
  require(std::isfinite(frequency) && frequency >= 0.0, Errc::InvalidArgument, "frequency must be >= 0");
}

std::string_view method_name(ContrastMethod m) {
  switch (m) {
    case ContrastMethod::ClosedForm: return "closed_form";
    case ContrastMethod::Quadrature: return "quadrature";
    case ContrastMethod::ExactGaussian: return "exact";
    case ContrastMethod::GridPDE: return "grid";
  }
  return "unknown";
}

double sigma_pp(const NoiseModel& model, double t) {
  check_time(t);
  ModeSum rational{model.delta_noise(), {}};
  for (const auto& m : model.exp_modes())
    if (m.noise != 0.0) rational.modes.push_back({m.noise / m.corr_time, -1.0 / m.corr_time});
  double ramp = rational.ramp(t);
  if (const auto& tab = model.tabulated()) ramp += tabulated_ramp(*tab, t);
  return 2.0 * ramp;
}

double sigma_pp_quadrature(const NoiseModel& model, double t) {
  check_time(t);
  if (t == 0.0) return 0.0;
  auto f = [&](double u) { return (t - u) * model.correlator(u); };
  std::vector<double> breaks = {0.0, t};
  if (const auto& tab = model.tabulated())
    for (double node : tab->time)
      if (node > 0.0 && node < t) breaks.push_back(node);
  std::sort(breaks.begin(), breaks.end());
  double sum = 0.0;
  double error = 0.0;
  double l1 = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double err = 0.0;
    double abs = 0.0;
    sum += gauss_kronrod<double, 31>::integrate(f, breaks[i], breaks[i + 1], 20, 1e-13, &err, &abs);
    error += err;
    l1 += abs;
  }
  require(error <= 1e-10 * std::max(l1, 1e-300) || error == 0.0, Errc::QuadratureNonConvergence,
          "momentum variance quadrature missed its tolerance");
  return 2.0 * (model.delta_noise() * t + sum);
}

double a_int(const CatState& cat, const NoiseModel& model, double t) {
  cat.validate();
  return 0.5 * cat.separation * cat.separation * sigma_pp(model, t);
}

double a_int_via_temperature(const CatState& cat, const ModeSum& eta, const ModeSum& temperature, double t) {
  cat.validate();
  check_time(t);
  return cat.separation * cat.separation * convolution_ramp(eta, temperature, t);
}

ContrastCurve contrast_curve(const CatState& cat, const NoiseModel& model, std::span<const double> times,
                             ContrastMethod method) {
  cat.validate();
  require(method == ContrastMethod::ClosedForm || method == ContrastMethod::Quadrature, Errc::InvalidArgument,
          "contrast_curve evaluates the closed-form or quadrature paths only");
  require(!times.empty() && times.front() == 0.0, Errc::InvalidArgument, "time grid must start at 0");
  for (std::size_t i = 1; i < times.size(); ++i)
    require(times[i] > times[i - 1], Errc::InvalidArgument, "time grid must increase strictly");

  ContrastCurve curve;
  curve.method = model.rational() ? method : ContrastMethod::Quadrature;
  const double half_d2 = 0.5 * cat.separation * cat.separation;
  for (double t : times) {
    const double s = method == ContrastMethod::Quadrature ? sigma_pp_quadrature(model, t) : sigma_pp(model, t);
    const double a = half_d2 * s;
    curve.time.push_back(t);
    curve.a_int.push_back(a);
    curve.contrast.push_back(std::exp(-a));
  }
  return curve;
}

double coherence_time(const CatState& cat, const NoiseModel& model) {
  cat.validate();
  const double noise = total_noise(model);
  require(noise > 0.0, Errc::NoDecoherence, "model carries no noise");
  const double d2 = cat.separation * cat.separation;
  if (model.exp_modes().empty() && !model.tabulated()) return 1.0 / (d2 * model.delta_noise());

  auto excess = [&](double t) { return a_int(cat, model, t) - 1.0; };
  double hi = 1.0 / (d2 * noise);
  double lo = 0.0;
  for (int i = 0; excess(hi) < 0.0; ++i) {
    require(i < 200, Errc::NoDecoherence, "attenuation exponent stays below 1");
    lo = hi;
    hi *= 2.0;
  }
  auto tol = [](double a, double b) { return std::abs(b - a) <= 2e-11 * std::max(std::abs(a), std::abs(b)); };
  const auto [a, b] = boost::math::tools::bisect(excess, lo, hi, tol);
  return 0.5 * (a + b);
}

}  // namespace ndec
