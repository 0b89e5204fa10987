#include "ndec/efftemp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ndec/error.hpp"

namespace ndec {

using cplx = std::complex<double>;

double EffectiveTemperature::operator()(double t) const {
  require(t >= 0.0, Errc::NegativeTime, "T_eff is defined for t >= 0");
  if (provenance == Provenance::Numerical) {
    if (grid_time.empty()) return asymptote;
    if (t >= grid_time.back()) return grid_value.back();
    const double h = grid_time[1] - grid_time[0];
    const auto j = std::min(std::size_t(t / h), grid_time.size() - 2);
    const double w = (t - grid_time[j]) / h;
    return grid_value[j] + w * (grid_value[j + 1] - grid_value[j]);
  }
  double sum = delta_weight;
  for (const auto& m : modes) sum += std::real(m.amplitude * t * detail::phi1(m.rate * t));
  return sum;
}

double EffectiveTemperature::rate(double t) const {
  require(t >= 0.0, Errc::NegativeTime, "T(t) is defined for t >= 0");
  if (provenance == Provenance::Numerical) {
    if (grid_time.size() < 2 || t >= grid_time.back()) return 0.0;
    const double h = grid_time[1] - grid_time[0];
    const auto j = std::min(std::size_t(t / h), grid_time.size() - 2);
    return (grid_value[j + 1] - grid_value[j]) / h;
  }
  double sum = 0.0;
  for (const auto& m : modes) sum += m.value(t);
  return sum;
}

ModeSum EffectiveTemperature::series() const {
  require(provenance != Provenance::Numerical, Errc::TabulatedNotRational,
          "numerical effective temperature has no mode expansion");
  return {delta_weight, modes};
}

LaplaceRational effective_temperature_laplace(const NoiseModel& model) {
  const auto form = model.common_denominator();
  require(poly::degree(form.friction) >= 0, Errc::ZeroFriction, "total friction kernel vanishes");
  return {form.noise, form.friction};
}

EffectiveTemperature invert_laplace(const LaplaceRational& transform) {
  require(transform.proper(), Errc::InvalidArgument,
          "T[s] grows at large s; the noise has a stronger atom than the friction");
  EffectiveTemperature out;
  out.provenance = Provenance::PartialFraction;
  out.delta_weight = transform.at_infinity();
  const auto& den = transform.denominator();
  const auto rest = poly::add(transform.numerator(), poly::scale(den, -out.delta_weight));

  const auto poles = transform.poles();
  for (std::size_t i = 0; i < poles.size(); ++i) {
    const double scale = std::max(std::abs(poles[i]), 1e-300);
    require(poles[i].real() <= 1e-12 * scale, Errc::UnstablePole, "T[s] has a pole with positive real part");
    for (std::size_t j = i + 1; j < poles.size(); ++j) {
      const double pair_scale = std::max({std::abs(poles[i]), std::abs(poles[j]), 1e-300});
      require(std::abs(poles[i] - poles[j]) > 1e-8 * pair_scale, Errc::RepeatedPole,
              "T[s] has a repeated pole");
    }
  }

  // The top coefficient of rest cancels analytically; drop its rounding residue.
  Polynomial numerator = rest;
  if (numerator.size() >= den.size()) numerator.resize(den.size() - 1);
  if (numerator.empty()) numerator.push_back(0.0);
  const bool zero_rest = std::all_of(numerator.begin(), numerator.end(), [](double c) { return c == 0.0; });

  const auto dden = poly::derivative(den);
  if (!zero_rest) {
    for (const auto& p : poles) {
      if (p.imag() < 0.0) continue;
      const cplx residue = poly::evaluate(numerator, p) / poly::evaluate(dden, p);
      out.modes.push_back({p.imag() > 0.0 ? 2.0 * residue : cplx(residue.real(), 0.0), p});
    }
  }
  const cplx at_zero = poly::evaluate(den, 0.0);
  out.asymptote = at_zero != 0.0 ? transform(0.0) : std::numeric_limits<double>::infinity();
  return out;
}

namespace {

// Solves a y(t) + int_0^t k(t - u) y(u) du = g(t) on t_n = n h by the
// trapezoidal product rule.
std::vector<double> solve_volterra(double a, const std::vector<double>& k, const std::vector<double>& g,
                                   double h) {
  const std::size_t n = g.size();
  std::vector<double> y(n, 0.0);
  const double diag = a + 0.5 * h * k[0];
  require(diag != 0.0, Errc::ZeroFriction, "Volterra equation is singular");
  y[0] = g[0] / a;
  for (std::size_t i = 1; i < n; ++i) {
    double acc = 0.5 * k[i] * y[0];
    for (std::size_t j = 1; j < i; ++j) acc += k[i - j] * y[j];
    y[i] = (g[i] - h * acc) / diag;
  }
  return y;
}

// T_eff on a uniform grid of `steps` intervals over [0, t_max].
std::vector<double> volterra_t_eff(const NoiseModel& model, double t_max, std::size_t steps) {
  const double h = t_max / double(steps);
  std::vector<double> k(steps + 1), g(steps + 1);
  const auto& tab = model.tabulated();
  if (model.delta_friction() > 0.0) {
    // int_{0-}^t C = eta_delta T_eff(t) + int_0^t eta_s(t - u) T_eff(u) du
    double cumulative = model.delta_noise();
    g[0] = cumulative;
    k[0] = model.friction(0.0);
    for (std::size_t i = 1; i <= steps; ++i) {
      const double t = h * double(i);
      k[i] = model.friction(t);
      // tabulated part by trapezoid; exponential parts in closed form below
      if (tab) cumulative += 0.5 * h * (tab->noise_at(t) + tab->noise_at(t - h));
      g[i] = cumulative;
    }
    for (const auto& m : model.exp_modes())
      for (std::size_t i = 0; i <= steps; ++i)
        g[i] += m.noise * (1.0 - std::exp(-h * double(i) / m.corr_time));
    return solve_volterra(model.delta_friction(), k, g, h);
  }

  // Without a Markovian part differentiate once:
  // C_s(t) = eta_s(0) T_eff(t) + int_0^t eta_s'(t - u) T_eff(u) du
  require(model.delta_noise() == 0.0, Errc::InvalidArgument,
          "white noise without Markovian friction gives an unbounded T[s]");
  const double a = model.friction(0.0);
  require(a > 0.0, Errc::ZeroFriction, "friction kernel vanishes at t = 0");
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = h * double(i);
    g[i] = model.correlator(t);
    double slope = 0.0;
    for (const auto& m : model.exp_modes())
      slope -= m.friction / (m.corr_time * m.corr_time) * std::exp(-t / m.corr_time);
    if (tab) {
      const double lo = std::max(0.0, t - 0.5 * h);
      const double hi = lo + h;
      slope += (tab->friction_at(hi) - tab->friction_at(lo)) / h;
    }
    k[i] = slope;
  }
  return solve_volterra(a, k, g, h);
}

}  // namespace

EffectiveTemperature effective_temperature(const NoiseModel& model, const VolterraOptions& options) {
  if (model.rational()) return invert_laplace(effective_temperature_laplace(model));

  const double eta0 = std::real(model.friction_transform(0.0));
  require(eta0 > 0.0, Errc::ZeroFriction, "total friction vanishes");
  double t_max = options.t_max;
  if (t_max <= 0.0) t_max = model.tabulated()->time.back();
  for (const auto& m : model.exp_modes()) t_max = std::max(t_max, 10.0 * m.corr_time);

  std::size_t steps = options.initial_steps;
  auto coarse = volterra_t_eff(model, t_max, steps);
  for (;;) {
    require(2 * steps <= options.max_steps, Errc::QuadratureNonConvergence,
            "effective temperature did not converge under step halving");
    auto fine = volterra_t_eff(model, t_max, 2 * steps);
    double err = 0.0;
    double size = 0.0;
    std::vector<double> extrapolated(coarse.size());
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      extrapolated[i] = (4.0 * fine[2 * i] - coarse[i]) / 3.0;
      err = std::max(err, std::abs(fine[2 * i] - coarse[i]) / 3.0);
      size = std::max(size, std::abs(fine[2 * i]));
    }
    steps *= 2;
    if (err <= options.tolerance * std::max(size, 1e-300)) {
      EffectiveTemperature out;
      out.provenance = Provenance::Numerical;
      out.asymptote = std::real(model.correlator_transform(0.0)) / eta0;
      out.delta_weight = model.delta_friction() > 0.0 ? model.delta_noise() / model.delta_friction() : 0.0;
      out.grid_value = std::move(extrapolated);
      out.grid_time.resize(out.grid_value.size());
      for (std::size_t i = 0; i < out.grid_time.size(); ++i)
        out.grid_time[i] = t_max * double(i) / double(out.grid_time.size() - 1);
      return out;
    }
    coarse = std::move(fine);
  }
}

double t_eff(const NoiseModel& model, double t) { return effective_temperature(model)(t); }

double two_reservoir_t_eff(double eta_f, double T_f, double eta_s, double T_s, double tau, double t) {
  require(eta_f > 0.0 && eta_s >= 0.0 && tau > 0.0, Errc::InvalidArgument,
          "needs eta_f > 0, eta_s >= 0, tau > 0");
  require(t >= 0.0, Errc::NegativeTime, "T_eff is defined for t >= 0");
  const double eta = eta_f + eta_s;
  return (eta_f * T_f + eta_s * T_s) / eta + eta_s / eta * (T_f - T_s) * std::exp(-eta / eta_f * t / tau);
}

EffectiveTemperature two_reservoir_effective_temperature(double eta_f, double T_f, double eta_s, double T_s,
                                                         double tau) {
  require(eta_f > 0.0 && eta_s >= 0.0 && tau > 0.0, Errc::InvalidArgument,
          "needs eta_f > 0, eta_s >= 0, tau > 0");
  const double eta = eta_f + eta_s;
  const double rate = eta / (eta_f * tau);
  EffectiveTemperature out;
  out.provenance = Provenance::ClosedForm;
  out.delta_weight = T_f;
  out.asymptote = (eta_f * T_f + eta_s * T_s) / eta;
  const double jump = eta_s / eta * (T_f - T_s);
  if (jump != 0.0) out.modes.push_back({cplx(-rate * jump, 0.0), cplx(-rate, 0.0)});
  return out;
}

double engineered_t_eff(double E1sq, double E2sq, double tau, double eta, double charge, double t,
                        double ambient) {
  require(eta > 0.0 && tau > 0.0, Errc::InvalidArgument, "needs eta > 0 and tau > 0");
  require(E1sq >= 0.0 && E2sq >= 0.0, Errc::InvalidArgument, "field intensities must be >= 0");
  require(t >= 0.0, Errc::NegativeTime, "T_eff is defined for t >= 0");
  return ambient + charge * charge / eta * (E1sq + E2sq * -std::expm1(-t / tau));
}

}  // namespace ndec
