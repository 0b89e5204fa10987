#include "ndec/kernels.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <numbers>

#include "ndec/error.hpp"

namespace ndec {

using cplx = std::complex<double>;

namespace {

double interpolate(const std::vector<double>& x, const std::vector<double>& y, double at) {
  if (x.empty() || at < x.front() || at > x.back()) return 0.0;
  auto hi = std::upper_bound(x.begin(), x.end(), at);
  if (hi == x.end()) return y.back();
  const auto j = std::size_t(hi - x.begin());
  const double w = (at - x[j - 1]) / (x[j] - x[j - 1]);
  return y[j - 1] + w * (y[j] - y[j - 1]);
}

// Laplace transform of the piecewise-linear interpolant of y on grid x.
cplx piecewise_linear_transform(const std::vector<double>& x, const std::vector<double>& y, cplx s) {
  cplx sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double h = x[i + 1] - x[i];
    const cplx z = -s * h;
    sum += h * std::exp(-s * x[i]) *
           (y[i] * detail::exp_moment(0, z) + (y[i + 1] - y[i]) * detail::exp_moment(1, z));
  }
  return sum;
}

void check_time(double t) { require(t >= 0.0, Errc::NegativeTime, "kernels are defined for t >= 0"); }

// Groups (weight, tau) pairs by correlation time so the common denominator has
// one factor per distinct tau.
std::map<double, std::pair<double, double>> grouped_modes(const std::vector<ExpComponent>& modes) {
  std::map<double, std::pair<double, double>> out;
  for (const auto& m : modes) {
    auto& slot = out[m.corr_time];
    slot.first += m.friction;
    slot.second += m.noise;
  }
  return out;
}

}  // namespace

double SpectralTable::operator()(double w) const { return interpolate(omega, density, w); }

ReservoirSpec ReservoirSpec::delta(double coupling, double temperature) {
  ReservoirSpec r;
  r.kind = KernelKind::Delta;
  r.coupling = coupling;
  r.temperature = temperature;
  r.validate();
  return r;
}

ReservoirSpec ReservoirSpec::exponential(double coupling, double corr_time, double temperature) {
  ReservoirSpec r;
  r.kind = KernelKind::Exponential;
  r.coupling = coupling;
  r.corr_time = corr_time;
  r.temperature = temperature;
  r.validate();
  return r;
}

ReservoirSpec ReservoirSpec::tabulated(SpectralTable table, double temperature) {
  ReservoirSpec r;
  r.kind = KernelKind::Tabulated;
  r.table = std::move(table);
  r.temperature = temperature;
  r.validate();
  return r;
}

void ReservoirSpec::validate() const {
  require(std::isfinite(coupling) && coupling >= 0.0, Errc::InvalidArgument, "coupling must be >= 0");
  require(std::isfinite(temperature) && temperature >= 0.0, Errc::InvalidArgument,
          "temperature must be >= 0");
  if (kind == KernelKind::Exponential)
    require(std::isfinite(corr_time) && corr_time > 0.0, Errc::InvalidArgument,
            "exponential kernel needs corr_time > 0");
  if (kind == KernelKind::Tabulated) {
    const auto& w = table.omega;
    require(w.size() >= 2 && w.size() == table.density.size(), Errc::InvalidArgument,
            "spectral table needs at least two (omega, J) samples");
    require(w.front() >= 0.0, Errc::InvalidArgument, "spectral table frequencies must be >= 0");
    for (std::size_t i = 1; i < w.size(); ++i)
      require(w[i] > w[i - 1], Errc::InvalidArgument, "spectral table frequencies must increase strictly");
    for (double j : table.density)
      require(std::isfinite(j) && j >= 0.0, Errc::InvalidArgument, "spectral density must be >= 0");
    require(w.front() > 0.0 || table.density.front() == 0.0, Errc::InvalidArgument,
            "J(0) must vanish for the kernel integral to converge");
  }
}

FieldNoise FieldNoise::delta(double intensity, double charge) {
  FieldNoise f;
  f.kind = KernelKind::Delta;
  f.intensity = intensity;
  f.charge = charge;
  f.validate();
  return f;
}

FieldNoise FieldNoise::exponential(double intensity, double corr_time, double charge) {
  FieldNoise f;
  f.kind = KernelKind::Exponential;
  f.intensity = intensity;
  f.corr_time = corr_time;
  f.charge = charge;
  f.validate();
  return f;
}

void FieldNoise::validate() const {
  require(kind != KernelKind::Tabulated, Errc::InvalidArgument, "field noise is delta or exponential");
  require(std::isfinite(intensity) && intensity >= 0.0, Errc::InvalidArgument,
          "field intensity must be >= 0");
  require(std::isfinite(charge), Errc::InvalidArgument, "charge must be finite");
  if (kind == KernelKind::Exponential)
    require(std::isfinite(corr_time) && corr_time > 0.0, Errc::InvalidArgument,
            "exponential field needs corr_time > 0");
}

double TabulatedKernel::friction_at(double t) const { return interpolate(time, friction, t); }
double TabulatedKernel::noise_at(double t) const { return interpolate(time, noise, t); }

double spectral_to_kernel(const SpectralTable& table, double mass, double t) {
  check_time(t);
  require(mass > 0.0, Errc::InvalidArgument, "mass must be > 0");
  const auto& w = table.omega;
  const auto& J = table.density;
  using boost::math::quadrature::gauss_kronrod;

  double total = 0.0;
  double l1 = 0.0;
  double error = 0.0;
  std::size_t panels = 0;
  constexpr std::size_t panel_budget = 2'000'000;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const double a = w[i];
    const double b = w[i + 1];
    if (J[i] == 0.0 && J[i + 1] == 0.0) continue;
    const double slope = (J[i + 1] - J[i]) / (b - a);
    auto f = [&](double v) {
      const double over_w = (a == 0.0) ? slope : (J[i] + slope * (v - a)) / v;
      return over_w * std::cos(v * t);
    };
    // Panels no wider than half a period of cos(w t).
    const std::size_t n = std::max<std::size_t>(1, std::size_t(std::ceil((b - a) * t / std::numbers::pi)));
    panels += n;
    require(panels <= panel_budget, Errc::QuadratureNonConvergence,
            "cosine transform needs too many panels at this t");
    const double h = (b - a) / double(n);
    for (std::size_t k = 0; k < n; ++k) {
      double err = 0.0;
      double abs = 0.0;
      const double lo = a + h * double(k);
      const double hi = (k + 1 == n) ? b : lo + h;
      total += gauss_kronrod<double, 15>::integrate(f, lo, hi, 10, 1e-12, &err, &abs);
      error += err;
      l1 += abs;
    }
  }
  require(error <= 1e-8 * std::max(l1, 1e-300) || error == 0.0, Errc::QuadratureNonConvergence,
          "cosine transform missed its tolerance");
  return 2.0 / (std::numbers::pi * mass) * total;
}

double friction_kernel_time(const ReservoirSpec& spec, double t, double mass) {
  check_time(t);
  switch (spec.kind) {
    case KernelKind::Delta:
      throw Error(Errc::DeltaKernelNotPointwise, "delta kernels only carry a weight");
    case KernelKind::Exponential:
      return spec.coupling / spec.corr_time * std::exp(-t / spec.corr_time);
    case KernelKind::Tabulated:
      return spectral_to_kernel(spec.table, mass, t);
  }
  return 0.0;
}

LaplaceRational friction_kernel_laplace(const ReservoirSpec& spec) {
  switch (spec.kind) {
    case KernelKind::Delta:
      return LaplaceRational::constant(spec.coupling);
    case KernelKind::Exponential:
      return {{spec.coupling}, {1.0, spec.corr_time}};
    case KernelKind::Tabulated:
      break;
  }
  throw Error(Errc::TabulatedNotRational, "tabulated kernels have no rational transform");
}

CorrelatorValue correlator_time(const ReservoirSpec& spec, double t, double mass) {
  check_time(t);
  if (spec.kind == KernelKind::Delta) return {spec.temperature * spec.coupling, true};
  return {spec.temperature * friction_kernel_time(spec, t, mass), false};
}

NoiseModel compose(std::span<const ReservoirSpec> reservoirs, SystemParams system,
                   std::span<const FieldNoise> fields, TabulationOptions tabulation) {
  require(!reservoirs.empty() || !fields.empty(), Errc::EmptyEnvironment, "no noise sources given");
  require(std::isfinite(system.mass) && system.mass > 0.0, Errc::InvalidArgument, "mass must be > 0");
  require(std::isfinite(system.frequency) && system.frequency >= 0.0, Errc::InvalidArgument,
          "frequency must be >= 0");

  NoiseModel model;
  model.system_ = system;
  for (const auto& r : reservoirs) {
    r.validate();
    switch (r.kind) {
      case KernelKind::Delta:
        model.delta_friction_ += r.coupling;
        model.delta_noise_ += r.coupling * r.temperature;
        break;
      case KernelKind::Exponential:
        model.exp_.push_back({r.coupling, r.coupling * r.temperature, r.corr_time});
        break;
      case KernelKind::Tabulated: {
        require(tabulation.points >= 2 && tabulation.t_max > 0.0, Errc::InvalidArgument,
                "tabulation grid needs t_max > 0 and at least two points");
        if (!model.tab_) {
          TabulatedKernel tab;
          tab.time.resize(tabulation.points);
          for (std::size_t i = 0; i < tabulation.points; ++i)
            tab.time[i] = tabulation.t_max * double(i) / double(tabulation.points - 1);
          tab.friction.assign(tabulation.points, 0.0);
          tab.noise.assign(tabulation.points, 0.0);
          model.tab_ = std::move(tab);
        }
        auto& tab = *model.tab_;
        for (std::size_t i = 0; i < tab.time.size(); ++i) {
          const double eta = spectral_to_kernel(r.table, system.mass, tab.time[i]);
          tab.friction[i] += eta;
          tab.noise[i] += r.temperature * eta;
        }
        break;
      }
    }
  }
  for (const auto& f : fields) {
    f.validate();
    if (f.kind == KernelKind::Delta)
      model.delta_noise_ += f.weight();
    else
      model.exp_.push_back({0.0, f.weight(), f.corr_time});
  }
  return model;
}

double NoiseModel::total_friction() const {
  double sum = delta_friction_;
  for (const auto& m : exp_) sum += m.friction;
  if (tab_) sum += std::real(piecewise_linear_transform(tab_->time, tab_->friction, 0.0));
  return sum;
}

double NoiseModel::friction(double t) const {
  check_time(t);
  double sum = 0.0;
  for (const auto& m : exp_) sum += m.friction / m.corr_time * std::exp(-t / m.corr_time);
  if (tab_) sum += tab_->friction_at(t);
  return sum;
}

double NoiseModel::correlator(double t) const {
  check_time(t);
  double sum = 0.0;
  for (const auto& m : exp_) sum += m.noise / m.corr_time * std::exp(-t / m.corr_time);
  if (tab_) sum += tab_->noise_at(t);
  return sum;
}

ModeSum NoiseModel::friction_series() const {
  require(rational(), Errc::TabulatedNotRational, "tabulated kernels have no mode expansion");
  ModeSum out{delta_friction_, {}};
  for (const auto& m : exp_)
    if (m.friction != 0.0) out.modes.push_back({m.friction / m.corr_time, -1.0 / m.corr_time});
  return out;
}

ModeSum NoiseModel::correlator_series() const {
  require(rational(), Errc::TabulatedNotRational, "tabulated kernels have no mode expansion");
  ModeSum out{delta_noise_, {}};
  for (const auto& m : exp_)
    if (m.noise != 0.0) out.modes.push_back({m.noise / m.corr_time, -1.0 / m.corr_time});
  return out;
}

CommonDenominatorForm NoiseModel::common_denominator() const {
  require(rational(), Errc::TabulatedNotRational, "tabulated kernels have no rational transform");
  const auto groups = grouped_modes(exp_);
  CommonDenominatorForm out{{delta_friction_}, {delta_noise_}, {1.0}};
  for (const auto& [tau, weights] : groups) {
    const Polynomial factor = {1.0, tau};
    // a/D + w/(s tau + 1) = (a (s tau + 1) + w D) / (D (s tau + 1))
    out.friction = poly::add(poly::multiply(out.friction, factor), poly::scale(out.denominator, weights.first));
    out.noise = poly::add(poly::multiply(out.noise, factor), poly::scale(out.denominator, weights.second));
    out.denominator = poly::multiply(out.denominator, factor);
  }
  return out;
}

LaplaceRational NoiseModel::friction_laplace() const {
  auto form = common_denominator();
  return {form.friction, form.denominator};
}

LaplaceRational NoiseModel::correlator_laplace() const {
  auto form = common_denominator();
  return {form.noise, form.denominator};
}

cplx NoiseModel::friction_transform(cplx s) const {
  cplx sum = delta_friction_;
  for (const auto& m : exp_) sum += m.friction / (s * m.corr_time + 1.0);
  if (tab_) sum += piecewise_linear_transform(tab_->time, tab_->friction, s);
  return sum;
}

cplx NoiseModel::correlator_transform(cplx s) const {
  cplx sum = delta_noise_;
  for (const auto& m : exp_) sum += m.noise / (s * m.corr_time + 1.0);
  if (tab_) sum += piecewise_linear_transform(tab_->time, tab_->noise, s);
  return sum;
}

}  // namespace ndec
