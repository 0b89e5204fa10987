#include "ndec/trap.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <unsupported/Eigen/NonLinearOptimization>

#include "ndec/csv.hpp"
#include "ndec/error.hpp"

namespace ndec {

void IonSpec::validate() const {
  require(std::isfinite(mass) && mass > 0.0, Errc::InvalidArgument, "ion mass must be > 0");
  require(std::isfinite(charge) && charge != 0.0, Errc::InvalidArgument, "ion charge must be nonzero");
  require(omega_min > 0.0 && omega_max > omega_min, Errc::InvalidArgument,
          "trap frequency range must satisfy 0 < min < max");
}

void HeatingDataset::validate() const {
  require(!omega.empty() && omega.size() == rate.size() && omega.size() == rel_uncertainty.size(),
          Errc::InvalidArgument, "dataset columns must be nonempty and of equal length");
  for (std::size_t i = 0; i < omega.size(); ++i) {
    require(i == 0 || omega[i] > omega[i - 1], Errc::InvalidArgument, "frequencies must increase strictly");
    require(rate[i] > 0.0, Errc::InvalidArgument, "heating rates must be > 0");
    require(rel_uncertainty[i] > 0.0, Errc::InvalidArgument, "uncertainties must be > 0");
  }
}

namespace {
const std::vector<std::string> dataset_header = {"omega_rad_s", "ndot_quanta_s", "rel_uncertainty"};
}

void write_dataset_csv(std::ostream& out, const HeatingDataset& data) {
  write_csv(out, dataset_header, {data.omega, data.rate, data.rel_uncertainty});
}

HeatingDataset read_dataset_csv(std::istream& in) {
  auto cols = read_csv(in, dataset_header);
  HeatingDataset data{std::move(cols[0]), std::move(cols[1]), std::move(cols[2]), std::nullopt};
  data.validate();
  return data;
}

double SpectrumFit::operator()(double omega) const {
  double s = flat;
  for (const auto& c : components) s += 2.0 * c.amplitude / (1.0 + omega * omega * c.corr_time * c.corr_time);
  return s;
}

double power_spectrum(const NoiseModel& model, double omega) {
  require(omega >= 0.0, Errc::InvalidArgument, "frequency must be >= 0");
  return 2.0 * std::real(model.correlator_transform(std::complex<double>(0.0, -omega)));
}

double heating_rate(const IonSpec& ion, double force_spectrum, double omega, double hbar) {
  ion.validate();
  const double slack = 1e-12 * ion.omega_max;
  require(omega >= ion.omega_min - slack && omega <= ion.omega_max + slack, Errc::FrequencyOutOfRange,
          "trap frequency outside the ion's range");
  require(force_spectrum >= 0.0, Errc::InvalidArgument, "force spectrum must be >= 0");
  return force_spectrum / (4.0 * ion.mass * hbar * omega);
}

HeatingDataset synthesize_dataset(const NoiseModel& model, const IonSpec& ion, std::span<const double> omegas,
                                  double rel_noise, std::uint64_t seed, double hbar) {
  require(rel_noise >= 0.0 && rel_noise <= 0.5, Errc::InvalidArgument, "relative noise must lie in [0, 0.5]");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  HeatingDataset data;
  data.seed = seed;
  for (double w : omegas) {
    const double truth = heating_rate(ion, power_spectrum(model, w), w, hbar);
    double value = truth;
    if (rel_noise > 0.0) {
      do {
        const double g = std::min(normal(rng), 10.0);
        value = truth * (1.0 + rel_noise * g);
      } while (value <= 0.0);
    }
    data.omega.push_back(w);
    data.rate.push_back(value);
    data.rel_uncertainty.push_back(rel_noise > 0.0 ? rel_noise : 1e-6);
  }
  data.validate();
  return data;
}

SpectrumSamples spectrum_samples(const HeatingDataset& data, const IonSpec& ion, double hbar) {
  data.validate();
  ion.validate();
  SpectrumSamples s;
  for (std::size_t i = 0; i < data.omega.size(); ++i) {
    const double v = 4.0 * ion.mass * hbar * data.omega[i] * data.rate[i];
    s.omega.push_back(data.omega[i]);
    s.value.push_back(v);
    s.sigma.push_back(data.rel_uncertainty[i] * v);
  }
  return s;
}

FrictionCalibration calibrate_friction(const HeatingDataset& data, const IonSpec& ion, double temperature,
                                       double hbar) {
  require(temperature > 0.0, Errc::InvalidArgument, "ambient temperature must be > 0");
  const auto s = spectrum_samples(data, ion, hbar);
  double sw = 0.0;
  double swx = 0.0;
  for (std::size_t i = 0; i < s.value.size(); ++i) {
    const double w = 1.0 / (s.sigma[i] * s.sigma[i]);
    sw += w;
    swx += w * s.value[i];
  }
  const double mean = swx / sw;
  double chi2 = 0.0;
  for (std::size_t i = 0; i < s.value.size(); ++i) {
    const double r = (s.value[i] - mean) / s.sigma[i];
    chi2 += r * r;
  }
  const std::size_t dof = s.value.size() > 1 ? s.value.size() - 1 : 1;
  FrictionCalibration out;
  out.friction = mean / (2.0 * temperature);
  out.standard_error = 1.0 / std::sqrt(sw) / (2.0 * temperature);
  out.reduced_chi_square = chi2 / double(dof);
  require(out.reduced_chi_square <= 5.0, Errc::InconsistentFlatness,
          "ambient heating spectrum is not flat (reduced chi-square " + std::to_string(out.reduced_chi_square) +
              ")");
  return out;
}

namespace {

// Weighted residuals of the normalized model over log parameters
// theta = (log a, log b_1, log tau_1, ...).
struct LorentzianResiduals {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const std::vector<double>& omega;
  const std::vector<double>& value;
  const std::vector<double>& sigma;
  std::size_t components;

  int inputs() const { return int(1 + 2 * components); }
  int values() const { return int(omega.size()); }

  int operator()(const Eigen::VectorXd& theta, Eigen::VectorXd& r) const {
    for (std::size_t i = 0; i < omega.size(); ++i) {
      double s = std::exp(theta(0));
      for (std::size_t j = 0; j < components; ++j) {
        const double b = std::exp(theta(Eigen::Index(1 + 2 * j)));
        const double tau = std::exp(theta(Eigen::Index(2 + 2 * j)));
        s += 2.0 * b / (1.0 + omega[i] * omega[i] * tau * tau);
      }
      r(Eigen::Index(i)) = (s - value[i]) / sigma[i];
    }
    return 0;
  }

  int df(const Eigen::VectorXd& theta, Eigen::MatrixXd& jac) const {
    for (std::size_t i = 0; i < omega.size(); ++i) {
      const auto row = Eigen::Index(i);
      jac(row, 0) = std::exp(theta(0)) / sigma[i];
      for (std::size_t j = 0; j < components; ++j) {
        const double b = std::exp(theta(Eigen::Index(1 + 2 * j)));
        const double tau = std::exp(theta(Eigen::Index(2 + 2 * j)));
        const double x = omega[i] * omega[i] * tau * tau;
        const double shape = 1.0 / (1.0 + x);
        jac(row, Eigen::Index(1 + 2 * j)) = 2.0 * b * shape / sigma[i];
        jac(row, Eigen::Index(2 + 2 * j)) = -4.0 * b * x * shape * shape / sigma[i];
      }
    }
    return 0;
  }
};

struct Candidate {
  Eigen::VectorXd theta;
  double chi_square = std::numeric_limits<double>::infinity();
  bool degenerate = false;
};

bool taus_degenerate(const Eigen::VectorXd& theta, std::size_t components) {
  for (std::size_t i = 0; i < components; ++i)
    for (std::size_t j = i + 1; j < components; ++j) {
      const double a = std::exp(theta(Eigen::Index(2 + 2 * i)));
      const double b = std::exp(theta(Eigen::Index(2 + 2 * j)));
      if (std::abs(a - b) <= 0.05 * std::max(a, b)) return true;
    }
  return false;
}

// Nonnegative-clipped linear least squares for (a, b_j) with tau fixed.
Eigen::VectorXd linear_start(const LorentzianResiduals& f, const std::vector<double>& taus) {
  const auto n = Eigen::Index(f.omega.size());
  const auto k = Eigen::Index(taus.size());
  Eigen::MatrixXd design(n, k + 1);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = f.sigma[std::size_t(i)];
    const double w = f.omega[std::size_t(i)];
    design(i, 0) = 1.0 / s;
    for (Eigen::Index j = 0; j < k; ++j) design(i, j + 1) = 2.0 / (1.0 + w * w * taus[std::size_t(j)] * taus[std::size_t(j)]) / s;
    rhs(i) = f.value[std::size_t(i)] / s;
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(rhs);
  double level = 0.0;
  for (double v : f.value) level = std::max(level, v);
  Eigen::VectorXd theta(1 + 2 * k);
  theta(0) = std::log(std::max(coef(0), 1e-3 * level));
  for (Eigen::Index j = 0; j < k; ++j) {
    theta(1 + 2 * j) = std::log(std::max(coef(j + 1), 1e-3 * level));
    theta(2 + 2 * j) = std::log(taus[std::size_t(j)]);
  }
  return theta;
}

void combinations(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& pick,
                  std::vector<std::vector<std::size_t>>& out) {
  if (pick.size() == k) {
    out.push_back(pick);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    pick.push_back(i);
    combinations(n, k, i + 1, pick, out);
    pick.pop_back();
  }
}

struct Normalized {
  std::vector<double> omega, value, sigma;
  double omega_scale = 1.0;
  double value_scale = 1.0;
};

Normalized normalize(const SpectrumSamples& s) {
  Normalized n;
  n.omega_scale = std::sqrt(s.omega.front() * s.omega.back());
  std::vector<double> sorted = s.value;
  std::sort(sorted.begin(), sorted.end());
  n.value_scale = sorted[sorted.size() / 2];
  for (std::size_t i = 0; i < s.omega.size(); ++i) {
    n.omega.push_back(s.omega[i] / n.omega_scale);
    n.value.push_back(s.value[i] / n.value_scale);
    n.sigma.push_back(s.sigma[i] / n.value_scale);
  }
  return n;
}

double aicc(double chi2, std::size_t k, std::size_t n) {
  const double kk = double(k);
  const double denom = double(n) - kk - 1.0;
  const double correction = denom > 0.0 ? 2.0 * kk * (kk + 1.0) / denom : std::numeric_limits<double>::infinity();
  return chi2 + 2.0 * kk + correction;
}

SpectrumFit to_fit(const Normalized& n, const LorentzianResiduals& f, const Eigen::VectorXd& theta,
                   std::size_t components) {
  Eigen::VectorXd r(f.values());
  f(theta, r);
  Eigen::MatrixXd jac(f.values(), f.inputs());
  f.df(theta, jac);

  SpectrumFit fit;
  fit.points = n.omega.size();
  fit.chi_square = r.squaredNorm();
  fit.residual_norm = r.norm();
  fit.aicc = aicc(fit.chi_square, std::size_t(f.inputs()), fit.points);
  fit.flat = std::exp(theta(0)) * n.value_scale;

  // Natural parameters p = exp(theta) scaled back to physical units.
  const auto k = Eigen::Index(f.inputs());
  Eigen::VectorXd dp(k);
  dp(0) = fit.flat;
  std::vector<std::pair<Lorentzian, Eigen::Index>> comps;
  for (std::size_t j = 0; j < components; ++j) {
    const auto ib = Eigen::Index(1 + 2 * j);
    Lorentzian c{std::exp(theta(ib)) * n.value_scale, std::exp(theta(ib + 1)) / n.omega_scale};
    dp(ib) = c.amplitude;
    dp(ib + 1) = c.corr_time;
    comps.push_back({c, ib});
  }
  Eigen::MatrixXd cov_theta = (jac.transpose() * jac).completeOrthogonalDecomposition().pseudoInverse();
  Eigen::MatrixXd cov_natural = dp.asDiagonal() * cov_theta * dp.asDiagonal();

  std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.first.corr_time < b.first.corr_time; });
  std::vector<Eigen::Index> order = {0};
  for (const auto& [c, ib] : comps) {
    fit.components.push_back(c);
    order.push_back(ib);
    order.push_back(ib + 1);
  }
  fit.covariance.resize(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b) fit.covariance(a, b) = cov_natural(order[std::size_t(a)], order[std::size_t(b)]);
  return fit;
}

// Best candidate with exactly `components` Lorentzians, or nullopt when no
// start converged.
std::optional<Candidate> best_candidate(const Normalized& n, std::size_t components) {
  LorentzianResiduals f{n.omega, n.value, n.sigma, components};
  if (components == 0) {
    double sw = 0.0, swx = 0.0;
    for (std::size_t i = 0; i < n.value.size(); ++i) {
      const double w = 1.0 / (n.sigma[i] * n.sigma[i]);
      sw += w;
      swx += w * n.value[i];
    }
    Candidate c;
    c.theta = Eigen::VectorXd::Constant(1, std::log(swx / sw));
    Eigen::VectorXd r(f.values());
    f(c.theta, r);
    c.chi_square = r.squaredNorm();
    return c;
  }
  if (n.omega.size() < 1 + 2 * components) return std::nullopt;

  // Seeds spread over correlation times resolvable inside the window.
  constexpr std::size_t seeds = 8;
  const double lo = std::log(0.3 / n.omega.back());
  const double hi = std::log(3.0 / n.omega.front());
  std::vector<double> seed_tau(seeds);
  for (std::size_t i = 0; i < seeds; ++i) seed_tau[i] = std::exp(lo + (hi - lo) * double(i) / double(seeds - 1));

  std::vector<std::vector<std::size_t>> combos;
  std::vector<std::size_t> pick;
  combinations(seeds, components, 0, pick, combos);

  std::optional<Candidate> best;
  std::optional<Candidate> best_degenerate;
  for (const auto& combo : combos) {
    std::vector<double> taus;
    for (auto i : combo) taus.push_back(seed_tau[i]);
    Eigen::VectorXd theta = linear_start(f, taus);
    Eigen::LevenbergMarquardt<LorentzianResiduals> lm(f);
    lm.parameters.ftol = 1e-14;
    lm.parameters.xtol = 1e-14;
    lm.parameters.maxfev = 4000;
    const auto status = lm.minimize(theta);
    using S = Eigen::LevenbergMarquardtSpace::Status;
    if (status == S::ImproperInputParameters || status == S::TooManyFunctionEvaluation) continue;
    if (!theta.allFinite()) continue;
    Candidate c;
    c.theta = theta;
    Eigen::VectorXd r(f.values());
    f(theta, r);
    c.chi_square = r.squaredNorm();
    c.degenerate = taus_degenerate(theta, components);
    auto& slot = c.degenerate ? best_degenerate : best;
    if (!slot || c.chi_square < slot->chi_square) slot = c;
  }
  if (best) return best;
  return best_degenerate;
}

}  // namespace

SpectrumFit fit_spectrum_fixed(const HeatingDataset& data, const IonSpec& ion, std::size_t components,
                               double hbar) {
  require(components <= 3, Errc::InvalidArgument, "at most three Lorentzian components");
  const auto n = normalize(spectrum_samples(data, ion, hbar));
  const auto best = best_candidate(n, components);
  require(best.has_value(), Errc::FitNonConvergence, "no start of the spectral fit converged");
  require(!best->degenerate, Errc::DegenerateComponents, "two fitted correlation times lie within 5%");
  LorentzianResiduals f{n.omega, n.value, n.sigma, components};
  return to_fit(n, f, best->theta, components);
}

SpectrumFit fit_spectrum(const HeatingDataset& data, const IonSpec& ion, std::size_t max_components,
                         double hbar) {
  require(max_components <= 3, Errc::InvalidArgument, "at most three Lorentzian components");
  data.validate();
  require(data.omega.back() >= 10.0 * data.omega.front(), Errc::InvalidArgument,
          "dataset must cover at least one decade in frequency");
  const auto n = normalize(spectrum_samples(data, ion, hbar));
  std::optional<SpectrumFit> chosen;
  for (std::size_t k = 0; k <= max_components; ++k) {
    const auto best = best_candidate(n, k);
    if (!best || best->degenerate) continue;
    LorentzianResiduals f{n.omega, n.value, n.sigma, k};
    auto fit = to_fit(n, f, best->theta, k);
    if (!chosen || fit.aicc < chosen->aicc) chosen = std::move(fit);
  }
  require(chosen.has_value(), Errc::FitNonConvergence, "no component count produced a fit");
  return *chosen;
}

double ReconstructedTemperature::uncertainty(double t) const {
  require(t >= 0.0, Errc::NegativeTime, "time must be >= 0");
  const auto k = fit.covariance.rows();
  Eigen::VectorXd grad(k);
  grad(0) = 0.5 / friction;
  for (std::size_t j = 0; j < fit.components.size(); ++j) {
    const auto& c = fit.components[j];
    const double e = std::exp(-t / c.corr_time);
    grad(Eigen::Index(1 + 2 * j)) = (1.0 - e) / friction;
    grad(Eigen::Index(2 + 2 * j)) = -c.amplitude * t / (c.corr_time * c.corr_time) * e / friction;
  }
  const double from_fit = grad.dot(fit.covariance * grad);
  const double rel_eta = friction_error / friction;
  const double v = temperature(t);
  return std::sqrt(std::max(from_fit, 0.0) + v * v * rel_eta * rel_eta);
}

ReconstructedTemperature reconstruct_t_eff(const SpectrumFit& fit, double friction, double friction_error) {
  require(friction > 0.0, Errc::InvalidArgument, "friction must be > 0");
  ReconstructedTemperature out;
  out.fit = fit;
  out.friction = friction;
  out.friction_error = friction_error;
  auto& T = out.temperature;
  T.provenance = Provenance::ClosedForm;
  T.delta_weight = 0.5 * fit.flat / friction;
  T.asymptote = T.delta_weight;
  for (const auto& c : fit.components) {
    T.modes.push_back({std::complex<double>(c.amplitude / (c.corr_time * friction), 0.0),
                       std::complex<double>(-1.0 / c.corr_time, 0.0)});
    T.asymptote += c.amplitude / friction;
  }
  return out;
}

}  // namespace ndec
