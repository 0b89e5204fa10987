#include "ndec/langevin.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "ndec/error.hpp"

namespace ndec {

namespace odeint = boost::numeric::odeint;

std::complex<double> EmbeddedSystem::transfer(std::complex<double> s) const {
  const Eigen::Index n = dimension();
  Eigen::MatrixXcd m = -drift.cast<std::complex<double>>();
  m.diagonal().array() += s;
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
  rhs(1) = 1.0;
  const Eigen::VectorXcd sol = m.partialPivLu().solve(rhs);
  return sol(0);
}

EmbeddedSystem embed(const NoiseModel& model) {
  require(model.rational(), Errc::TabulatedNotEmbeddable, "tabulated kernels have no finite embedding");
  const auto& modes = model.exp_modes();
  const Eigen::Index n = 2 + Eigen::Index(modes.size());
  const double m = model.mass();
  const double w = model.frequency();

  EmbeddedSystem sys;
  sys.mass = m;
  sys.frequency = w;
  sys.drift = Eigen::MatrixXd::Zero(n, n);
  sys.diffusion = Eigen::MatrixXd::Zero(n, n);
  sys.aux_variance = Eigen::VectorXd::Zero(n - 2);

  sys.drift(0, 1) = 1.0 / m;
  sys.drift(1, 0) = -m * w * w;
  sys.drift(1, 1) = -model.delta_friction() / m;
  sys.diffusion(1, 1) = 2.0 * model.delta_noise();
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const auto i = Eigen::Index(k) + 2;
    const double tau = modes[k].corr_time;
    const double strength = modes[k].friction / tau;
    sys.drift(1, 0) -= strength;
    sys.drift(1, i) = 1.0;
    sys.drift(i, i) = -1.0 / tau;
    sys.drift(i, 0) = strength / tau;
    sys.diffusion(i, i) = 2.0 * modes[k].noise / (tau * tau);
    sys.aux_variance(i - 2) = modes[k].noise / tau;
  }
  return sys;
}

namespace {

using State = std::vector<double>;

Eigen::MatrixXd psd_projected(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  const double trace = sym.trace();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  if (eig.eigenvalues().minCoeff() >= -1e-10 * std::abs(trace)) return sym;
  const Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

std::vector<CovarianceState> propagate_covariance(const EmbeddedSystem& sys, const Eigen::MatrixXd& sigma0,
                                                  std::span<const double> times, const Eigen::VectorXd& mean0) {
  const Eigen::Index n = sys.dimension();
  require(sigma0.rows() == n && sigma0.cols() == n, Errc::InvalidArgument, "initial covariance has wrong shape");
  require(!times.empty() && times.front() >= 0.0, Errc::InvalidArgument, "time grid must start at t >= 0");
  for (std::size_t i = 1; i < times.size(); ++i)
    require(times[i] > times[i - 1], Errc::InvalidArgument, "time grid must increase strictly");
  const Eigen::VectorXd mean = mean0.size() == 0 ? Eigen::VectorXd::Zero(n) : mean0;
  require(mean.size() == n, Errc::InvalidArgument, "initial mean has wrong size");

  const auto nn = std::size_t(n * n);
  const Eigen::MatrixXd& A = sys.drift;
  const Eigen::MatrixXd& B = sys.diffusion;
  auto rhs = [&](const State& y, State& dy, double) {
    Eigen::Map<const Eigen::MatrixXd> phi(y.data(), n, n);
    Eigen::Map<const Eigen::MatrixXd> q(y.data() + nn, n, n);
    Eigen::Map<Eigen::MatrixXd> dphi(dy.data(), n, n);
    Eigen::Map<Eigen::MatrixXd> dq(dy.data() + nn, n, n);
    dphi.noalias() = A * phi;
    dq.noalias() = A * q;
    dq += dq.transpose().eval();
    dq += B;
  };

  State y(2 * nn, 0.0);
  Eigen::Map<Eigen::MatrixXd>(y.data(), n, n).setIdentity();

  std::vector<double> grid;
  if (times.front() > 0.0) grid.push_back(0.0);
  grid.insert(grid.end(), times.begin(), times.end());

  // Absolute floor relative to the natural size of the entries.
  const double span = grid.back();
  const double scale = std::max({1.0, B.cwiseAbs().maxCoeff() * span, sigma0.cwiseAbs().maxCoeff()});
  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(1e-14 * scale, 1e-10);

  std::vector<CovarianceState> out;
  bool skip_start = times.front() > 0.0;
  auto observe = [&](const State& s, double t) {
    if (skip_start) {
      skip_start = false;
      return;
    }
    CovarianceState c;
    c.time = t;
    c.flow = Eigen::Map<const Eigen::MatrixXd>(s.data(), n, n);
    c.noise_covariance = psd_projected(Eigen::Map<const Eigen::MatrixXd>(s.data() + nn, n, n));
    c.mean = c.flow * mean;
    c.covariance = psd_projected(c.flow * sigma0 * c.flow.transpose() + c.noise_covariance);
    out.push_back(std::move(c));
  };

  if (grid.size() == 1) {
    observe(y, 0.0);
    return out;
  }
  const double dt0 = std::max(1e-6 * (grid[1] - grid[0]), 1e-12);
  try {
    odeint::integrate_times(stepper, rhs, y, grid.begin(), grid.end(), dt0, observe,
                            odeint::max_step_checker(1'000'000));
  } catch (const std::exception& e) {
    throw Error(Errc::IntegratorFailure, e.what());
  }
  require(out.size() == times.size(), Errc::IntegratorFailure, "integrator skipped output times");
  return out;
}

Eigen::MatrixXd packet_covariance(const CatState& cat, const EmbeddedSystem& sys) {
  cat.validate();
  const Eigen::Index n = sys.dimension();
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(n, n);
  sigma(0, 0) = cat.width * cat.width;
  sigma(1, 1) = 1.0 / (4.0 * cat.width * cat.width);
  for (Eigen::Index i = 2; i < n; ++i) sigma(i, i) = sys.aux_variance(i - 2);
  return sigma;
}

double gaussian_peak_ratio(const CatState& cat, const Eigen::MatrixXd& sigma0, const Eigen::MatrixXd& flow,
                           const Eigen::MatrixXd& noise_covariance) {
  const Eigen::Index n = sigma0.rows();
  Eigen::VectorXd k0 = Eigen::VectorXd::Zero(n);
  k0(1) = cat.separation;
  const Eigen::VectorXd shifted = flow * (sigma0 * k0);
  const Eigen::MatrixXd S = flow * sigma0 * flow.transpose() + noise_covariance;
  const Eigen::Vector2d v = shifted.head<2>();
  const Eigen::Matrix2d s_pp = S.topLeftCorner<2, 2>();
  const double exponent = -0.5 * k0.dot(sigma0 * k0) + 0.5 * v.dot(s_pp.ldlt().solve(v));
  return std::exp(std::min(exponent, 0.0));
}

double exact_contrast(const CatState& cat, const EmbeddedSystem& sys, double t) {
  require(t >= 0.0, Errc::NegativeTime, "time must be >= 0");
  const double times[] = {t};
  const Eigen::MatrixXd sigma0 = packet_covariance(cat, sys);
  const auto states = propagate_covariance(sys, sigma0, times);
  return gaussian_peak_ratio(cat, sigma0, states.back().flow, states.back().noise_covariance);
}

ContrastCurve exact_contrast_curve(const CatState& cat, const EmbeddedSystem& sys, std::span<const double> times) {
  const Eigen::MatrixXd sigma0 = packet_covariance(cat, sys);
  const auto states = propagate_covariance(sys, sigma0, times);
  ContrastCurve curve;
  curve.method = ContrastMethod::ExactGaussian;
  for (const auto& s : states) {
    const double c = gaussian_peak_ratio(cat, sigma0, s.flow, s.noise_covariance);
    curve.time.push_back(s.time);
    curve.contrast.push_back(c);
    curve.a_int.push_back(-std::log(c));
  }
  return curve;
}

}  // namespace ndec
