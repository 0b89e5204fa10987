#include "ndec/wigner.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <ostream>

#include "ndec/csv.hpp"
#include "ndec/error.hpp"

namespace ndec {

namespace {

constexpr double pi = std::numbers::pi;

std::size_t next_pow2(double n) {
  std::size_t p = 1;
  while (double(p) < n) p <<= 1;
  return p;
}

// Composite 30-point Gauss-Legendre over [a, b] on panels no wider than h.
template <class F>
double composite(F f, double a, double b, double h) {
  if (b <= a) return 0.0;
  const auto n = std::max<std::size_t>(1, std::size_t(std::ceil((b - a) / h)));
  const double w = (b - a) / double(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    sum += boost::math::quadrature::gauss<double, 30>::integrate(f, a + w * double(i), a + w * double(i + 1));
  return sum;
}

double panel_width(const NoiseModel& model) {
  double h = std::numeric_limits<double>::infinity();
  for (const auto& m : model.exp_modes()) h = std::min(h, 0.25 * m.corr_time);
  if (const auto& tab = model.tabulated()) h = std::min(h, tab->time[1] - tab->time[0]);
  return h;
}

bool has_smooth_part(const NoiseModel& model) { return !model.exp_modes().empty() || model.tabulated(); }

// int_0^t (t - u) C(u) du over the smooth part, plus the atom's share.
double noise_ramp(const NoiseModel& model, double t) {
  double sum = model.delta_noise() * t;
  if (has_smooth_part(model))
    sum += composite([&](double u) { return (t - u) * model.correlator(u); }, 0.0, t, panel_width(model));
  return sum;
}

double friction_integral(const NoiseModel& model, double a, double b) {
  if (!has_smooth_part(model)) return 0.0;
  return composite([&](double u) { return model.friction(u); }, a, b, panel_width(model));
}

// Maximum of |v| refined by a quadratic fit of log|v| on the 3x3 stencil.
double refined_max(const std::vector<double>& v, const GridSpec& g) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < v.size(); ++k)
    if (std::abs(v[k]) > std::abs(v[best])) best = k;
  const double top = std::abs(v[best]);
  const std::size_t i0 = best / g.np;
  const std::size_t j0 = best % g.np;
  if (i0 == 0 || i0 + 1 >= g.nx || top <= 0.0) return top;

  Eigen::Matrix<double, 9, 6> design;
  Eigen::Matrix<double, 9, 1> rhs;
  int row = 0;
  for (int di = -1; di <= 1; ++di) {
    for (int dj = -1; dj <= 1; ++dj) {
      const std::size_t i = i0 + std::size_t(di + 1) - 1;
      const std::size_t j = (j0 + g.np + std::size_t(dj + 1) - 1) % g.np;
      const double val = std::abs(v[i * g.np + j]);
      if (val <= 0.0) return top;
      design.row(row) << 1.0, di, dj, di * di, dj * dj, di * dj;
      rhs(row) = std::log(val / top);
      ++row;
    }
  }
  const Eigen::Matrix<double, 6, 1> c = design.colPivHouseholderQr().solve(rhs);
  Eigen::Matrix2d hess;
  hess << 2.0 * c(3), c(5), c(5), 2.0 * c(4);
  const Eigen::Vector2d grad(c(1), c(2));
  if (hess.determinant() <= 0.0 || hess(0, 0) >= 0.0) return top;
  const Eigen::Vector2d at = -hess.inverse() * grad;
  if (at.cwiseAbs().maxCoeff() > 1.0) return top;
  const double log_peak = c(0) + grad.dot(at) + 0.5 * at.dot(hess * at);
  return top * std::exp(std::max(log_peak, 0.0));
}

class ColumnFft {
 public:
  explicit ColumnFft(const GridSpec& g)
      : nx_(int(g.nx)), np_(int(g.np)), nk_(np_ / 2 + 1), real_(g.nx * g.np), spec_(g.nx * std::size_t(nk_)) {
    int n[] = {np_};
    forward_ = fftw_plan_many_dft_r2c(1, n, nx_, real_.data(), nullptr, 1, np_,
                                      reinterpret_cast<fftw_complex*>(spec_.data()), nullptr, 1, nk_,
                                      FFTW_ESTIMATE);
    backward_ = fftw_plan_many_dft_c2r(1, n, nx_, reinterpret_cast<fftw_complex*>(spec_.data()), nullptr, 1, nk_,
                                       real_.data(), nullptr, 1, np_, FFTW_ESTIMATE);
  }
  ~ColumnFft() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  ColumnFft(const ColumnFft&) = delete;
  ColumnFft& operator=(const ColumnFft&) = delete;

  // Multiplies column i's spectrum at wavenumber index q by factor(i, q).
  template <class F>
  void apply(std::vector<double>& data, F factor) {
    std::copy(data.begin(), data.end(), real_.begin());
    fftw_execute(forward_);
    for (int i = 0; i < nx_; ++i)
      for (int q = 0; q < nk_; ++q) spec_[std::size_t(i * nk_ + q)] *= factor(i, q);
    fftw_execute(backward_);
    const double norm = 1.0 / double(np_);
    for (std::size_t k = 0; k < data.size(); ++k) data[k] = real_[k] * norm;
  }

 private:
  int nx_, np_, nk_;
  std::vector<double> real_;
  std::vector<std::complex<double>> spec_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

}  // namespace

GridSpec default_grid(const CatState& cat, double per_fringe) {
  cat.validate();
  require(per_fringe >= 2.0, Errc::InvalidArgument, "need at least two samples per fringe");
  const double sigma = cat.width;
  const double d = cat.separation;
  GridSpec g;
  const auto half_cols = std::size_t(std::ceil((0.5 * d + 6.0 * sigma) / sigma));
  g.nx = 2 * half_cols + 1;
  g.x_max = sigma * double(half_cols);
  g.p_max = 3.0 / sigma + 2.0 * pi / d;
  const double fringe = 2.0 * pi / d;
  g.np = std::max<std::size_t>(64, next_pow2(2.0 * g.p_max * per_fringe / fringe));
  return g;
}

double WignerGrid::total() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < spec.nx; ++i) {
    const double wx = (i == 0 || i + 1 == spec.nx) ? 0.5 : 1.0;
    double col = 0.0;
    for (std::size_t j = 0; j < spec.np; ++j) {
      const auto k = i * spec.np + j;
      col += minus[k] + plus[k] + interference[k];
    }
    sum += wx * col;
  }
  return sum * spec.dx() * spec.dp();
}

WignerGrid cat_wigner(const CatState& cat, const GridSpec& spec) {
  cat.validate();
  require(spec.nx >= 3 && spec.nx % 2 == 1, Errc::InvalidArgument, "nx must be odd and >= 3");
  require(spec.np >= 8 && spec.np % 2 == 0, Errc::InvalidArgument, "np must be even and >= 8");
  const double d = cat.separation;
  const double s = cat.width;
  require(spec.x_max >= 0.5 * d + 5.0 * s, Errc::GridTooSmall, "x range must cover d/2 + 5 width");
  require(spec.p_max >= 5.0 / (2.0 * s) + 2.0 * pi / d, Errc::GridTooSmall,
          "p range must cover 5/(2 width) + 2 pi/d");

  WignerGrid w;
  w.spec = spec;
  const std::size_t n = spec.nx * spec.np;
  w.minus.resize(n);
  w.plus.resize(n);
  w.interference.resize(n);
  const double norm = 1.0 / (2.0 * (1.0 + std::exp(-d * d / (8.0 * s * s))));
  for (std::size_t i = 0; i < spec.nx; ++i) {
    const double x = spec.x(i);
    for (std::size_t j = 0; j < spec.np; ++j) {
      const double p = spec.p(j);
      const double pp = 2.0 * s * s * p * p;
      const auto k = i * spec.np + j;
      const double xm = x + 0.5 * d;
      const double xp = x - 0.5 * d;
      w.minus[k] = norm / pi * std::exp(-xm * xm / (2.0 * s * s) - pp);
      w.plus[k] = norm / pi * std::exp(-xp * xp / (2.0 * s * s) - pp);
      w.interference[k] = 2.0 * norm / pi * std::exp(-x * x / (2.0 * s * s) - pp) * std::cos(d * p);
    }
  }
  return w;
}

std::vector<WignerGrid> evolve_fpe(const WignerGrid& initial, const NoiseModel& model,
                                   std::span<const double> times, const FpeOptions& options) {
  require(options.substeps >= 1, Errc::InvalidArgument, "need at least one substep");
  require(!times.empty() && times.front() >= initial.time, Errc::InvalidArgument,
          "output times must not precede the initial state");
  for (std::size_t i = 1; i < times.size(); ++i)
    require(times[i] > times[i - 1], Errc::InvalidArgument, "output times must increase strictly");

  const GridSpec& g = initial.spec;
  const double mass0 = initial.total();
  const double k_unit = 2.0 * pi / (double(g.np) * g.dp());
  ColumnFft fft(g);

  WignerGrid state = initial;
  std::vector<WignerGrid> out;
  double t_now = initial.time;
  double ramp_now = noise_ramp(model, t_now);
  for (double t_next : times) {
    const double h = (t_next - t_now) / double(options.substeps);
    for (std::size_t sub = 0; sub < options.substeps && t_next > t_now; ++sub) {
      const double b = (sub + 1 == options.substeps) ? t_next : t_now + h;
      const double ramp_next = noise_ramp(model, b);
      // int_a^b D dt = sigma_pp^2(b)/2 - sigma_pp^2(a)/2
      const double spread = ramp_next - ramp_now;
      const double shift = options.drift ? friction_integral(model, t_now, b) : 0.0;
      require(std::abs(shift) * g.x_max <= g.p_max, Errc::StepTooLarge,
              "drift shift per step exceeds half the momentum window");
      auto factor = [&](int i, int q) {
        const double k = k_unit * q;
        const double x = g.x(std::size_t(i));
        const double damp = std::exp(-k * k * spread);
        const double phase = k * x * shift;
        return std::complex<double>(damp * std::cos(phase), damp * std::sin(phase));
      };
      fft.apply(state.minus, factor);
      fft.apply(state.plus, factor);
      fft.apply(state.interference, factor);
      t_now = b;
      ramp_now = ramp_next;
    }
    state.time = t_next;
    require(std::abs(state.total() - mass0) <= 1e-4 * std::abs(mass0), Errc::NormalizationDrift,
            "total probability drifted");
    out.push_back(state);
  }
  return out;
}

double peak_ratio(const WignerGrid& state) {
  const double top_int = refined_max(state.interference, state.spec);
  require(top_int >= 1e-300, Errc::PeakBelowFloor, "interference term has vanished");
  const double top_minus = refined_max(state.minus, state.spec);
  const double top_plus = refined_max(state.plus, state.spec);
  return top_int / (2.0 * std::sqrt(top_minus * top_plus));
}

void write_snapshot_csv(std::ostream& out, const WignerGrid& state) {
  const auto& g = state.spec;
  out << "x,p,w_minus,w_plus,w_int\n";
  for (std::size_t i = 0; i < g.nx; ++i) {
    for (std::size_t j = 0; j < g.np; ++j) {
      const auto k = i * g.np + j;
      out << format_double(g.x(i)) << ',' << format_double(g.p(j)) << ',' << format_double(state.minus[k])
          << ',' << format_double(state.plus[k]) << ',' << format_double(state.interference[k]) << '\n';
    }
  }
}

}  // namespace ndec
