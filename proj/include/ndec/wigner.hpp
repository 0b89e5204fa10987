#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "ndec/decoherence.hpp"
#include "ndec/kernels.hpp"

namespace ndec {

/// x runs over nx points symmetric about 0 (nx odd, so x = 0 is a node);
/// p over np periodic points p_j = -p_max + j * 2 p_max / np (p = 0 at j = np/2).
struct GridSpec {
  double x_max = 1.0;
  std::size_t nx = 3;
  double p_max = 1.0;
  std::size_t np = 64;

  double dx() const { return 2.0 * x_max / double(nx - 1); }
  double dp() const { return 2.0 * p_max / double(np); }
  double x(std::size_t i) const { return -x_max + dx() * double(i); }
  double p(std::size_t j) const { return -p_max + dp() * double(j); }
};

/// Grid with x spacing equal to the packet width, x = +-d/2 on nodes when d/(2
/// width) is whole, p range 3/width + 2 pi/d, and at least `per_fringe`
/// samples per fringe period 2 pi/d (np rounded up to a power of two).
GridSpec default_grid(const CatState& cat, double per_fringe = 8.0);

/// Components stored row-major by x column: value(i, j) = data[i * np + j].
struct WignerGrid {
  GridSpec spec;
  double time = 0.0;
  std::vector<double> minus;
  std::vector<double> plus;
  std::vector<double> interference;

  double total() const;
};

WignerGrid cat_wigner(const CatState& cat, const GridSpec& spec);

struct FpeOptions {
  /// Splitting steps between consecutive output times.
  std::size_t substeps = 1;
  bool drift = true;
};

/// Solves dW/dt = eta(t) x dW/dp + D(t) d2W/dp2 with D(t) = int_0^t C. Both
/// operators act column by column as multipliers on the p-spectrum, so each
/// step applies the drift as a phase ramp and the diffusion as a Gaussian
/// damping. Kernel integrals use composite Gauss-Legendre quadrature of the
/// model's pointwise eta and C. The delta part of eta has no pointwise value
/// and is left out of the drift.
std::vector<WignerGrid> evolve_fpe(const WignerGrid& initial, const NoiseModel& model,
                                   std::span<const double> times, const FpeOptions& options = {});

/// max |W_int| / (2 sqrt(max W_- max W_+)), each maximum refined by a
/// quadratic fit of log values on the 3x3 stencil around the best node.
double peak_ratio(const WignerGrid& state);

/// CSV with columns x,p,w_minus,w_plus,w_int.
void write_snapshot_csv(std::ostream& out, const WignerGrid& state);

}  // namespace ndec
