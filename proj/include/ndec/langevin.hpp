#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "ndec/decoherence.hpp"
#include "ndec/kernels.hpp"

namespace ndec {

/// Linear Markovian system dz = A z dt + noise with <noise noise^T> = B dt.
/// z = (x, p, y_1 .. y_K); y_k carries the memory of exponential mode k and its
/// share of the coloured force, so that the force exerted by mode k on p is
/// y_k - (eta_k / tau_k) x.
struct EmbeddedSystem {
  Eigen::MatrixXd drift;
  Eigen::MatrixXd diffusion;
  /// Stationary variance of each auxiliary coordinate (its initial spread).
  Eigen::VectorXd aux_variance;
  double mass = 1.0;
  double frequency = 0.0;

  Eigen::Index dimension() const { return drift.rows(); }
  /// x response to a force applied on p, e_x^T (s - A)^-1 e_p.
  std::complex<double> transfer(std::complex<double> s) const;
};

EmbeddedSystem embed(const NoiseModel& model);

struct CovarianceState {
  double time = 0.0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  /// Noise-accumulated part, zero at t = 0.
  Eigen::MatrixXd noise_covariance;
  /// Deterministic flow z(t) = flow * z(0).
  Eigen::MatrixXd flow;
};

/// Integrates dPhi/dt = A Phi and dQ/dt = A Q + Q A^T + B with adaptive
/// Dormand-Prince steps (relative tolerance 1e-10); Sigma = Phi Sigma0 Phi^T + Q.
std::vector<CovarianceState> propagate_covariance(const EmbeddedSystem& sys, const Eigen::MatrixXd& sigma0,
                                                  std::span<const double> times,
                                                  const Eigen::VectorXd& mean0 = Eigen::VectorXd());

/// Covariance of one cat packet: position variance width^2, momentum variance
/// 1/(4 width^2), auxiliary coordinates at their stationary spread.
Eigen::MatrixXd packet_covariance(const CatState& cat, const EmbeddedSystem& sys);

/// Interference-to-classical peak ratio of the Gaussian push-forward of the cat
/// Wigner function, given the flow and accumulated noise.
double gaussian_peak_ratio(const CatState& cat, const Eigen::MatrixXd& sigma0, const Eigen::MatrixXd& flow,
                           const Eigen::MatrixXd& noise_covariance);

double exact_contrast(const CatState& cat, const EmbeddedSystem& sys, double t);

ContrastCurve exact_contrast_curve(const CatState& cat, const EmbeddedSystem& sys, std::span<const double> times);

}  // namespace ndec
