#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "ndec/kernels.hpp"
#include "ndec/modes.hpp"

namespace ndec {

/// Two Gaussian packets of width `width` centred at +-separation/2.
struct CatState {
  double separation = 1.0;
  double width = 0.1;
  double mass = 1.0;
  double frequency = 0.0;

  void validate() const;
  /// False when the packets overlap noticeably (separation < 3 width).
  bool well_separated() const { return separation >= 3.0 * width; }
};

enum class ContrastMethod { ClosedForm, Quadrature, ExactGaussian, GridPDE };

std::string_view method_name(ContrastMethod m);

struct ContrastCurve {
  std::vector<double> time;
  std::vector<double> a_int;
  std::vector<double> contrast;
  ContrastMethod method = ContrastMethod::ClosedForm;
};

/// sigma_pp^2(t) = 2 int_0^t int_0^t' C(t' - t'') dt'' dt'. Closed form for
/// delta and exponential parts, piecewise quadrature for tabulated ones.
double sigma_pp(const NoiseModel& model, double t);

/// Same quantity by adaptive quadrature of 2 int_0^t (t - u) C(u) du; the
/// delta atom is still added analytically.
double sigma_pp_quadrature(const NoiseModel& model, double t);

double a_int(const CatState& cat, const NoiseModel& model, double t);

/// d^2 int_0^t dt' int_0^t' dt'' eta(t' - t'') T(t'') (t - t').
double a_int_via_temperature(const CatState& cat, const ModeSum& eta, const ModeSum& temperature, double t);

ContrastCurve contrast_curve(const CatState& cat, const NoiseModel& model, std::span<const double> times,
                             ContrastMethod method = ContrastMethod::ClosedForm);

/// Time at which A_int reaches 1.
double coherence_time(const CatState& cat, const NoiseModel& model);

}  // namespace ndec
