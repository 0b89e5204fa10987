#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ndec {

enum class Errc {
  InvalidArgument,
  DeltaKernelNotPointwise,
  NegativeTime,
  TabulatedNotRational,
  QuadratureNonConvergence,
  EmptyEnvironment,
  ZeroFriction,
  RepeatedPole,
  UnstablePole,
  NoDecoherence,
  TabulatedNotEmbeddable,
  IntegratorFailure,
  GridTooSmall,
  StepTooLarge,
  NormalizationDrift,
  PeakBelowFloor,
  FrequencyOutOfRange,
  InconsistentFlatness,
  FitNonConvergence,
  DegenerateComponents,
  ConfigInvalid,
};

constexpr std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DeltaKernelNotPointwise: return "DeltaKernelNotPointwise";
    case Errc::NegativeTime: return "NegativeTime";
    case Errc::TabulatedNotRational: return "TabulatedNotRational";
    case Errc::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case Errc::EmptyEnvironment: return "EmptyEnvironment";
    case Errc::ZeroFriction: return "ZeroFriction";
    case Errc::RepeatedPole: return "RepeatedPole";
    case Errc::UnstablePole: return "UnstablePole";
    case Errc::NoDecoherence: return "NoDecoherence";
    case Errc::TabulatedNotEmbeddable: return "TabulatedNotEmbeddable";
    case Errc::IntegratorFailure: return "IntegratorFailure";
    case Errc::GridTooSmall: return "GridTooSmall";
    case Errc::StepTooLarge: return "StepTooLarge";
    case Errc::NormalizationDrift: return "NormalizationDrift";
    case Errc::PeakBelowFloor: return "PeakBelowFloor";
    case Errc::FrequencyOutOfRange: return "FrequencyOutOfRange";
    case Errc::InconsistentFlatness: return "InconsistentFlatness";
    case Errc::FitNonConvergence: return "FitNonConvergence";
    case Errc::DegenerateComponents: return "DegenerateComponents";
    case Errc::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

/// Every failure raised by the library. `code()` names the condition so the
/// CLI can report it and pick an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }
  std::string_view name() const noexcept { return errc_name(code_); }

 private:
  Errc code_;
};

inline void require(bool condition, Errc code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace ndec
