#pragma once

#include <string_view>

namespace ndec {

namespace si {
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double k_B = 1.380649e-23;
inline constexpr double e = 1.602176634e-19;
inline constexpr double amu = 1.66053906660e-27;
}  // namespace si

enum class Dimension {
  Dimensionless,
  Length,
  Time,
  Mass,
  Frequency,
  Energy,
  Friction,
  FieldIntensity,
  ForceNoise,
  Charge,
};

std::string_view dimension_name(Dimension d);

/// A value read from "<number> <unit>" text. `si` holds the SI value unless
/// `reduced` is set, in which case the number was already in reduced units.
struct Quantity {
  double value = 0.0;
  Dimension dimension = Dimension::Dimensionless;
  bool reduced = false;
};

/// Parses e.g. "7 nm", "5 us", "1e-9 V^2 s/m^2", "300 K", "2 MHz", "0.3 reduced".
/// Temperatures in K become energies; Hz-family frequencies become angular.
Quantity parse_quantity(std::string_view text);

/// Reduced units with hbar = k_B = 1 built on a length and a time scale.
/// Energies are hbar/time, masses hbar*time/length^2, charges multiples of e.
struct ReducedUnits {
  double length = 1e-9;
  double time = 1e-6;

  double scale(Dimension d) const;
  double to_reduced(double value, Dimension d) const { return value / scale(d); }
  double to_si(double reduced_value, Dimension d) const { return reduced_value * scale(d); }
  double reduced(const Quantity& q) const { return q.reduced ? q.value : to_reduced(q.value, q.dimension); }
};

}  // namespace ndec
