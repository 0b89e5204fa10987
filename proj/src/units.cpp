#include "ndec/units.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "ndec/error.hpp"

namespace ndec {

namespace {

struct UnitEntry {
  std::string_view name;
  Dimension dimension;
  double factor;
};

constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr std::array<UnitEntry, 31> unit_table{{
    {"m", Dimension::Length, 1.0},
    {"mm", Dimension::Length, 1e-3},
    {"um", Dimension::Length, 1e-6},
    {"nm", Dimension::Length, 1e-9},
    {"s", Dimension::Time, 1.0},
    {"ms", Dimension::Time, 1e-3},
    {"us", Dimension::Time, 1e-6},
    {"ns", Dimension::Time, 1e-9},
    {"kg", Dimension::Mass, 1.0},
    {"amu", Dimension::Mass, si::amu},
    {"rad/s", Dimension::Frequency, 1.0},
    {"krad/s", Dimension::Frequency, 1e3},
    {"Mrad/s", Dimension::Frequency, 1e6},
    {"Hz", Dimension::Frequency, two_pi},
    {"kHz", Dimension::Frequency, two_pi * 1e3},
    {"MHz", Dimension::Frequency, two_pi * 1e6},
    {"K", Dimension::Energy, si::k_B},
    {"mK", Dimension::Energy, si::k_B * 1e-3},
    {"uK", Dimension::Energy, si::k_B * 1e-6},
    {"J", Dimension::Energy, 1.0},
    {"kg/s", Dimension::Friction, 1.0},
    {"V^2 s/m^2", Dimension::FieldIntensity, 1.0},
    {"V^2/m^2 s", Dimension::FieldIntensity, 1.0},
    {"N^2 s", Dimension::ForceNoise, 1.0},
    {"C", Dimension::Charge, 1.0},
    {"e", Dimension::Charge, si::e},
    {"1", Dimension::Dimensionless, 1.0},
    {"", Dimension::Dimensionless, 1.0},
    {"rad", Dimension::Dimensionless, 1.0},
    {"1/s", Dimension::Frequency, 1.0},
    {"1/us", Dimension::Frequency, 1e6},
}};

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view dimension_name(Dimension d) {
  switch (d) {
    case Dimension::Dimensionless: return "dimensionless";
    case Dimension::Length: return "length";
    case Dimension::Time: return "time";
    case Dimension::Mass: return "mass";
    case Dimension::Frequency: return "frequency";
    case Dimension::Energy: return "energy";
    case Dimension::Friction: return "friction";
    case Dimension::FieldIntensity: return "field intensity";
    case Dimension::ForceNoise: return "force noise";
    case Dimension::Charge: return "charge";
  }
  return "unknown";
}

Quantity parse_quantity(std::string_view text) {
  text = strip(text);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  require(ec == std::errc() && std::isfinite(value), Errc::InvalidArgument,
          "expected '<number> <unit>', got '" + std::string(text) + "'");
  const auto unit = strip(text.substr(std::size_t(end - text.data())));
  if (unit == "reduced") return {value, Dimension::Dimensionless, true};
  for (const auto& u : unit_table)
    if (u.name == unit) return {value * u.factor, u.dimension, false};
  throw Error(Errc::InvalidArgument, "unknown unit '" + std::string(unit) + "'");
}

double ReducedUnits::scale(Dimension d) const {
  const double energy = si::hbar / time;
  const double force = energy / length;
  switch (d) {
    case Dimension::Dimensionless: return 1.0;
    case Dimension::Length: return length;
    case Dimension::Time: return time;
    case Dimension::Mass: return si::hbar * time / (length * length);
    case Dimension::Frequency: return 1.0 / time;
    case Dimension::Energy: return energy;
    case Dimension::Friction: return si::hbar / (length * length);
    case Dimension::ForceNoise: return force * force * time;
    case Dimension::FieldIntensity: return force * force * time / (si::e * si::e);
    case Dimension::Charge: return si::e;
  }
  return 1.0;
}

}  // namespace ndec
