#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ndec/decoherence.hpp"
#include "ndec/kernels.hpp"
#include "ndec/trap.hpp"
#include "ndec/units.hpp"

namespace ndec {

struct TrapConfig {
  /// Trap frequency window in rad/s.
  double omega_min = 0.0;
  double omega_max = 0.0;
  std::size_t points = 25;
  double rel_noise = 0.01;
  std::uint64_t seed = 1;
  /// Temperature of the equilibrium background in J, needed for calibration.
  double ambient_temperature = 0.0;
  std::size_t max_components = 2;
};

enum class ReferenceMode { Mean, First, Second };

/// A parsed scenario. Everything except the trap block is in reduced units.
struct ScenarioConfig {
  ReducedUnits units;
  SystemParams system;
  /// Charge of the particle in units of e; multiplies every field.
  double charge = 1.0;
  std::vector<ReservoirSpec> reservoirs;
  std::vector<FieldNoise> fields;
  TabulationOptions tabulation;
  std::optional<CatState> cat;

  double t_end = 1.0;
  std::size_t points = 101;
  std::vector<ContrastMethod> methods = {ContrastMethod::ClosedForm};
  double per_fringe = 8.0;
  std::size_t substeps = 1;
  bool snapshot = false;
  ReferenceMode reference = ReferenceMode::Mean;

  std::optional<TrapConfig> trap;

  NoiseModel model() const;
  /// Same environment in SI units (kg, s, J, N^2 s).
  NoiseModel si_model(bool fields_on = true) const;
  IonSpec ion() const;
  std::vector<double> times() const;
  CatState cat_state() const;
};

/// Parses the JSON scenario text. Unknown keys and malformed quantities raise
/// ConfigInvalid naming the offending field path.
ScenarioConfig parse_config(std::string_view json_text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Two electric fields (one white, one exponentially correlated) on a calcium
/// ion with a weak ambient reservoir: d = 7 nm, width 0.12 nm, tau = 5 us.
std::string_view fig2_config_text();

enum class Command { EffTemp, Contrast, Exact, Wigner, Heating, Invert, Fig2, Compare };

std::optional<Command> parse_command(std::string_view name);

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
};

/// Runs one subcommand and writes its files into options.out_dir. Returns the
/// names of the files written.
std::vector<std::string> run_command(Command command, ScenarioConfig config, const RunOptions& options);

}  // namespace ndec
