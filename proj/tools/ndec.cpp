#include <CLI11.hpp>
#include <iostream>

#include "ndec/error.hpp"
#include "ndec/scenario.hpp"

namespace {

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonequilibrium decoherence of oscillator cat states"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"efftemp", "effective temperature T_eff(t) -> teff.csv"},
      {"contrast", "fringe contrast for the configured methods -> contrast.csv"},
      {"exact", "closed form and exact Gaussian contrast -> contrast.csv"},
      {"wigner", "closed form and phase-space grid contrast -> contrast.csv"},
      {"heating", "synthetic heating-rate data -> dataset.csv, spectrum.csv"},
      {"invert", "calibrate, fit and reconstruct T_eff -> fit_report.json, invert.csv"},
      {"fig2", "two-field scenario: contrast and T_eff curves (builtin config unless --config)"},
      {"compare", "deviation between contrast methods -> compare_report.json"},
  };
  std::vector<CLI::App*> subs;
  std::vector<CLI::Option*> seed_opts;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    auto* cfg = sub->add_option("--config", config_path, "scenario JSON file");
    if (name != "fig2") cfg->required();
    sub->add_option("--out", out_dir, "output directory");
    seed_opts.push_back(sub->add_option("--seed", seed, "override the trap seed"));
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    const auto command = *ndec::parse_command(subs[i]->get_name());
    try {
      auto cfg = config_path.empty() && command == ndec::Command::Fig2
                     ? ndec::parse_config(ndec::fig2_config_text())
                     : ndec::load_config(config_path);
      ndec::RunOptions options;
      options.out_dir = out_dir;
      if (seed_opts[i]->count() > 0) options.seed = seed;
      for (const auto& f : ndec::run_command(command, std::move(cfg), options))
        std::cout << (options.out_dir / f).string() << '\n';
      return 0;
    } catch (const ndec::Error& e) {
      std::cerr << "error " << e.what() << '\n';
      return e.code() == ndec::Errc::ConfigInvalid ? exit_config : exit_numerical;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return exit_numerical;
    }
  }
  return exit_config;
}
