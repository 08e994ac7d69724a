#include "eemimo/config.hpp"
#include "eemimo/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

int main(int argc, char** argv) {
  using namespace eemimo;
  CLI::App app{"Energy-efficient multi-user MIMO design: optimizers, sweeps and Monte Carlo checks"};
  std::string command;
  std::optional<std::string> config_path, out_dir, scheme, regime;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials, reuse;

  app.add_option("command", command, "optimize | sweep | curves | montecarlo | multicell | check")
      ->required()
      ->check(CLI::IsMember(subcommands()));
  app.add_option("--config", config_path, "INI file with [profile], [scenario], [experiment]")
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "directory for the CSV files");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--trials", trials, "Monte Carlo blocks for estimates")->check(CLI::PositiveNumber);
  app.add_option("--scheme", scheme, "processing scheme")->check(CLI::IsMember({"zf", "mrt", "mmse"}));
  app.add_option("--regime", regime, "CSI / cell regime")->check(CLI::IsMember({"perfect", "imperfect", "multicell"}));
  app.add_option("--reuse", reuse, "pilot reuse factor")->check(CLI::IsMember({1, 2, 4}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    ExperimentConfig cfg = config_path ? load_config(*config_path) : ExperimentConfig{};
    if (out_dir) cfg.output_dir = *out_dir;
    if (seed) cfg.seed = *seed;
    if (trials) cfg.trials = *trials;
    if (scheme) cfg.scheme = parse_scheme(*scheme);
    if (regime) cfg.regime = parse_regime(*regime);
    if (reuse) cfg.reuse = *reuse;
    cfg.validate();
    for (const auto& w : cfg.profile.validate()) std::cerr << "warning: " << w << '\n';
    return run_subcommand(command, cfg, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
