#pragma once

#include "eemimo/optimizers.hpp"
#include "eemimo/power_model.hpp"
#include "eemimo/rates.hpp"
#include "eemimo/scenario.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace eemimo {

enum class GeometryKind { disc, square };
enum class RegimeKind { perfect, imperfect, multicell };

struct ScenarioConfig {
  GeometryKind geometry = GeometryKind::disc;
  double d_min = 35;       // m
  double d_max = 250;      // m, disc
  double cell_side = 500;  // m, square cells and the multi-cell grid
  double kappa = 3.76;
  double dbar = std::pow(10.0, -3.53);  // -35.3 dB at 1 m
  MinDistanceRule min_distance_rule = MinDistanceRule::serving_cell_only;

  // The single-cell scenario the geometry describes.
  PropagationScenario propagation() const;
  // Square cell used by the multi-cell regime.
  PropagationScenario multicell_cell() const;
};

struct ExperimentConfig {
  HardwareProfile profile;
  ScenarioConfig scenario;
  RegimeKind regime = RegimeKind::perfect;
  Scheme scheme = Scheme::ZF;
  int reuse = 1;
  IntRange m_range{1, 400};
  IntRange k_range{1, 300};  // clipped to the regime's user limit
  int trials = 1000;
  int blocks = 100;  // Monte Carlo sweep
  int mc_step = 1;   // Monte Carlo sweep coarse grid spacing
  std::uint64_t seed = 1;
  DesignPoint start{3, 1, 1.0};    // alternating algorithm
  int point_m = 0;                 // 0: use the located optimum
  int point_k = 0;
  double point_rho = 0;            // ZF only; 0: best rho
  std::filesystem::path output_dir = ".";

  // Throws ConfigError naming the offending key.
  void validate() const;
  Regime regime_value() const;
  PropagationScenario propagation() const;  // depends on the regime
  IntRange effective_k_range() const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Line-oriented key = value with [profile], [scenario] and [experiment]
// sections and # or ; comment lines. Missing keys keep their defaults.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text);
void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path);
std::string format_config(const ExperimentConfig& cfg);

Scheme parse_scheme(const std::string& s);
RegimeKind parse_regime(const std::string& s);
const char* to_string(RegimeKind r);

}  // namespace eemimo
