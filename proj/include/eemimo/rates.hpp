#pragma once

#include "eemimo/power_model.hpp"
#include "eemimo/scenario.hpp"

#include <optional>
#include <variant>

namespace eemimo {

struct PerfectCsi {};
struct ImperfectCsi {
  double tau_ul = 1;
};
struct SymmetricMulticell {
  MulticellScenario cells;
};

using Regime = std::variant<PerfectCsi, ImperfectCsi, SymmetricMulticell>;

// Pilot length factor of a regime; the profile's value for perfect CSI.
double regime_tau_ul(const HardwareProfile& hw, const Regime& regime);
// Profile with tau_ul replaced by the regime's pilot length.
HardwareProfile profile_for(const HardwareProfile& hw, const Regime& regime);

struct DesignPoint {
  int M = 1;
  int K = 1;
  double rho = 0;
  Regime regime = PerfectCsi{};
};

struct EEResult {
  double gross_rate_per_ue = 0;  // bit/s
  double net_sum_rate = 0;       // bit/s
  double pa_power = 0;           // W
  PowerBreakdown power;
  double ee = 0;  // bit/J
  bool feasible = false;
};

// bit/s
double gross_rate_zf_perfect(const HardwareProfile& hw, int M, int K, double rho);
double gross_rate_zf_imperfect(const HardwareProfile& hw, int M, int K, double rho, double tau_ul);
// nullopt when the SINR denominator is not positive
std::optional<double> gross_rate_zf_multicell(const HardwareProfile& hw, int M, int K, double rho,
                                              const MulticellScenario& mc);
// Spectral efficiency a ZF design point delivers, bit/symbol; nullopt if infeasible.
std::optional<double> gross_se_zf(const HardwareProfile& hw, const DesignPoint& p);

// W, uplink plus downlink
double pa_power_zf(const HardwareProfile& hw, const PropagationScenario& sc, int K, double rho);

// Only ZF has closed-form rates; other schemes throw std::invalid_argument.
EEResult evaluate_ee(const HardwareProfile& hw, const PropagationScenario& sc, Scheme scheme,
                     const DesignPoint& point);

}  // namespace eemimo
