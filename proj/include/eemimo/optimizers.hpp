#pragma once

#include "eemimo/rates.hpp"
#include "eemimo/specfun.hpp"

#include <optional>
#include <vector>

namespace eemimo {

// rho bracket and tolerance of the numeric power search
inline constexpr double rho_search_lo = 1e-6;
inline constexpr double rho_search_hi = 1e4;
inline constexpr double rho_search_tol = 1e-8;

// Stationary points before rounding.
double antennas_stationary(const HardwareProfile& hw, const PropagationScenario& sc, int K, double rho);
double antennas_stationary_imperfect(const HardwareProfile& hw, const PropagationScenario& sc, int K,
                                     double rho, double tau_ul);

double optimal_rho(const HardwareProfile& hw, const PropagationScenario& sc, int M, int K);
int optimal_antennas(const HardwareProfile& hw, const PropagationScenario& sc, int K, double rho);
int optimal_antennas_imperfect(const HardwareProfile& hw, const PropagationScenario& sc, int K, double rho,
                               double tau_ul);

// Polynomial in K whose positive roots are the stationary points of the EE
// along M = beta_bar·K, rho = rho_bar/K. Degree drops to 2 when C3 = D2 = 0.
struct UsersPolynomial {
  double c4, c3, c2, c1, c0;
};
UsersPolynomial users_polynomial(const HardwareProfile& hw, const PropagationScenario& sc, double beta_bar,
                                 double rho_bar);

struct UsersChoice {
  int K = 1;
  std::vector<double> roots;          // positive real stationary points
  bool grid_fallback = false;         // no usable root
  bool differs_from_max_root = false; // best root is not the largest one
};

UsersChoice optimal_users(const HardwareProfile& hw, const PropagationScenario& sc, double beta_bar,
                          double rho_bar);
int optimal_users_approx(const HardwareProfile& hw, const PropagationScenario& sc, double beta_bar,
                         double rho_bar);

// EE at K on the ray M = beta_bar·K (not rounded), rho = rho_bar/K.
double ee_along_ray(const HardwareProfile& hw, const PropagationScenario& sc, int K, double beta_bar,
                    double rho_bar);

struct ScalingBounds {
  std::optional<double> m_lower_bound;    // nullopt when the validity condition fails
  std::optional<double> rho_lower_bound;
  std::optional<double> m_large_rho;      // B·sigma^2·S_x/(2·eta·D')·rho/ln(rho), rho > 1
  std::optional<double> rho_large_m;      // eta·D'/(2·B·sigma^2·S_x)·M/ln(M)
};
ScalingBounds scaling_bounds(const HardwareProfile& hw, const PropagationScenario& sc, int M, int K,
                             double rho);

struct TrajectoryStep {
  int iteration;
  int M;
  int K;
  double rho;
  double ee;
};

struct AlternatingResult {
  DesignPoint point;
  EEResult result;
  std::vector<TrajectoryStep> trajectory;  // entry 0 is the start
  bool converged = false;
};

AlternatingResult alternating_optimize(const HardwareProfile& hw, const PropagationScenario& sc,
                                       const DesignPoint& start, int max_iter = 50);

// Best rho for a fixed (M, K): closed form for perfect CSI, golden search on
// ln rho otherwise.
double best_rho(const HardwareProfile& hw, const PropagationScenario& sc, int M, int K, const Regime& regime);

struct IntRange {
  int lo;
  int hi;  // inclusive
};

struct SurfaceCell {
  int M;
  int K;
  double rho;
  double gross_rate;  // bit/s per UE
  double ee;          // bit/J
  double p_tx;        // W
  double p_cp;        // W
};

struct SweepResult {
  DesignPoint best;
  EEResult best_result;
  std::vector<SurfaceCell> surface;
};

enum class SweepMode {
  full_grid,
  early_stop,  // for each K, the scan over M stops once the EE starts to decrease
};

IntRange default_m_range();
IntRange default_k_range(const HardwareProfile& hw, const Regime& regime);

SweepResult exhaustive_search(const HardwareProfile& hw, const PropagationScenario& sc, const Regime& regime,
                              Scheme scheme, IntRange m_range, IntRange k_range,
                              SweepMode mode = SweepMode::full_grid);

}  // namespace eemimo
