#pragma once

#include <string>
#include <vector>

namespace eemimo {

enum class Scheme { ZF, MRT_MRC, MMSE };

// Hardware and protocol constants, SI units throughout (W, Hz, W per bit/s, flops/W).
struct HardwareProfile {
  double B = 20e6;
  double U = 1800;
  double zeta_ul = 0.4;
  double zeta_dl = 0.6;
  double eta_ul = 0.3;
  double eta_dl = 0.39;
  double noise_power = 2.511886431509582e-13;  // B·sigma^2, -96 dBm
  double tau_ul = 1;
  double tau_dl = 1;
  double P_FIX = 18;
  double P_SYN = 2;
  double P_BS = 1;
  double P_UE = 0.1;
  double P_COD = 0.1e-9;
  double P_DEC = 0.8e-9;
  double P_BT = 0.25e-9;
  double L_BS = 12.8e9;
  double L_UE = 5e9;
  int Q = 3;

  static HardwareProfile defaults() { return {}; }

  // Throws std::invalid_argument on a broken invariant; returns warnings.
  std::vector<std::string> validate() const;

  double eta() const { return 1.0 / (zeta_ul / eta_ul + zeta_dl / eta_dl); }
  double tau_sum() const { return tau_ul + tau_dl; }
  // Largest K with K·tau_sum <= U.
  int max_users() const;
};

// P_CP = sum_i C_i K^i + M sum_i D_i K^i + A·(net sum rate), ZF processing.
struct CircuitCoefficients {
  double A;
  double C[4];
  double D[3];

  double c_prime(double K) const;  // sum_i C_i K^(i-1)
  double d_prime(double K) const;  // sum_i D_i K^(i-1)
  double circuit_power(double M, double K, double net_sum_rate) const;
};

CircuitCoefficients coefficients_from_profile(const HardwareProfile& hw);

struct PowerBreakdown {
  double p_tx = 0;   // power amplifiers
  double p_fix = 0;  // fixed
  double p_tc = 0;   // transceiver chains
  double p_ce = 0;   // channel estimation
  double p_cd = 0;   // coding and decoding
  double p_bh = 0;   // backhaul
  double p_lp = 0;   // linear processing
  double total = 0;

  double circuit() const { return p_fix + p_tc + p_ce + p_cd + p_bh + p_lp; }
  PowerBreakdown with_tx(double pa_power) const;
};

// Circuit part of the power model; p_tx is left at zero.
PowerBreakdown circuit_power(const HardwareProfile& hw, Scheme scheme, int M, int K, double sum_rate);

// Arithmetic rate (flops/s) of channel estimation, precoder/combiner
// computation and per-symbol processing.
double complexity_flops(const HardwareProfile& hw, Scheme scheme, int M, int K);

const char* to_string(Scheme s);

}  // namespace eemimo
