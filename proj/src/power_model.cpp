#include "eemimo/power_model.hpp"

#include <cmath>
#include <stdexcept>

namespace eemimo {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("hardware profile: ") + what);
}

// Per-block flop counts of the precoder/combiner computation.
double lpc_block_flops(Scheme scheme, double M, double K, int Q) {
  const double zf = K * K * K / 3.0 + 3.0 * M * K * K + M * K;
  switch (scheme) {
    case Scheme::ZF: return zf;
    case Scheme::MRT_MRC: return 3.0 * M * K;
    case Scheme::MMSE: return Q * zf;
  }
  return 0.0;
}

void check_dimensions(const HardwareProfile& hw, int M, int K) {
  if (M < 1 || K < 0) throw std::invalid_argument("power model: need M >= 1, K >= 0");
  if (K * hw.tau_sum() > hw.U) throw std::invalid_argument("power model: pilot overhead exceeds coherence block");
}

}  // namespace

std::vector<std::string> HardwareProfile::validate() const {
  require(B > 0, "B must be positive");
  require(U >= 1, "U must be >= 1");
  require(zeta_ul >= 0 && zeta_dl >= 0, "zeta fractions must be non-negative");
  require(std::abs(zeta_ul + zeta_dl - 1.0) <= 1e-12, "zeta_ul + zeta_dl must equal 1");
  require(eta_ul > 0 && eta_ul <= 1 && eta_dl > 0 && eta_dl <= 1, "PA efficiencies must lie in (0, 1]");
  require(noise_power > 0, "noise power must be positive");
  require(tau_ul >= 1 && tau_dl >= 1, "relative pilot lengths must be >= 1");
  require(P_FIX >= 0 && P_SYN >= 0 && P_BS >= 0 && P_UE >= 0, "circuit powers must be non-negative");
  require(P_COD >= 0 && P_DEC >= 0 && P_BT >= 0, "rate-dependent powers must be non-negative");
  require(L_BS > 0 && L_UE > 0, "computational efficiencies must be positive");
  require(Q >= 1, "Q must be a positive integer");
  std::vector<std::string> warnings;
  if (tau_dl > 1.5) warnings.emplace_back("tau_dl > 1.5 makes D2 negative");
  return warnings;
}

int HardwareProfile::max_users() const { return static_cast<int>(std::floor(U / tau_sum())); }

double CircuitCoefficients::c_prime(double K) const {
  return C[0] / K + C[1] + C[2] * K + C[3] * K * K;
}

double CircuitCoefficients::d_prime(double K) const { return D[0] / K + D[1] + D[2] * K; }

double CircuitCoefficients::circuit_power(double M, double K, double net_sum_rate) const {
  return K * (c_prime(K) + M * d_prime(K)) + A * net_sum_rate;
}

CircuitCoefficients coefficients_from_profile(const HardwareProfile& hw) {
  const double bu = hw.B / hw.U;
  return CircuitCoefficients{
      hw.P_COD + hw.P_DEC + hw.P_BT,
      {hw.P_FIX + hw.P_SYN, hw.P_UE, 4.0 * bu * hw.tau_dl / hw.L_UE, bu / (3.0 * hw.L_BS)},
      {hw.P_BS, hw.B / hw.L_BS * (2.0 + 1.0 / hw.U), bu / hw.L_BS * (3.0 - 2.0 * hw.tau_dl)}};
}

PowerBreakdown PowerBreakdown::with_tx(double pa_power) const {
  PowerBreakdown b = *this;
  b.p_tx = pa_power;
  b.total = b.p_tx + b.circuit();
  return b;
}

PowerBreakdown circuit_power(const HardwareProfile& hw, Scheme scheme, int M, int K, double sum_rate) {
  check_dimensions(hw, M, K);
  const double m = M, k = K;
  const double bu = hw.B / hw.U;
  PowerBreakdown p;
  p.p_fix = hw.P_FIX;
  p.p_tc = m * hw.P_BS + hw.P_SYN + k * hw.P_UE;
  p.p_ce = bu * (2.0 * hw.tau_ul * m * k * k / hw.L_BS + 4.0 * hw.tau_dl * k * k / hw.L_UE);
  p.p_cd = (hw.P_COD + hw.P_DEC) * sum_rate;
  p.p_bh = hw.P_BT * sum_rate;
  const double data_fraction = 1.0 - hw.tau_sum() * k / hw.U;
  p.p_lp = hw.B * data_fraction * 2.0 * m * k / hw.L_BS + bu * lpc_block_flops(scheme, m, k, hw.Q) / hw.L_BS;
  p.total = p.circuit();
  return p;
}

double complexity_flops(const HardwareProfile& hw, Scheme scheme, int M, int K) {
  check_dimensions(hw, M, K);
  const double m = M, k = K;
  const double bu = hw.B / hw.U;
  const double estimation = bu * (2.0 * hw.tau_ul * m * k * k + 4.0 * hw.tau_dl * k * k);
  const double per_symbol = hw.B * (1.0 - hw.tau_sum() * k / hw.U) * 2.0 * m * k;
  return estimation + per_symbol + bu * lpc_block_flops(scheme, m, k, hw.Q);
}

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::ZF: return "zf";
    case Scheme::MRT_MRC: return "mrt";
    case Scheme::MMSE: return "mmse";
  }
  return "?";
}

}  // namespace eemimo
