#include "eemimo/rates.hpp"

#include <cmath>
#include <stdexcept>
#include <type_traits>

namespace eemimo {

namespace {

void require_zf_dims(int M, int K) {
  if (K < 1 || M < K + 1) throw std::invalid_argument("ZF rate: need M >= K+1 >= 2");
}

}  // namespace

double regime_tau_ul(const HardwareProfile& hw, const Regime& regime) {
  if (const auto* i = std::get_if<ImperfectCsi>(&regime)) return i->tau_ul;
  if (const auto* m = std::get_if<SymmetricMulticell>(&regime)) return m->cells.reuse_factor();
  return hw.tau_ul;
}

HardwareProfile profile_for(const HardwareProfile& hw, const Regime& regime) {
  HardwareProfile out = hw;
  out.tau_ul = regime_tau_ul(hw, regime);
  return out;
}

double gross_rate_zf_perfect(const HardwareProfile& hw, int M, int K, double rho) {
  require_zf_dims(M, K);
  return hw.B * std::log2(1.0 + rho * (M - K));
}

double gross_rate_zf_imperfect(const HardwareProfile& hw, int M, int K, double rho, double tau_ul) {
  require_zf_dims(M, K);
  if (rho <= 0.0) return 0.0;
  const double quality = 1.0 + 1.0 / tau_ul + 1.0 / (rho * K * tau_ul);
  return hw.B * std::log2(1.0 + rho * (M - K) / quality);
}

std::optional<double> gross_rate_zf_multicell(const HardwareProfile& hw, int M, int K, double rho,
                                              const MulticellScenario& mc) {
  require_zf_dims(M, K);
  if (rho <= 0.0) return 0.0;
  const double tau = mc.reuse_factor();
  const double mk = M - K;
  const double denom = mc.i_pc() + (1.0 + mc.i_pc() + 1.0 / (rho * K * tau)) * (1.0 + K * rho * mc.i_total()) / (rho * mk) -
                       K * (1.0 + mc.i_pc2()) / mk;
  if (!(denom > 0.0)) return std::nullopt;
  return hw.B * std::log2(1.0 + 1.0 / denom);
}

std::optional<double> gross_se_zf(const HardwareProfile& hw, const DesignPoint& p) {
  return std::visit(
      [&](const auto& r) -> std::optional<double> {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, PerfectCsi>)
          return gross_rate_zf_perfect(hw, p.M, p.K, p.rho) / hw.B;
        else if constexpr (std::is_same_v<R, ImperfectCsi>)
          return gross_rate_zf_imperfect(hw, p.M, p.K, p.rho, r.tau_ul) / hw.B;
        else {
          const auto rate = gross_rate_zf_multicell(hw, p.M, p.K, p.rho, r.cells);
          if (!rate) return std::nullopt;
          return *rate / hw.B;
        }
      },
      p.regime);
}

double pa_power_zf(const HardwareProfile& hw, const PropagationScenario& sc, int K, double rho) {
  return hw.noise_power * rho * sc.s_x() * K / hw.eta();
}

EEResult evaluate_ee(const HardwareProfile& hw_in, const PropagationScenario& sc, Scheme scheme,
                     const DesignPoint& point) {
  if (scheme != Scheme::ZF) throw std::invalid_argument("evaluate_ee: closed forms exist for ZF only");
  const HardwareProfile hw = profile_for(hw_in, point.regime);
  EEResult r;
  const int M = point.M, K = point.K;
  if (K < 1 || M < K + 1 || K * hw.tau_sum() > hw.U || point.rho < 0.0) return r;

  const auto se = gross_se_zf(hw, point);
  if (!se) return r;
  r.gross_rate_per_ue = hw.B * *se;
  r.net_sum_rate = K * (1.0 - hw.tau_sum() * K / hw.U) * r.gross_rate_per_ue;
  r.pa_power = pa_power_zf(hw, sc, K, point.rho);
  r.power = circuit_power(hw, Scheme::ZF, M, K, r.net_sum_rate).with_tx(r.pa_power);
  r.ee = r.net_sum_rate / r.power.total;
  r.feasible = true;
  return r;
}

}  // namespace eemimo
