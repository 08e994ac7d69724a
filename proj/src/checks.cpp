#include "eemimo/experiments.hpp"
#include "eemimo/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace eemimo {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double ee_zf(const HardwareProfile& hw, const PropagationScenario& sc, int M, int K, double rho) {
  return evaluate_ee(hw, sc, Scheme::ZF, {M, K, rho, PerfectCsi{}}).ee;
}

CheckResult lambert_suite() {
  double worst_residual = 0;
  bool sandwich = true;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const double x = std::exp(1.0 + (std::log(1e6) - 1.0) * i / (n - 1));
    const double w = lambert_w0(x);
    worst_residual = std::max(worst_residual, rel(w * std::exp(w), x));
    const auto b = exp_lambert_bounds(x);
    const double v = std::exp(w + 1.0);
    sandwich = sandwich && b.lower <= v * (1 + 1e-14) && v <= b.upper * (1 + 1e-14);
  }
  return {"lambert w0 round trip and bounds", sandwich && worst_residual <= 1e-10,
          "max residual " + sci(worst_residual) + (sandwich ? ", bounds hold" : ", bounds violated")};
}

CheckResult average_inverse_attenuation_mc(const PropagationScenario& sc, std::uint64_t seed) {
  CounterRng rng(seed, 0, 0);
  const int n = 1000000;
  std::vector<double> v(n);
  for (auto& x : v) x = 1.0 / sc.attenuation(sc.sample_user_location([&] { return rng.uniform(); }).norm());
  const double mc = pairwise_sum(v) / n;
  const double err = rel(sc.s_x(), mc);
  return {"average inverse attenuation vs sampling", err <= 5e-3, "relative gap " + sci(err)};
}

CheckResult rho_closed_form(const HardwareProfile& hw, const PropagationScenario& sc) {
  double worst = 0;
  const int k_max = hw.max_users() - 1;
  for (auto [M, K] : {std::pair{50, 10}, {165, 104}, {300, 150}, {400, 20}, {30, 29}}) {
    if (K > k_max || M < K + 1) continue;
    const double closed = optimal_rho(hw, sc, M, K);
    auto f = [&](double r) { return ee_zf(hw, sc, M, K, r); };
    const double oracle = golden_section_max_log(f, rho_search_lo, rho_search_hi, 1e-12).x;
    worst = std::max(worst, rel(closed, oracle));
  }
  return {"closed-form rho vs golden search", worst <= 1e-6, "max relative gap " + sci(worst)};
}

CheckResult antennas_closed_form(const HardwareProfile& hw, const PropagationScenario& sc) {
  double worst = 0;
  const int k_max = hw.max_users() - 1;
  for (int K : {1, 10, 50, 104, 200}) {
    if (K > k_max) continue;
    for (double rho : {0.1, 1.0, 5.0}) {
      const int closed = optimal_antennas(hw, sc, K, rho);
      double best = 0;
      for (int M = K + 1; M <= 5000; ++M) best = std::max(best, ee_zf(hw, sc, M, K, rho));
      worst = std::max(worst, rel(ee_zf(hw, sc, closed, K, rho), best));
    }
  }
  return {"closed-form M vs grid", worst <= 1e-12, "max EE shortfall " + sci(worst)};
}

CheckResult users_closed_form(const HardwareProfile& hw, const PropagationScenario& sc) {
  double worst = 0;
  for (auto [beta, rho_bar] : {std::pair{1.587, 91.0}, {2.0, 50.0}, {3.0, 200.0}, {1.2, 10.0}}) {
    const int closed = optimal_users(hw, sc, beta, rho_bar).K;
    double best = 0;
    for (int K = 1; K * hw.tau_sum() < hw.U; ++K) best = std::max(best, ee_along_ray(hw, sc, K, beta, rho_bar));
    worst = std::max(worst, rel(ee_along_ray(hw, sc, closed, beta, rho_bar), best));
  }
  return {"closed-form K vs grid", worst <= 1e-12, "max EE shortfall " + sci(worst)};
}

CheckResult coefficient_form(const HardwareProfile& hw) {
  const auto cc = coefficients_from_profile(hw);
  double worst = 0;
  for (auto [M, K] : {std::pair{165, 104}, {10, 3}, {400, 300}, {2, 1}}) {
    if (K * hw.tau_sum() > hw.U) continue;
    const double rate = 1e9 * K;
    worst = std::max(worst, rel(circuit_power(hw, Scheme::ZF, M, K, rate).circuit(), cc.circuit_power(M, K, rate)));
  }
  return {"circuit power coefficient form", worst <= 1e-12, "max relative gap " + sci(worst)};
}

CheckResult alternating(const HardwareProfile& hw, const PropagationScenario& sc, const DesignPoint& start) {
  const AlternatingResult a = alternating_optimize(hw, sc, start);
  bool monotone = true;
  for (std::size_t i = 1; i < a.trajectory.size(); ++i)
    monotone = monotone && a.trajectory[i].ee >= a.trajectory[i - 1].ee;
  const SweepResult s =
      exhaustive_search(hw, sc, PerfectCsi{}, Scheme::ZF, default_m_range(), default_k_range(hw, PerfectCsi{}));
  const bool same = a.point.M == s.best.M && a.point.K == s.best.K;
  return {"alternating algorithm reaches the sweep optimum", a.converged && monotone && same,
          "(" + std::to_string(a.point.M) + ", " + std::to_string(a.point.K) + ") vs (" +
              std::to_string(s.best.M) + ", " + std::to_string(s.best.K) + ")" +
              (monotone ? "" : ", EE decreased")};
}

CheckResult wishart(const PropagationScenario& sc, std::uint64_t seed) {
  const WishartCheck w = wishart_inverse_trace_check(sc, 20, 10, 20000, seed);
  const double err = rel(w.empirical, w.analytic);
  return {"inverse Wishart trace", err <= 0.02, "relative gap " + sci(err)};
}

CheckResult equal_rate(const HardwareProfile& hw, const PropagationScenario& sc, std::uint64_t seed) {
  const double sigma2 = hw.noise_power / hw.B;
  const double rate = 3.0 * hw.B;
  const double target = std::exp2(3.0) - 1.0;
  double worst_rate = 0, worst_duality = 0;
  for (std::uint64_t b = 0; b < 20; ++b) {
    const ChannelBlock blk = generate_block(sc, 40, 10, seed, b);
    const auto G = *combiner(blk.H, Scheme::ZF, {}, sigma2);
    const auto p = equal_rate_power_allocation(G, blk.H, rate, hw.B, sigma2, LinkDirection::uplink);
    if (!p) return {"equal-rate allocation", false, "ZF block infeasible"};
    const Eigen::VectorXd s = uplink_sinr(G, blk.H, *p, sigma2);
    for (double v : s) worst_rate = std::max(worst_rate, rel(v, target));

    const ChannelBlock small = generate_block(sc, 20, 5, seed, b);
    const double low = 0.5 * hw.B;
    const auto ul = equal_rate_power_allocation(small.H, small.H, low, hw.B, sigma2, LinkDirection::uplink);
    const auto dl = equal_rate_power_allocation(small.H, small.H, low, hw.B, sigma2, LinkDirection::downlink);
    if (ul && dl) worst_duality = std::max(worst_duality, rel(ul->sum(), dl->sum()));
  }
  return {"equal-rate allocation and duality", worst_rate <= 1e-9 && worst_duality <= 1e-9,
          "SINR gap " + sci(worst_rate) + ", uplink/downlink gap " + sci(worst_duality)};
}

CheckResult zf_montecarlo(const HardwareProfile& hw, const PropagationScenario& sc, std::uint64_t seed) {
  const int M = 60, K = 20;
  const double rho = optimal_rho(hw, sc, M, K);
  const McEstimate est = estimate_ee(hw, sc, Scheme::ZF, M, K, RhoTarget{rho}, 2000, seed);
  const double analytic = ee_zf(hw, sc, M, K, rho);
  const double err = rel(est.mean, analytic);
  return {"ZF Monte Carlo vs closed form", err <= 0.02, "relative gap " + sci(err)};
}

CheckResult config_round_trip(const ExperimentConfig& cfg) {
  const std::string once = format_config(cfg);
  const ExperimentConfig back = parse_config(once);
  const bool ok = format_config(back) == once && back.scenario.kappa == cfg.scenario.kappa;
  return {"config save/load round trip", ok, ok ? "identical" : "differs"};
}

}  // namespace

std::vector<CheckResult> run_property_checks(const ExperimentConfig& cfg) {
  const HardwareProfile& hw = cfg.profile;
  const PropagationScenario sc = cfg.scenario.propagation();
  return {
      lambert_suite(),
      average_inverse_attenuation_mc(sc, cfg.seed),
      rho_closed_form(hw, sc),
      antennas_closed_form(hw, sc),
      users_closed_form(hw, sc),
      coefficient_form(hw),
      alternating(hw, sc, cfg.start),
      wishart(sc, cfg.seed),
      equal_rate(hw, sc, cfg.seed),
      zf_montecarlo(hw, sc, cfg.seed),
      config_round_trip(cfg),
  };
}

}  // namespace eemimo
