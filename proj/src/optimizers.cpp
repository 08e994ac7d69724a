#include "eemimo/optimizers.hpp"

#include "eemimo/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace eemimo {

namespace {

constexpr double e = std::numbers::e;

// Floor or ceiling of x within [lo, hi], whichever scores higher; ties go low.
template <class Score>
int round_by_score(double x, int lo, int hi, Score&& score) {
  const int a = std::clamp(static_cast<int>(std::floor(x)), lo, hi);
  const int b = std::clamp(static_cast<int>(std::ceil(x)), lo, hi);
  if (a == b) return a;
  return score(b) > score(a) ? b : a;
}

double ee_perfect(const HardwareProfile& hw, const PropagationScenario& sc, int M, int K, double rho) {
  return evaluate_ee(hw, sc, Scheme::ZF, {M, K, rho, PerfectCsi{}}).ee;
}

double pa_scale(const HardwareProfile& hw, const PropagationScenario& sc) {
  return hw.noise_power * sc.s_x() / hw.eta();
}

// Largest K with K·tau_sum strictly below U.
int users_limit(const HardwareProfile& hw) {
  return static_cast<int>(std::ceil(hw.U / hw.tau_sum())) - 1;
}

std::vector<double> positive_roots(const UsersPolynomial& p) {
  if (p.c4 != 0.0) return real_positive_roots({p.c4, p.c3, p.c2, p.c1, p.c0});
  std::vector<double> roots;
  if (p.c2 == 0.0) {
    if (p.c1 != 0.0 && -p.c0 / p.c1 > 0.0) roots.push_back(-p.c0 / p.c1);
    return roots;
  }
  const double disc = p.c1 * p.c1 - 4.0 * p.c2 * p.c0;
  if (disc < 0.0) return roots;
  // cancellation-free pair
  const double q = -0.5 * (p.c1 + std::copysign(std::sqrt(disc), p.c1));
  for (double r : {q / p.c2, q != 0.0 ? p.c0 / q : 0.0})
    if (r > 0.0) roots.push_back(r);
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

double optimal_rho(const HardwareProfile& hw, const PropagationScenario& sc, int M, int K) {
  if (K < 1 || M < K + 1) throw std::invalid_argument("optimal_rho: need M >= K+1 >= 2");
  const auto cc = coefficients_from_profile(hw);
  const double mk = M - K;
  const double x = mk * (cc.c_prime(K) + M * cc.d_prime(K)) / (pa_scale(hw, sc) * e) - 1.0 / e;
  return (std::exp(lambert_w0(x) + 1.0) - 1.0) / mk;
}

double antennas_stationary(const HardwareProfile& hw, const PropagationScenario& sc, int K, double rho) {
  if (K < 1 || !(rho > 0.0)) throw std::invalid_argument("optimal_antennas: need K >= 1, rho > 0");
  const auto cc = coefficients_from_profile(hw);
  const double c = pa_scale(hw, sc) * rho + cc.c_prime(K);
  const double x = rho * c / (cc.d_prime(K) * e) + (rho * K - 1.0) / e;
  return (std::exp(lambert_w0(x) + 1.0) + rho * K - 1.0) / rho;
}

// Under imperfect CSI the rate sees rho/f while the PA power still sees rho,
// so the stationarity condition is the perfect-CSI one with rho -> rho/f in
// the rate terms only.
double antennas_stationary_imperfect(const HardwareProfile& hw, const PropagationScenario& sc, int K,
                                     double rho, double tau_ul) {
  if (K < 1 || !(rho > 0.0) || !(tau_ul > 0.0))
    throw std::invalid_argument("optimal_antennas_imperfect: need K >= 1, rho > 0, tau > 0");
  const auto cc = coefficients_from_profile(hw);
  const double f = 1.0 + 1.0 / tau_ul + 1.0 / (rho * K * tau_ul);
  const double r = rho / f;
  const double c = pa_scale(hw, sc) * rho + cc.c_prime(K);
  const double x = r * c / (cc.d_prime(K) * e) + (r * K - 1.0) / e;
  return (std::exp(lambert_w0(x) + 1.0) + r * K - 1.0) / r;
}

int optimal_antennas(const HardwareProfile& hw, const PropagationScenario& sc, int K, double rho) {
  const double m = antennas_stationary(hw, sc, K, rho);
  return round_by_score(m, K + 1, std::numeric_limits<int>::max() - 1,
                        [&](int M) { return ee_perfect(hw, sc, M, K, rho); });
}

int optimal_antennas_imperfect(const HardwareProfile& hw, const PropagationScenario& sc, int K, double rho,
                               double tau_ul) {
  const double m = antennas_stationary_imperfect(hw, sc, K, rho, tau_ul);
  const Regime regime = ImperfectCsi{tau_ul};
  return round_by_score(m, K + 1, std::numeric_limits<int>::max() - 1, [&](int M) {
    return evaluate_ee(hw, sc, Scheme::ZF, {M, K, rho, regime}).ee;
  });
}

UsersPolynomial users_polynomial(const HardwareProfile& hw, const PropagationScenario& sc, double beta_bar,
                                 double rho_bar) {
  const auto cc = coefficients_from_profile(hw);
  const double t = hw.tau_sum() / hw.U;
  const double a0 = cc.C[0] + pa_scale(hw, sc) * rho_bar;
  const double a1 = cc.C[1] + beta_bar * cc.D[0];
  const double a2 = cc.C[2] + beta_bar * cc.D[1];
  const double a3 = cc.C[3] + beta_bar * cc.D[2];
  return {t * a3, -2.0 * a3, -(a2 + t * a1), -2.0 * t * a0, a0};
}

double ee_along_ray(const HardwareProfile& hw, const PropagationScenario& sc, int K, double beta_bar,
                    double rho_bar) {
  // rho·(M - K) = rho_bar·(beta_bar - 1) along the ray, so the per-UE rate is fixed
  const double net = K * (1.0 - hw.tau_sum() * K / hw.U) * hw.B * std::log2(1.0 + rho_bar * (beta_bar - 1.0));
  if (!(net > 0.0)) return 0.0;
  const auto cc = coefficients_from_profile(hw);
  return net / (pa_scale(hw, sc) * rho_bar + cc.circuit_power(beta_bar * K, K, net));
}

UsersChoice optimal_users(const HardwareProfile& hw, const PropagationScenario& sc, double beta_bar,
                          double rho_bar) {
  if (!(beta_bar > 1.0) || !(rho_bar > 0.0))
    throw std::invalid_argument("optimal_users: need beta_bar > 1, rho_bar > 0");
  const int k_max = users_limit(hw);
  if (k_max < 1) throw std::invalid_argument("optimal_users: coherence block too short for one user");
  auto score = [&](int K) { return ee_along_ray(hw, sc, K, beta_bar, rho_bar); };

  UsersChoice out;
  out.roots = positive_roots(users_polynomial(hw, sc, beta_bar, rho_bar));

  std::optional<int> best;
  double best_ee = -1.0;
  for (double r : out.roots) {
    if (r >= k_max + 1) continue;
    const int K = round_by_score(r, 1, k_max, score);
    const double v = score(K);
    if (v > best_ee || (v == best_ee && K < *best)) {
      best = K;
      best_ee = v;
    }
  }
  if (!best) {
    out.grid_fallback = true;
    for (int K = 1; K <= k_max; ++K) {
      const double v = score(K);
      if (v > best_ee) {
        best = K;
        best_ee = v;
      }
    }
    out.K = *best;
    return out;
  }
  out.K = *best;
  const double top = out.roots.back();
  out.differs_from_max_root = top >= k_max + 1 || round_by_score(top, 1, k_max, score) != out.K;
  return out;
}

int optimal_users_approx(const HardwareProfile& hw, const PropagationScenario& sc, double beta_bar,
                         double rho_bar) {
  const auto cc = coefficients_from_profile(hw);
  const double mu = (cc.C[0] + pa_scale(hw, sc) * rho_bar) / (cc.C[1] + beta_bar * cc.D[0]);
  const int k_max = users_limit(hw);
  if (!(mu > 0.0)) return 1;
  const double k = mu * (std::sqrt(1.0 + hw.U / (hw.tau_sum() * mu)) - 1.0);
  return round_by_score(k, 1, k_max, [&](int K) { return ee_along_ray(hw, sc, K, beta_bar, rho_bar); });
}

ScalingBounds scaling_bounds(const HardwareProfile& hw, const PropagationScenario& sc, int M, int K,
                             double rho) {
  const auto cc = coefficients_from_profile(hw);
  const double s = pa_scale(hw, sc);
  const double cp = cc.c_prime(K), dp = cc.d_prime(K);
  ScalingBounds b;

  const double x = s * rho * rho / dp + cp * rho / dp + K * rho - 1.0;
  if (rho > 0.0 && x >= e * e) {
    const double z = x / rho;
    b.m_lower_bound = K + z / (std::log(x) - 1.0) - 1.0 / rho;
  }
  if (rho > 1.0) b.m_large_rho = s / (2.0 * dp) * rho / std::log(rho);

  if (M > K) {
    const double y = (M - K) * (cp + M * dp) / s;
    if (y - 1.0 >= e * e) {
      const double l = std::log(y - 1.0);
      b.rho_lower_bound = ((cp + M * dp) / s - l / (M - K)) / (l - 1.0);
    }
  }
  if (M > 1) b.rho_large_m = dp / (2.0 * s) * M / std::log(static_cast<double>(M));
  return b;
}

AlternatingResult alternating_optimize(const HardwareProfile& hw, const PropagationScenario& sc,
                                       const DesignPoint& start, int max_iter) {
  if (start.K < 1 || start.M < start.K + 1 || !(start.rho > 0.0))
    throw std::invalid_argument("alternating_optimize: infeasible start");
  int M = start.M, K = start.K;
  double rho = start.rho;
  double ee = ee_perfect(hw, sc, M, K, rho);

  AlternatingResult out;
  out.trajectory.push_back({0, M, K, rho, ee});
  // every update is kept only if it does not lower the EE
  auto accept = [&](int m, int k, double r) {
    const double v = ee_perfect(hw, sc, m, k, r);
    if (v >= ee) {
      M = m;
      K = k;
      rho = r;
      ee = v;
    }
  };
  for (int it = 1; it <= max_iter; ++it) {
    const int M_prev = M, K_prev = K;

    const double beta_bar = static_cast<double>(M) / K, rho_bar = rho * K;
    const int k_new = optimal_users(hw, sc, beta_bar, rho_bar).K;
    accept(std::max(k_new + 1, static_cast<int>(std::lround(beta_bar * k_new))), k_new, rho_bar / k_new);
    accept(optimal_antennas(hw, sc, K, rho), K, rho);
    accept(M, K, optimal_rho(hw, sc, M, K));

    out.trajectory.push_back({it, M, K, rho, ee});
    if (M == M_prev && K == K_prev) {
      out.converged = true;
      break;
    }
  }
  out.point = {M, K, rho, PerfectCsi{}};
  out.result = evaluate_ee(hw, sc, Scheme::ZF, out.point);
  return out;
}

double best_rho(const HardwareProfile& hw, const PropagationScenario& sc, int M, int K, const Regime& regime) {
  if (std::holds_alternative<PerfectCsi>(regime)) return optimal_rho(hw, sc, M, K);
  auto ee = [&](double rho) { return evaluate_ee(hw, sc, Scheme::ZF, {M, K, rho, regime}).ee; };
  return golden_section_max_log(ee, rho_search_lo, rho_search_hi, rho_search_tol).x;
}

IntRange default_m_range() { return {1, 400}; }

IntRange default_k_range(const HardwareProfile& hw, const Regime& regime) {
  const HardwareProfile h = profile_for(hw, regime);
  return {1, std::min(300, static_cast<int>(std::floor(h.U / h.tau_sum())) - 1)};
}

SweepResult exhaustive_search(const HardwareProfile& hw, const PropagationScenario& sc, const Regime& regime,
                              Scheme scheme, IntRange m_range, IntRange k_range, SweepMode mode) {
  if (scheme != Scheme::ZF)
    throw std::invalid_argument("exhaustive_search: analytic sweep is ZF only; use the Monte Carlo sweep");
  const HardwareProfile h = profile_for(hw, regime);
  const int k_hi = std::min(k_range.hi, users_limit(h));
  const int k_lo = std::max(k_range.lo, 1);
  if (k_lo > k_hi || std::max(m_range.lo, k_lo + 1) > m_range.hi)
    throw std::invalid_argument("exhaustive_search: empty feasible range");

  auto cell = [&](int M, int K) {
    const double rho = best_rho(hw, sc, M, K, regime);
    const EEResult r = evaluate_ee(hw, sc, Scheme::ZF, {M, K, rho, regime});
    return SurfaceCell{M, K, rho, r.gross_rate_per_ue, r.ee, r.pa_power, r.power.circuit()};
  };

  // one column per K; M ascends so early stopping can cut a column short
  const std::size_t columns = k_hi - k_lo + 1;
  std::vector<std::vector<SurfaceCell>> per_k(columns);
  parallel_for(columns, [&](std::size_t i) {
    const int K = k_lo + static_cast<int>(i);
    auto& col = per_k[i];
    for (int M = std::max(m_range.lo, K + 1); M <= m_range.hi; ++M) {
      col.push_back(cell(M, K));
      if (mode == SweepMode::early_stop && col.size() >= 2 && col.back().ee < col[col.size() - 2].ee) break;
    }
  });

  SweepResult out;
  for (auto& col : per_k) out.surface.insert(out.surface.end(), col.begin(), col.end());
  std::sort(out.surface.begin(), out.surface.end(),
            [](const SurfaceCell& a, const SurfaceCell& b) { return a.M != b.M ? a.M < b.M : a.K < b.K; });
  const SurfaceCell* best = nullptr;
  for (const auto& c : out.surface)
    if (!best || c.ee > best->ee) best = &c;  // first in (M, K) order wins ties
  if (!best || !(best->ee > 0.0)) throw std::invalid_argument("exhaustive_search: no feasible point");
  out.best = {best->M, best->K, best->rho, regime};
  out.best_result = evaluate_ee(hw, sc, Scheme::ZF, out.best);
  return out;
}

}  // namespace eemimo
