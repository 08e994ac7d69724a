#include "eemimo/experiments.hpp"

#include "eemimo/montecarlo.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>

namespace eemimo {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(const std::string& v) { return v; }
std::string fmt(const char* v) { return v; }

class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, std::initializer_list<const char*> header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    const char* sep = "";
    for (const char* h : header) {
      out_ << sep << h;
      sep = ",";
    }
    out_ << '\n';
  }

  template <class... T>
  void row(const T&... v) {
    const char* sep = "";
    ((out_ << sep << fmt(v), sep = ","), ...);
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

std::filesystem::path output(const ExperimentConfig& cfg, const char* name) {
  std::filesystem::create_directories(cfg.output_dir);
  return cfg.output_dir / name;
}

HardwareProfile regime_profile(const ExperimentConfig& cfg) { return profile_for(cfg.profile, cfg.regime_value()); }

double overhead(const HardwareProfile& hw, int K) { return K * (1.0 - hw.tau_sum() * K / hw.U); }

// Downlink radiated power per antenna, time-averaged over the frame.
double dl_per_antenna(const HardwareProfile& hw, double pa_power, int M) {
  return pa_power * hw.eta() * hw.zeta_dl / M;
}

double area_km2(const PropagationScenario& sc) { return sc.area() / 1e6; }

void require_perfect_for_mc(const ExperimentConfig& cfg, const char* cmd) {
  if (cfg.scheme != Scheme::ZF && cfg.regime != RegimeKind::perfect)
    throw std::invalid_argument(std::string(cmd) + ": MRT and MMSE are simulated with perfect CSI only");
}

McSweepOptions sweep_options(const ExperimentConfig& cfg) {
  McSweepOptions o;
  o.blocks = cfg.blocks;
  o.seed = cfg.seed;
  o.step = cfg.mc_step;
  o.refine = cfg.mc_step > 1;
  if (cfg.scheme == Scheme::MMSE) o.se_tol = 1e-3;
  return o;
}

McSweepResult mc_sweep(const ExperimentConfig& cfg, IntRange m, IntRange k) {
  return montecarlo_sweep(cfg.profile, cfg.propagation(), cfg.scheme, m, k, sweep_options(cfg));
}

double mc_circuit(const HardwareProfile& hw, Scheme scheme, const McSweepCell& c) {
  return circuit_power(hw, scheme, c.M, c.K, overhead(hw, c.K) * hw.B * c.se).circuit();
}

}  // namespace

void run_optimize(const ExperimentConfig& cfg, std::ostream& log) {
  if (cfg.scheme != Scheme::ZF || cfg.regime != RegimeKind::perfect)
    throw std::invalid_argument("optimize: the alternating algorithm needs ZF with perfect CSI");
  const auto sc = cfg.propagation();
  const AlternatingResult r = alternating_optimize(cfg.profile, sc, cfg.start);
  CsvFile csv(output(cfg, "trajectory.csv"), {"iteration", "M", "K", "rho", "ee_bit_per_j"});
  for (const auto& s : r.trajectory) csv.row(s.iteration, s.M, s.K, s.rho, s.ee);
  log << (r.converged ? "converged" : "not converged") << " after " << r.trajectory.size() - 1
      << " iterations: M = " << r.point.M << ", K = " << r.point.K << ", rho = " << fmt(r.point.rho)
      << ", EE = " << fmt(r.result.ee / 1e6) << " Mbit/J\n";
}

void run_sweep(const ExperimentConfig& cfg, std::ostream& log) {
  require_perfect_for_mc(cfg, "sweep");
  const auto sc = cfg.propagation();
  if (cfg.scheme == Scheme::ZF) {
    const Regime regime = cfg.regime_value();
    const SweepResult r = exhaustive_search(cfg.profile, sc, regime, Scheme::ZF, cfg.m_range, cfg.effective_k_range());
    CsvFile csv(output(cfg, "sweep.csv"),
                {"M", "K", "rho_star", "gross_rate_bit_per_s", "ee_bit_per_j", "p_tx_w", "p_cp_w"});
    for (const auto& c : r.surface) csv.row(c.M, c.K, c.rho, c.gross_rate, c.ee, c.p_tx, c.p_cp);
    log << "argmax M = " << r.best.M << ", K = " << r.best.K << ", rho = " << fmt(r.best.rho)
        << ", SE = " << fmt(r.best_result.gross_rate_per_ue / cfg.profile.B) << " bit/symbol, EE = "
        << fmt(r.best_result.ee / 1e6) << " Mbit/J\n";
    return;
  }
  const McSweepResult r = mc_sweep(cfg, cfg.m_range, cfg.effective_k_range());
  const HardwareProfile& hw = cfg.profile;
  CsvFile csv(output(cfg, "sweep.csv"),
              {"M", "K", "se_bit_per_symbol", "gross_rate_bit_per_s", "ee_bit_per_j", "p_tx_w", "p_cp_w"});
  for (const auto& c : r.surface) csv.row(c.M, c.K, c.se, c.se * hw.B, c.ee, c.pa_power, mc_circuit(hw, cfg.scheme, c));
  log << "argmax M = " << r.best.M << ", K = " << r.best.K << ", SE = " << fmt(r.best.se)
      << " bit/symbol, EE = " << fmt(r.best.ee / 1e6) << " Mbit/J (" << cfg.blocks << " blocks)\n";
}

void run_curves(const ExperimentConfig& cfg, std::ostream& log) {
  require_perfect_for_mc(cfg, "curves");
  const auto sc = cfg.propagation();
  const HardwareProfile hw = regime_profile(cfg);
  struct Best {
    int K;
    double rho_or_se;
    double ee;
    double pa;
    double net;
  };
  std::map<int, Best> per_m;
  auto offer = [&](int M, const Best& b) {
    auto [it, fresh] = per_m.try_emplace(M, b);
    if (!fresh && b.ee > it->second.ee) it->second = b;
  };
  const bool zf = cfg.scheme == Scheme::ZF;
  if (zf) {
    const SweepResult r =
        exhaustive_search(cfg.profile, sc, cfg.regime_value(), Scheme::ZF, cfg.m_range, cfg.effective_k_range());
    for (const auto& c : r.surface) offer(c.M, {c.K, c.rho, c.ee, c.p_tx, overhead(hw, c.K) * c.gross_rate});
  } else {
    const McSweepResult r = mc_sweep(cfg, cfg.m_range, cfg.effective_k_range());
    for (const auto& c : r.surface) offer(c.M, {c.K, c.se, c.ee, c.pa_power, overhead(hw, c.K) * hw.B * c.se});
  }
  CsvFile csv(output(cfg, "curves.csv"),
              {"M", "K_star", zf ? "rho_star" : "se_bit_per_symbol", "ee_bit_per_j", "p_pa_w",
               "p_pa_per_antenna_mw", "p_tx_dl_per_antenna_mw", "area_throughput_gbit_per_s_per_km2"});
  int best_m = 0;
  for (const auto& [M, b] : per_m) {
    csv.row(M, b.K, b.rho_or_se, b.ee, b.pa, 1e3 * b.pa / M, 1e3 * dl_per_antenna(hw, b.pa, M),
            b.net / area_km2(sc) / 1e9);
    if (best_m == 0 || b.ee > per_m.at(best_m).ee) best_m = M;
  }
  if (best_m > 0) {
    const Best& b = per_m.at(best_m);
    log << "optimum M = " << best_m << ", K = " << b.K << ": downlink power "
        << fmt(1e3 * dl_per_antenna(hw, b.pa, best_m)) << " mW/antenna, area throughput "
        << fmt(b.net / area_km2(sc) / 1e9) << " Gbit/s/km^2\n";
  }
}

void run_montecarlo(const ExperimentConfig& cfg, std::ostream& log) {
  if (cfg.regime == RegimeKind::multicell)
    throw std::invalid_argument("montecarlo: the multi-cell regime is analytic only");
  require_perfect_for_mc(cfg, "montecarlo");
  const auto sc = cfg.propagation();
  const HardwareProfile hw = regime_profile(cfg);
  int M = cfg.point_m, K = cfg.point_k;
  McEstimate est;
  double analytic = 0;
  if (cfg.scheme == Scheme::ZF) {
    const Regime regime = cfg.regime_value();
    if (M == 0) {
      const SweepResult r =
          exhaustive_search(cfg.profile, sc, regime, Scheme::ZF, cfg.m_range, cfg.effective_k_range());
      M = r.best.M;
      K = r.best.K;
    }
    if (M < K + 1) throw std::invalid_argument("montecarlo: ZF needs M >= K + 1");
    const double rho = cfg.point_rho > 0 ? cfg.point_rho : best_rho(cfg.profile, sc, M, K, regime);
    const CsiMode mode = cfg.regime == RegimeKind::imperfect ? CsiMode{ImperfectCsiMode{rho, hw.tau_ul}}
                                                             : CsiMode{PerfectCsiMode{}};
    est = estimate_ee(cfg.profile, sc, Scheme::ZF, M, K, RhoTarget{rho}, cfg.trials, cfg.seed, mode);
    analytic = evaluate_ee(cfg.profile, sc, Scheme::ZF, {M, K, rho, regime}).ee;
  } else {
    const McSweepResult r = M == 0 ? mc_sweep(cfg, cfg.m_range, cfg.effective_k_range())
                                   : mc_sweep(cfg, {M, M}, {K, K});
    M = r.best.M;
    K = r.best.K;
    if (!(r.best.ee > 0.0)) throw std::invalid_argument("montecarlo: no supportable rate at this point");
    est = estimate_ee(cfg.profile, sc, cfg.scheme, M, K, SeTarget{r.best.se}, cfg.trials, cfg.seed);
  }
  CsvFile csv(output(cfg, "montecarlo.csv"),
              {"scheme", "regime", "M", "K", "gross_se_bit_per_symbol", "ee_bit_per_j", "half_width_95_bit_per_j",
               "analytic_ee_bit_per_j", "trials", "feasible_fraction", "pa_power_w", "p_tx_dl_per_antenna_mw",
               "net_sum_rate_bit_per_s"});
  csv.row(to_string(cfg.scheme), to_string(cfg.regime), M, K, est.gross_se, est.mean, est.half_width_95,
          cfg.scheme == Scheme::ZF ? fmt(analytic) : std::string(), est.trials, est.feasible_fraction, est.pa_power,
          1e3 * dl_per_antenna(hw, est.pa_power, M), est.net_sum_rate);
  log << to_string(cfg.scheme) << " at M = " << M << ", K = " << K << ": EE = " << fmt(est.mean / 1e6) << " +- "
      << fmt(est.half_width_95 / 1e6) << " Mbit/J over " << est.trials << " blocks";
  if (cfg.scheme == Scheme::ZF) log << " (analytic " << fmt(analytic / 1e6) << ")";
  log << '\n';
  if (est.mostly_infeasible)
    log << "warning: only " << fmt(100.0 * est.feasible_fraction) << "% of the blocks support the rate\n";
}

void run_multicell(const ExperimentConfig& cfg, std::ostream& log) {
  if (cfg.scheme != Scheme::ZF) throw std::invalid_argument("multicell: the multi-cell model is ZF only");
  const auto prop = cfg.scenario.multicell_cell();
  const HardwareProfile& hw = cfg.profile;
  CsvFile csv(output(cfg, "multicell.csv"),
              {"reuse", "i_pc", "i_total", "i_pc2", "M_star", "K_star", "rho_star", "se_bit_per_symbol",
               "ee_bit_per_j", "area_throughput_gbit_per_s_per_km2"});
  for (int reuse : {1, 2, 4}) {
    const MulticellScenario mc(prop, reuse, cfg.scenario.min_distance_rule);
    const Regime regime = SymmetricMulticell{mc};
    HardwareProfile h = profile_for(hw, regime);
    const IntRange k{cfg.k_range.lo, std::min(cfg.k_range.hi, h.max_users() - 1)};
    const SweepResult r = exhaustive_search(hw, prop, regime, Scheme::ZF, cfg.m_range, k);
    const double se = r.best_result.gross_rate_per_ue / hw.B;
    csv.row(reuse, mc.i_pc(), mc.i_total(), mc.i_pc2(), r.best.M, r.best.K, r.best.rho, se, r.best_result.ee,
            r.best_result.net_sum_rate / area_km2(prop) / 1e9);
    if (reuse == cfg.reuse) {
      log << "reuse " << reuse << ": I_PC = " << fmt(mc.i_pc()) << ", I = " << fmt(mc.i_total())
          << ", I_PC2 = " << fmt(mc.i_pc2()) << "; optimum M = " << r.best.M << ", K = " << r.best.K
          << ", SE = " << fmt(se) << " bit/symbol, EE = " << fmt(r.best_result.ee / 1e6) << " Mbit/J\n";
      const double noise_term = hw.noise_power * prop.s_x() / hw.eta();
      log << "B sigma^2 S_x / eta = " << fmt(noise_term) << "; times rho* = " << fmt(noise_term * r.best.rho) << '\n';
    }
  }
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"optimize", "sweep", "curves", "montecarlo", "multicell", "check"};
  return names;
}

int run_subcommand(const std::string& cmd, const ExperimentConfig& cfg, std::ostream& log) {
  if (cmd == "optimize") run_optimize(cfg, log);
  else if (cmd == "sweep") run_sweep(cfg, log);
  else if (cmd == "curves") run_curves(cfg, log);
  else if (cmd == "montecarlo") run_montecarlo(cfg, log);
  else if (cmd == "multicell") run_multicell(cfg, log);
  else if (cmd == "check") {
    bool ok = true;
    for (const auto& c : run_property_checks(cfg)) {
      log << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
      ok = ok && c.passed;
    }
    return ok ? 0 : 1;
  } else {
    throw std::invalid_argument("unknown subcommand '" + cmd + "'");
  }
  return 0;
}

}  // namespace eemimo
