#pragma once

#include "eemimo/optimizers.hpp"
#include "eemimo/power_model.hpp"
#include "eemimo/scenario.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace eemimo {

// Counter-based generator: draw i of stream (seed, block, stream) is a pure
// function of its coordinates, so results do not depend on evaluation order
// or thread count.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t block, std::uint64_t stream);

  std::uint64_t bits_at(std::uint64_t i) const;
  double uniform_at(std::uint64_t i) const;  // [0, 1)
  // CN(0, 1) built from uniforms 2i and 2i+1
  std::complex<double> complex_normal_at(std::uint64_t i) const;

  // sequential interface
  double uniform() { return uniform_at(counter_++); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Stream layout inside a block: per user, one stream per purpose.
enum class StreamPurpose : std::uint64_t { location = 0, channel = 1, pilot_noise = 2 };
std::uint64_t stream_id(int user, StreamPurpose purpose);

struct PerfectCsiMode {};
struct ImperfectCsiMode {
  double rho;
  double tau_ul;
};
using CsiMode = std::variant<PerfectCsiMode, ImperfectCsiMode>;

struct ChannelBlock {
  Eigen::MatrixXcd H;                       // M x K, column k ~ CN(0, l_k I)
  Eigen::VectorXd attenuation;              // l_k
  std::optional<Eigen::MatrixXcd> estimate;  // imperfect CSI only
};

// Entry (m, k) depends only on (seed, block, k, m): nested across M and K.
ChannelBlock generate_block(const PropagationScenario& sc, int M, int K, std::uint64_t seed,
                            std::uint64_t block, const CsiMode& mode = PerfectCsiMode{});

// nullopt when ZF meets a rank-deficient or too-small channel matrix.
std::optional<Eigen::MatrixXcd> combiner(const Eigen::MatrixXcd& H, Scheme scheme,
                                         const Eigen::VectorXd& uplink_powers, double sigma2);

enum class LinkDirection { uplink, downlink };

// The (k, l) matrix whose inverse gives the equal-rate powers, p = sigma2·D^-1·1.
Eigen::MatrixXd power_matrix(const Eigen::MatrixXcd& G, const Eigen::MatrixXcd& H, double sinr_target,
                             LinkDirection direction);

// Spectral radius of the interference-to-signal map gamma·diag(D)^-1·offdiag.
double interference_spectral_radius(const Eigen::MatrixXd& D);

// Powers giving every user the gross rate target_rate; nullopt when the
// target is not supportable (a negative power, or a spectral radius bound of
// 1 or more).
std::optional<Eigen::VectorXd> equal_rate_power_allocation(const Eigen::MatrixXcd& G, const Eigen::MatrixXcd& H,
                                                          double target_rate, double B, double sigma2,
                                                          LinkDirection direction);

struct MmseAllocation {
  Eigen::VectorXd powers;  // uplink
  Eigen::MatrixXcd G;      // combiner the powers were computed for
};

// Q rounds of combiner update and equal-rate allocation, started from the ZF
// powers (or the single-user powers when ZF is unavailable).
std::optional<MmseAllocation> mmse_power_allocation(const Eigen::MatrixXcd& H, double target_rate, double B,
                                                    double sigma2, int Q);

// Per-user SINRs, uplink, for combiner G and powers p.
Eigen::VectorXd uplink_sinr(const Eigen::MatrixXcd& G, const Eigen::MatrixXcd& H, const Eigen::VectorXd& p,
                            double sigma2);
Eigen::VectorXd downlink_sinr(const Eigen::MatrixXcd& V, const Eigen::MatrixXcd& H, const Eigen::VectorXd& p,
                              double sigma2);

double pairwise_sum(std::span<const double> v);

struct McEstimate {
  double mean = 0;           // EE, bit/J
  double half_width_95 = 0;  // delta method on the ratio of means
  int trials = 0;            // blocks used (feasible ones)
  double feasible_fraction = 0;
  bool mostly_infeasible = false;  // more than half of the blocks failed
  double pa_power = 0;             // W
  double net_sum_rate = 0;         // bit/s
  double gross_se = 0;             // bit/symbol per UE
};

struct RhoTarget {
  double rho;  // ZF parameterisation, gross SE = log2(1 + rho(M-K))
};
struct SeTarget {
  double bits_per_symbol;
};
using RateTarget = std::variant<RhoTarget, SeTarget>;

// Perfect CSI: every scheme with equal-rate allocation. Imperfect CSI: ZF on
// the estimates with the pilot-matched powers; rates are measured against
// the true channel with the estimation error as interference.
McEstimate estimate_ee(const HardwareProfile& hw, const PropagationScenario& sc, Scheme scheme, int M, int K,
                       const RateTarget& target, int trials, std::uint64_t seed,
                       const CsiMode& mode = PerfectCsiMode{});

struct WishartCheck {
  double empirical;
  double analytic;
};

// E tr((H^H H)^-1) for fixed attenuations vs tr(Lambda^-1)/(M-K).
WishartCheck wishart_inverse_trace_check(const Eigen::VectorXd& attenuation, int M, int trials, std::uint64_t seed);
// Attenuations drawn once from the scenario.
WishartCheck wishart_inverse_trace_check(const PropagationScenario& sc, int M, int K, int trials,
                                         std::uint64_t seed);

struct McSweepOptions {
  int blocks = 100;
  std::uint64_t seed = 1;
  int step = 1;         // coarse grid spacing
  bool refine = false;  // hill-climb with unit steps from the coarse optimum
  double se_tol = 1e-4;
};

struct McSweepCell {
  int M = 0;
  int K = 0;
  double se = 0;      // optimal gross SE, bit/symbol
  double ee = 0;      // bit/J
  double pa_power = 0;
  double se_max = 0;  // largest SE every block supports (inf when unbounded)
};

struct McSweepResult {
  McSweepCell best;
  std::vector<McSweepCell> surface;  // sorted by (M, K)
};

// Joint (M, K, SE) search on one fixed set of channel blocks. A SE value
// counts only when all blocks support it.
McSweepResult montecarlo_sweep(const HardwareProfile& hw, const PropagationScenario& sc, Scheme scheme,
                               IntRange m_range, IntRange k_range, const McSweepOptions& opts);

// Mean over blocks of sum(p)/sigma2 at a given SE; nullopt when some block fails.
// Exposed so the fast paths can be compared with the generic route.
class BlockPowerModel {
 public:
  BlockPowerModel(Scheme scheme, const Eigen::MatrixXcd& H, int Q);
  std::optional<double> normalized_power(double se) const;
  double se_max() const { return se_max_; }

 private:
  Scheme scheme_;
  int Q_;
  Eigen::MatrixXcd gram_;
  Eigen::VectorXd zf_diag_;  // diag((H^H H)^-1)
  bool zf_ok_ = false;
  // MRC: W = Δ^-1 S Δ^-1 = Q Λ Q^T
  Eigen::VectorXd lambda_, u_, v_;
  double se_max_ = 0;
};

}  // namespace eemimo
