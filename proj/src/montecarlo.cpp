#include "eemimo/montecarlo.hpp"

#include "eemimo/parallel.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace eemimo {

namespace {

constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double sinr_target(double se) { return std::exp2(se) - 1.0; }

bool all_positive(const Eigen::VectorXd& p) {
  return p.allFinite() && (p.array() > 0.0).all();
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t block, std::uint64_t stream)
    : key_(mix64(mix64(mix64(seed + golden_gamma) ^ (block + 0x632be59bd9b4e019ULL)) ^
                 (stream + 0x8cb92ba72f3d8dd7ULL))) {}

std::uint64_t CounterRng::bits_at(std::uint64_t i) const { return mix64(key_ + (i + 1) * golden_gamma); }

double CounterRng::uniform_at(std::uint64_t i) const {
  return static_cast<double>(bits_at(i) >> 11) * 0x1.0p-53;
}

std::complex<double> CounterRng::complex_normal_at(std::uint64_t i) const {
  const double r = std::sqrt(-std::log1p(-uniform_at(2 * i)));
  const double phi = 2.0 * std::numbers::pi * uniform_at(2 * i + 1);
  return {r * std::cos(phi), r * std::sin(phi)};
}

std::uint64_t stream_id(int user, StreamPurpose purpose) {
  return static_cast<std::uint64_t>(user) * 4 + static_cast<std::uint64_t>(purpose);
}

ChannelBlock generate_block(const PropagationScenario& sc, int M, int K, std::uint64_t seed, std::uint64_t block,
                            const CsiMode& mode) {
  if (M < 1 || K < 1) throw std::invalid_argument("generate_block: need M, K >= 1");
  ChannelBlock b;
  b.H.resize(M, K);
  b.attenuation.resize(K);
  for (int k = 0; k < K; ++k) {
    CounterRng loc(seed, block, stream_id(k, StreamPurpose::location));
    const Position x = sc.sample_user_location([&] { return loc.uniform(); });
    b.attenuation[k] = sc.attenuation(x.norm());
    const CounterRng ch(seed, block, stream_id(k, StreamPurpose::channel));
    const double amp = std::sqrt(b.attenuation[k]);
    for (int m = 0; m < M; ++m) b.H(m, k) = amp * ch.complex_normal_at(m);
  }
  if (const auto* imp = std::get_if<ImperfectCsiMode>(&mode)) {
    // MMSE estimate from orthogonal pilots of power rho·sigma^2/l_k
    const double snr = imp->rho * K * imp->tau_ul;
    const double shrink = 1.0 / (1.0 + 1.0 / snr);
    Eigen::MatrixXcd est(M, K);
    for (int k = 0; k < K; ++k) {
      const CounterRng noise(seed, block, stream_id(k, StreamPurpose::pilot_noise));
      const double amp = std::sqrt(b.attenuation[k] / snr);
      for (int m = 0; m < M; ++m) est(m, k) = shrink * (b.H(m, k) + amp * noise.complex_normal_at(m));
    }
    b.estimate = std::move(est);
  }
  return b;
}

std::optional<Eigen::MatrixXcd> combiner(const Eigen::MatrixXcd& H, Scheme scheme,
                                         const Eigen::VectorXd& uplink_powers, double sigma2) {
  const auto M = H.rows(), K = H.cols();
  switch (scheme) {
    case Scheme::MRT_MRC: return H;
    case Scheme::ZF: {
      if (M < K + 1) return std::nullopt;
      const Eigen::MatrixXcd A = H.adjoint() * H;
      Eigen::LLT<Eigen::MatrixXcd> llt(A);
      if (llt.info() != Eigen::Success) return std::nullopt;
      return Eigen::MatrixXcd(H * llt.solve(Eigen::MatrixXcd::Identity(K, K)));
    }
    case Scheme::MMSE: {
      if (uplink_powers.size() != K) throw std::invalid_argument("combiner: MMSE needs K uplink powers");
      Eigen::MatrixXcd R = H * uplink_powers.asDiagonal() * H.adjoint();
      R.diagonal().array() += sigma2;
      return Eigen::MatrixXcd(R.ldlt().solve(H));
    }
  }
  return std::nullopt;
}

Eigen::MatrixXd power_matrix(const Eigen::MatrixXcd& G, const Eigen::MatrixXcd& H, double gamma,
                             LinkDirection direction) {
  const auto K = H.cols();
  const Eigen::MatrixXcd T = G.adjoint() * H;  // T(k, l) = g_k^H h_l
  const Eigen::VectorXd norms = G.colwise().squaredNorm().transpose();
  Eigen::MatrixXd D(K, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    for (Eigen::Index l = 0; l < K; ++l) {
      if (k == l) {
        D(k, k) = std::norm(T(k, k)) / (gamma * norms[k]);
      } else if (direction == LinkDirection::uplink) {
        D(k, l) = -std::norm(T(k, l)) / norms[k];
      } else {
        D(k, l) = -std::norm(T(l, k)) / norms[l];
      }
    }
  }
  return D;
}

double interference_spectral_radius(const Eigen::MatrixXd& D) {
  Eigen::MatrixXd F = -D;
  for (Eigen::Index k = 0; k < D.rows(); ++k) {
    F.row(k) /= D(k, k);
    F(k, k) = 0.0;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(F, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

std::optional<Eigen::VectorXd> equal_rate_power_allocation(const Eigen::MatrixXcd& G, const Eigen::MatrixXcd& H,
                                                          double target_rate, double B, double sigma2,
                                                          LinkDirection direction) {
  if (!(target_rate > 0.0)) throw std::invalid_argument("equal_rate_power_allocation: target must be positive");
  const Eigen::MatrixXd D = power_matrix(G, H, sinr_target(target_rate / B), direction);
  const Eigen::VectorXd x = D.partialPivLu().solve(Eigen::VectorXd::Ones(D.rows()));
  if (!all_positive(x)) return std::nullopt;
  // F·x = x - diag(D)^-1·1, so the Collatz-Wielandt ratio bounds the spectral radius of F
  const double radius_bound = (1.0 - (D.diagonal().array() * x.array()).inverse()).maxCoeff();
  if (!(radius_bound < 1.0)) return std::nullopt;
  return Eigen::VectorXd(sigma2 * x);
}

std::optional<MmseAllocation> mmse_power_allocation(const Eigen::MatrixXcd& H, double target_rate, double B,
                                                    double sigma2, int Q) {
  if (Q < 1) throw std::invalid_argument("mmse_power_allocation: Q must be positive");
  const double gamma = sinr_target(target_rate / B);
  const auto K = H.cols();
  Eigen::VectorXd p(K);
  if (auto zf = combiner(H, Scheme::ZF, {}, sigma2)) {
    p = gamma * sigma2 * zf->colwise().squaredNorm().transpose();
  } else {
    p = gamma * sigma2 * H.colwise().squaredNorm().cwiseInverse().transpose();
  }
  MmseAllocation out;
  for (int q = 0; q < Q; ++q) {
    out.G = *combiner(H, Scheme::MMSE, p, sigma2);
    auto next = equal_rate_power_allocation(out.G, H, target_rate, B, sigma2, LinkDirection::uplink);
    if (!next) return std::nullopt;
    p = *next;
  }
  out.powers = p;
  return out;
}

Eigen::VectorXd uplink_sinr(const Eigen::MatrixXcd& G, const Eigen::MatrixXcd& H, const Eigen::VectorXd& p,
                            double sigma2) {
  const Eigen::MatrixXcd T = G.adjoint() * H;
  const auto K = H.cols();
  Eigen::VectorXd s(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    double interference = sigma2 * G.col(k).squaredNorm();
    for (Eigen::Index l = 0; l < K; ++l)
      if (l != k) interference += p[l] * std::norm(T(k, l));
    s[k] = p[k] * std::norm(T(k, k)) / interference;
  }
  return s;
}

Eigen::VectorXd downlink_sinr(const Eigen::MatrixXcd& V, const Eigen::MatrixXcd& H, const Eigen::VectorXd& p,
                              double sigma2) {
  const Eigen::MatrixXcd T = H.adjoint() * V;  // T(k, l) = h_k^H v_l
  const Eigen::VectorXd norms = V.colwise().squaredNorm().transpose();
  const auto K = H.cols();
  Eigen::VectorXd s(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    double interference = sigma2;
    for (Eigen::Index l = 0; l < K; ++l)
      if (l != k) interference += p[l] * std::norm(T(k, l)) / norms[l];
    s[k] = p[k] * std::norm(T(k, k)) / norms[k] / interference;
  }
  return s;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const auto half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

namespace {

double mean_of(const std::vector<double>& v) { return pairwise_sum(v) / static_cast<double>(v.size()); }

struct BlockOutcome {
  bool feasible = false;
  double pa_power = 0;   // W
  double gross_se = 0;   // bit/symbol, user average
};

}  // namespace

McEstimate estimate_ee(const HardwareProfile& hw_in, const PropagationScenario& sc, Scheme scheme, int M, int K,
                       const RateTarget& target, int trials, std::uint64_t seed, const CsiMode& mode) {
  if (trials < 1 || M < 1 || K < 1) throw std::invalid_argument("estimate_ee: need trials, M, K >= 1");
  const auto* imperfect = std::get_if<ImperfectCsiMode>(&mode);
  if (imperfect && scheme != Scheme::ZF) throw std::invalid_argument("estimate_ee: imperfect CSI is ZF only");

  HardwareProfile hw = hw_in;
  if (imperfect) hw.tau_ul = imperfect->tau_ul;
  const double sigma2 = hw.noise_power / hw.B;
  const double ul_weight = hw.B * hw.zeta_ul / hw.eta_ul;
  const double dl_weight = hw.B * hw.zeta_dl / hw.eta_dl;

  const double se_target = std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, RhoTarget>) return std::log2(1.0 + t.rho * (M - K));
        else return t.bits_per_symbol;
      },
      target);
  if (!imperfect && !(se_target > 0.0)) throw std::invalid_argument("estimate_ee: rate target must be positive");
  const double rate = hw.B * se_target;

  std::vector<BlockOutcome> outcomes(trials);
  parallel_for(trials, [&](std::size_t b) {
    const ChannelBlock blk = generate_block(sc, M, K, seed, b, mode);
    BlockOutcome& out = outcomes[b];
    if (imperfect) {
      auto G = combiner(*blk.estimate, Scheme::ZF, {}, sigma2);
      if (!G) return;
      const double snr = imperfect->rho * K * imperfect->tau_ul;
      const double shrink = 1.0 / (1.0 + 1.0 / snr);
      const Eigen::VectorXd g2 = G->colwise().squaredNorm().transpose();
      const Eigen::VectorXd p = imperfect->rho * sigma2 * (M - K) * shrink * g2;
      // estimation error enters as noise with its channel-averaged variance
      const double error_power = (1.0 - shrink) * p.dot(blk.attenuation);
      double se_sum = 0.0;
      for (int k = 0; k < K; ++k) se_sum += std::log2(1.0 + p[k] / (g2[k] * (sigma2 + error_power)));
      out.gross_se = se_sum / K;
      out.pa_power = (ul_weight + dl_weight) * p.sum();
      out.feasible = true;
      return;
    }
    std::optional<Eigen::MatrixXcd> G;
    std::optional<Eigen::VectorXd> p_ul;
    if (scheme == Scheme::MMSE) {
      auto alloc = mmse_power_allocation(blk.H, rate, hw.B, sigma2, hw.Q);
      if (!alloc) return;
      G = alloc->G;
      p_ul = alloc->powers;
    } else {
      G = combiner(blk.H, scheme, {}, sigma2);
      if (!G) return;
      p_ul = equal_rate_power_allocation(*G, blk.H, rate, hw.B, sigma2, LinkDirection::uplink);
      if (!p_ul) return;
    }
    const auto p_dl = equal_rate_power_allocation(*G, blk.H, rate, hw.B, sigma2, LinkDirection::downlink);
    if (!p_dl) return;
    out.pa_power = ul_weight * p_ul->sum() + dl_weight * p_dl->sum();
    out.gross_se = se_target;
    out.feasible = true;
  });

  std::vector<double> net, pa;
  for (const auto& o : outcomes) {
    if (!o.feasible) continue;
    net.push_back(K * (1.0 - hw.tau_sum() * K / hw.U) * hw.B * o.gross_se);
    pa.push_back(o.pa_power);
  }
  McEstimate est;
  est.trials = static_cast<int>(net.size());
  est.feasible_fraction = static_cast<double>(net.size()) / trials;
  est.mostly_infeasible = est.feasible_fraction < 0.5;
  if (net.empty()) return est;

  const double r = mean_of(net), x = mean_of(pa);
  const PowerBreakdown circuit = circuit_power(hw, scheme, M, K, r);
  const double a = hw.P_COD + hw.P_DEC + hw.P_BT;
  const double fixed = circuit.circuit() - a * r;
  const double den = x + circuit.circuit();
  est.net_sum_rate = r;
  est.pa_power = x;
  est.gross_se = r / (K * (1.0 - hw.tau_sum() * K / hw.U) * hw.B);
  est.mean = r / den;
  if (net.size() >= 2) {
    // linearised influence of each block on the ratio of means
    const double d_rate = (x + fixed) / (den * den);
    const double d_power = -r / (den * den);
    std::vector<double> sq(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) {
      const double psi = d_rate * (net[i] - r) + d_power * (pa[i] - x);
      sq[i] = psi * psi;
    }
    const double var = pairwise_sum(sq) / static_cast<double>(net.size() - 1);
    est.half_width_95 = 1.96 * std::sqrt(var / static_cast<double>(net.size()));
  }
  return est;
}

WishartCheck wishart_inverse_trace_check(const Eigen::VectorXd& attenuation, int M, int trials,
                                         std::uint64_t seed) {
  const auto K = attenuation.size();
  if (M < K + 1 || trials < 1) throw std::invalid_argument("wishart check: need M >= K+1, trials >= 1");
  std::vector<double> traces(trials);
  parallel_for(trials, [&](std::size_t t) {
    Eigen::MatrixXcd H(M, K);
    for (Eigen::Index k = 0; k < K; ++k) {
      const CounterRng ch(seed, t, stream_id(static_cast<int>(k), StreamPurpose::channel));
      const double amp = std::sqrt(attenuation[k]);
      for (int m = 0; m < M; ++m) H(m, k) = amp * ch.complex_normal_at(m);
    }
    const Eigen::MatrixXcd A = H.adjoint() * H;
    traces[t] = A.llt().solve(Eigen::MatrixXcd::Identity(K, K)).trace().real();
  });
  return {mean_of(traces), attenuation.cwiseInverse().sum() / static_cast<double>(M - K)};
}

WishartCheck wishart_inverse_trace_check(const PropagationScenario& sc, int M, int K, int trials,
                                         std::uint64_t seed) {
  // user drop taken from a block index no trial uses
  const ChannelBlock drop = generate_block(sc, 1, K, seed, std::numeric_limits<std::uint64_t>::max());
  return wishart_inverse_trace_check(drop.attenuation, M, trials, seed);
}

BlockPowerModel::BlockPowerModel(Scheme scheme, const Eigen::MatrixXcd& H, int Q)
    : scheme_(scheme), Q_(Q), gram_(H.adjoint() * H) {
  const auto K = gram_.rows();
  if (H.rows() >= K + 1) {
    Eigen::LLT<Eigen::MatrixXcd> llt(gram_);
    if (llt.info() == Eigen::Success) {
      zf_diag_ = llt.solve(Eigen::MatrixXcd::Identity(K, K)).diagonal().real();
      zf_ok_ = (zf_diag_.array() > 0.0).all();
    }
  }
  se_max_ = std::numeric_limits<double>::infinity();
  if (scheme == Scheme::ZF && !zf_ok_) se_max_ = 0.0;
  if (scheme == Scheme::MRT_MRC && K >= 2) {
    const Eigen::VectorXd a = gram_.diagonal().real();
    Eigen::MatrixXd W = gram_.cwiseAbs2();
    W.diagonal().setZero();
    W = a.cwiseInverse().asDiagonal() * W * a.cwiseInverse().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W);
    lambda_ = es.eigenvalues();
    u_ = es.eigenvectors().transpose() * a.cwiseInverse();
    v_ = es.eigenvectors().transpose() * Eigen::VectorXd::Ones(K);
    const double top = lambda_.maxCoeff();
    if (top > 0.0) se_max_ = std::log2(1.0 + 1.0 / top);
  } else if (scheme == Scheme::MRT_MRC) {
    lambda_ = Eigen::VectorXd::Zero(1);
    u_ = gram_.diagonal().real().cwiseInverse();
    v_ = Eigen::VectorXd::Ones(1);
  }
}

std::optional<double> BlockPowerModel::normalized_power(double se) const {
  const double gamma = sinr_target(se);
  const auto K = gram_.rows();
  switch (scheme_) {
    case Scheme::ZF:
      if (!zf_ok_) return std::nullopt;
      return gamma * zf_diag_.sum();
    case Scheme::MRT_MRC: {
      if (!(gamma * lambda_.maxCoeff() < 1.0)) return std::nullopt;
      return (u_.array() * v_.array() / (1.0 / gamma - lambda_.array())).sum();
    }
    case Scheme::MMSE: {
      // sigma2 = 1; with X = (P^1/2 A P^1/2 + I)^-1 the MMSE combiner gives
      // G^H H = P^-1/2 (I - X) P^-1/2 and G^H G = P^-1/2 (X - X^2) P^-1/2
      Eigen::VectorXd p = zf_ok_ ? Eigen::VectorXd(gamma * zf_diag_)
                                 : Eigen::VectorXd(gamma * gram_.diagonal().real().cwiseInverse());
      Eigen::MatrixXcd At(K, K);
      Eigen::MatrixXd D(K, K);
      for (int q = 0; q < Q_; ++q) {
        const Eigen::VectorXd sq = p.cwiseSqrt();
        At = sq.asDiagonal() * gram_ * sq.asDiagonal();
        At.diagonal().array() += 1.0;
        Eigen::LLT<Eigen::MatrixXcd> llt(At);
        if (llt.info() != Eigen::Success) return std::nullopt;
        const Eigen::MatrixXcd X = llt.solve(Eigen::MatrixXcd::Identity(K, K));
        const Eigen::VectorXd x_diag = X.diagonal().real();
        const Eigen::VectorXd g_norm = x_diag - X.cwiseAbs2().rowwise().sum();
        for (Eigen::Index k = 0; k < K; ++k) {
          for (Eigen::Index l = 0; l < K; ++l) {
            D(k, l) = k == l ? std::norm(1.0 - X(k, k)) / (gamma * p[k] * g_norm[k])
                             : -std::norm(X(k, l)) / (p[l] * g_norm[k]);
          }
        }
        // for a Z-matrix, D^-1·1 > 0 holds exactly when the spectral radius test passes
        p = D.partialPivLu().solve(Eigen::VectorXd::Ones(K));
        if (!all_positive(p)) return std::nullopt;
      }
      return p.sum();
    }
  }
  return std::nullopt;
}

namespace {

struct CellKey {
  int M, K;
  auto operator<=>(const CellKey&) const = default;
};

bool cell_allowed(Scheme scheme, const HardwareProfile& hw, int M, int K) {
  if (M < 1 || K < 1 || K * hw.tau_sum() >= hw.U) return false;
  return scheme != Scheme::ZF || M >= K + 1;
}

}  // namespace

McSweepResult montecarlo_sweep(const HardwareProfile& hw, const PropagationScenario& sc, Scheme scheme,
                               IntRange m_range, IntRange k_range, const McSweepOptions& opts) {
  if (opts.blocks < 1 || opts.step < 1) throw std::invalid_argument("montecarlo_sweep: bad options");
  if (m_range.lo < 1 || k_range.lo < 1 || m_range.lo > m_range.hi || k_range.lo > k_range.hi)
    throw std::invalid_argument("montecarlo_sweep: empty range");

  std::vector<Eigen::MatrixXcd> channels(opts.blocks);
  parallel_for(channels.size(), [&](std::size_t b) {
    channels[b] = generate_block(sc, m_range.hi, k_range.hi, opts.seed, b).H;
  });

  const double scale = hw.noise_power / hw.eta();
  auto evaluate = [&](int M, int K) {
    std::vector<BlockPowerModel> models;
    models.reserve(channels.size());
    double se_cap = std::numeric_limits<double>::infinity();
    for (const auto& H : channels) {
      models.emplace_back(scheme, H.topLeftCorner(M, K), hw.Q);
      se_cap = std::min(se_cap, models.back().se_max());
    }
    const double overhead = K * (1.0 - hw.tau_sum() * K / hw.U) * hw.B;
    std::vector<double> powers(models.size());
    auto ee_at = [&](double se) {
      if (!(se < se_cap)) return 0.0;
      for (std::size_t b = 0; b < models.size(); ++b) {
        const auto p = models[b].normalized_power(se);
        if (!p) return 0.0;
        powers[b] = *p;
      }
      const double net = overhead * se;
      const double pa = scale * mean_of(powers);
      return net / (pa + circuit_power(hw, scheme, M, K, net).circuit());
    };
    McSweepCell cell{M, K, 0.0, 0.0, 0.0, se_cap};
    const double hi = std::isfinite(se_cap) ? se_cap * (1.0 - 1e-9) : 20.0;
    if (hi <= 1e-3) return cell;
    // Brent's tolerance is relative to the abscissa; hi bounds it
    const int bits = std::clamp(static_cast<int>(std::ceil(1.0 - std::log2(opts.se_tol / hi))), 4, 26);
    const auto [se, neg_ee] =
        boost::math::tools::brent_find_minima([&](double s) { return -ee_at(s); }, 1e-3, hi, bits);
    cell.se = se;
    cell.ee = -neg_ee;
    if (cell.ee > 0.0) {
      for (std::size_t b = 0; b < models.size(); ++b) powers[b] = *models[b].normalized_power(se);
      cell.pa_power = scale * mean_of(powers);
    }
    return cell;
  };

  std::map<CellKey, McSweepCell> done;
  auto run = [&](const std::vector<CellKey>& keys) {
    std::vector<McSweepCell> cells(keys.size());
    parallel_for(keys.size(), [&](std::size_t i) { cells[i] = evaluate(keys[i].M, keys[i].K); });
    for (std::size_t i = 0; i < keys.size(); ++i) done[keys[i]] = cells[i];
  };

  std::vector<CellKey> grid;
  for (int M = m_range.lo; M <= m_range.hi; M += opts.step)
    for (int K = k_range.lo; K <= k_range.hi; K += opts.step)
      if (cell_allowed(scheme, hw, M, K)) grid.push_back({M, K});
  if (grid.empty()) throw std::invalid_argument("montecarlo_sweep: no admissible cell");
  run(grid);

  auto best_key = [&] {
    auto it = std::max_element(done.begin(), done.end(),
                               [](const auto& a, const auto& b) { return a.second.ee < b.second.ee; });
    return it->first;
  };

  if (opts.refine) {
    for (;;) {
      const CellKey c = best_key();
      std::vector<CellKey> fresh;
      for (int dm = -1; dm <= 1; ++dm)
        for (int dk = -1; dk <= 1; ++dk) {
          const CellKey n{c.M + dm, c.K + dk};
          if (n.M < m_range.lo || n.M > m_range.hi || n.K < k_range.lo || n.K > k_range.hi) continue;
          if (cell_allowed(scheme, hw, n.M, n.K) && !done.contains(n)) fresh.push_back(n);
        }
      if (fresh.empty()) break;
      run(fresh);
      if (best_key() == c) break;
    }
  }

  McSweepResult out;
  for (const auto& [key, cell] : done) out.surface.push_back(cell);
  out.best = done.at(best_key());
  return out;
}

}  // namespace eemimo
