#include "eemimo/specfun.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace eemimo {

double lambert_w0(double x) {
  constexpr double e = std::numbers::e;
  const double branch = -1.0 / e;
  if (std::isnan(x) || x < branch)
    throw std::domain_error("lambert_w0: argument below -1/e");
  if (x == 0.0) return 0.0;
  if (x == branch) return -1.0;
  if (std::isinf(x)) return x;

  double w;
  if (x < -0.3) {
    // series around the branch point
    const double p = std::sqrt(2.0 * (e * x + 1.0));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else {
    w = std::log1p(x);
  }

  for (int it = 0; it < 64; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    const double next = w - step;
    if (!std::isfinite(next)) break;
    const bool done = std::abs(step) <= 1e-15 * (1.0 + std::abs(next));
    w = std::max(next, -1.0);
    if (done) break;
  }
  return w;
}

ExpLambertBounds exp_lambert_bounds(double x) {
  if (!(x >= std::numbers::e)) throw std::domain_error("exp_lambert_bounds: x < e");
  const double r = x / std::log(x);
  return {std::numbers::e * r, (1.0 + std::numbers::e) * r};
}

double QuarticCoeffs::scale(double x) const {
  const double ax = std::abs(x);
  return (((std::abs(a4) * ax + std::abs(a3)) * ax + std::abs(a2)) * ax + std::abs(a1)) * ax +
         std::abs(a0);
}

std::vector<double> real_positive_roots(const QuarticCoeffs& q, std::optional<double> tol_imag) {
  if (q.a4 == 0.0 || !std::isfinite(q.a4)) throw std::invalid_argument("quartic: a4 must be nonzero");

  Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();
  const double c[4] = {q.a0 / q.a4, q.a1 / q.a4, q.a2 / q.a4, q.a3 / q.a4};
  for (int i = 1; i < 4; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < 4; ++i) companion(i, 3) = -c[i];

  Eigen::EigenSolver<Eigen::Matrix4d> solver(companion, false);
  const Eigen::Vector4cd ev = solver.eigenvalues();

  double max_abs = 0.0;
  for (int i = 0; i < 4; ++i) max_abs = std::max(max_abs, std::abs(ev[i]));
  const double tol = tol_imag.value_or(1e-8 * (1.0 + max_abs));

  std::vector<double> roots;
  for (int i = 0; i < 4; ++i) {
    if (std::abs(ev[i].imag()) > tol || ev[i].real() <= 0.0) continue;
    double r = ev[i].real();
    // Newton polish; keep the step only if it lowers the residual
    for (int it = 0; it < 8; ++it) {
      const double d = q.derivative(r);
      if (d == 0.0) break;
      const double next = r - q(r) / d;
      if (!(next > 0.0) || std::abs(q(next)) >= std::abs(q(r))) break;
      r = next;
    }
    roots.push_back(r);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace eemimo
