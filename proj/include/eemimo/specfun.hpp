#pragma once

#include <cmath>
#include <optional>
#include <vector>

namespace eemimo {

// Principal branch of Lambert W, w·e^w = x for x >= -1/e.
double lambert_w0(double x);

// Bounds on e^{W(x)+1} valid for x >= e:  e·x/ln x <= e^{W(x)+1} <= (1+e)·x/ln x.
struct ExpLambertBounds {
  double lower;
  double upper;
};
ExpLambertBounds exp_lambert_bounds(double x);

struct QuarticCoeffs {
  double a4 = 1, a3 = 0, a2 = 0, a1 = 0, a0 = 0;

  double operator()(double x) const { return (((a4 * x + a3) * x + a2) * x + a1) * x + a0; }
  double derivative(double x) const { return ((4 * a4 * x + 3 * a3) * x + 2 * a2) * x + a1; }
  // Magnitude used to normalise residuals: sum of |a_i| x^i at x.
  double scale(double x) const;
};

// Real positive roots, ascending, multiplicities kept.
std::vector<double> real_positive_roots(const QuarticCoeffs& q,
                                        std::optional<double> tol_imag = std::nullopt);

struct ScalarMax {
  double x;
  double value;
};

// Golden-section maximisation of a unimodal f on [lo, hi]; stops once the
// bracket is narrower than abs_tol.
template <class F>
ScalarMax golden_section_max(F&& f, double lo, double hi, double abs_tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > abs_tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? ScalarMax{c, fc} : ScalarMax{d, fd};
}

// Search on ln x over [lo, hi], lo > 0. A width of rel_tol in ln x is a
// relative tolerance on x.
template <class F>
ScalarMax golden_section_max_log(F&& f, double lo, double hi, double rel_tol) {
  auto g = [&](double t) { return f(std::exp(t)); };
  const ScalarMax m = golden_section_max(g, std::log(lo), std::log(hi), rel_tol);
  return {std::exp(m.x), m.value};
}

}  // namespace eemimo
