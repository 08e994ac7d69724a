#include "eemimo/scenario.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <stdexcept>

namespace eemimo {

namespace {

using Rule = boost::math::quadrature::gauss<double, 30>;

constexpr double quarter_pi = std::numbers::pi / 4.0;

// Integral of f(x, y) r dr dθ over the square [-s/2, s/2]^2 minus the disc
// of radius r0, by polar coordinates around the centre, one side at a time.
template <class F>
double integrate_square(double side, double r0, F&& f) {
  const double half = side / 2.0;
  double total = 0.0;
  for (int q = 0; q < 4; ++q) {
    const double rot = q * std::numbers::pi / 2.0;
    auto over_theta = [&](double theta) {
      const double r_edge = half / std::cos(theta);
      const double c = std::cos(theta + rot), s = std::sin(theta + rot);
      auto over_r = [&](double r) { return f(r * c, r * s) * r; };
      return Rule::integrate(over_r, r0, r_edge);
    };
    total += Rule::integrate(over_theta, -quarter_pi, quarter_pi);
  }
  return total;
}

int positive_mod(int a, int m) { return ((a % m) + m) % m; }

}  // namespace

PropagationScenario::PropagationScenario(Geometry g, double kappa, double dbar)
    : geometry_(g), kappa_(kappa), dbar_(dbar), s_x_(0.0) {
  if (!(kappa >= 2.0)) throw std::invalid_argument("scenario: kappa must be >= 2");
  if (!(dbar > 0.0)) throw std::invalid_argument("scenario: dbar must be positive");
  if (const auto* d = std::get_if<Disc>(&geometry_)) {
    if (!(d->d_min >= 0.0 && d->d_min < d->d_max))
      throw std::invalid_argument("scenario: need 0 <= d_min < d_max");
  } else {
    const auto& s = std::get<Square>(geometry_);
    if (!(s.d_min >= 0.0 && s.d_min < s.side / 2.0))
      throw std::invalid_argument("scenario: need 0 <= d_min < side/2");
  }
  s_x_ = average_inverse_attenuation(*this);
}

PropagationScenario PropagationScenario::disc(double d_min, double d_max, double kappa, double dbar) {
  return PropagationScenario(Disc{d_min, d_max}, kappa, dbar);
}

PropagationScenario PropagationScenario::square(double side, double d_min, double kappa, double dbar) {
  return PropagationScenario(Square{side, d_min}, kappa, dbar);
}

double PropagationScenario::d_min() const {
  return std::visit([](const auto& g) { return g.d_min; }, geometry_);
}

double PropagationScenario::area() const {
  if (const auto* d = std::get_if<Disc>(&geometry_)) return std::numbers::pi * d->d_max * d->d_max;
  const auto& s = std::get<Square>(geometry_);
  return s.side * s.side;
}

double average_inverse_attenuation(const PropagationScenario& sc) {
  const double k = sc.kappa();
  if (const auto* d = std::get_if<Disc>(&sc.geometry())) {
    return (std::pow(d->d_max, k + 2) - std::pow(d->d_min, k + 2)) /
           (sc.dbar() * (1.0 + k / 2.0) * (d->d_max * d->d_max - d->d_min * d->d_min));
  }
  const auto& s = std::get<Square>(sc.geometry());
  // the radial integral of r^(kappa+1) is done exactly, only θ is numeric
  const double half = s.side / 2.0;
  auto over_theta = [&](double theta) {
    const double r_edge = half / std::cos(theta);
    return (std::pow(r_edge, k + 2) - std::pow(s.d_min, k + 2)) / (k + 2);
  };
  const double integral = 4.0 * Rule::integrate(over_theta, -quarter_pi, quarter_pi);
  const double area = s.side * s.side - std::numbers::pi * s.d_min * s.d_min;
  return integral / (sc.dbar() * area);
}

double relative_leakage(const PropagationScenario& prop, CellIndex offset, MinDistanceRule rule) {
  const auto* sq = std::get_if<Square>(&prop.geometry());
  if (!sq) throw std::invalid_argument("relative_leakage: square geometry required");
  if (offset.row == 0 && offset.col == 0) return 1.0;

  const double r0 = rule == MinDistanceRule::every_cell ? sq->d_min : 0.0;
  // BS of the cell under study, seen from the interfering cell's BS
  const double bx = -offset.col * sq->side;
  const double by = -offset.row * sq->side;
  const double kappa = prop.kappa();
  auto ratio = [&](double x, double y) {
    const double own2 = x * x + y * y;
    const double other2 = (x - bx) * (x - bx) + (y - by) * (y - by);
    return std::pow(own2 / other2, kappa / 2.0);
  };
  const double area = sq->side * sq->side - std::numbers::pi * r0 * r0;
  return integrate_square(sq->side, r0, ratio) / area;
}

InterferenceAggregates multicell_interference(const PropagationScenario& prop, int reuse_factor,
                                              MinDistanceRule rule, CellIndex under_study) {
  if (reuse_factor != 1 && reuse_factor != 2 && reuse_factor != 4)
    throw std::invalid_argument("multicell: reuse factor must be 1, 2 or 4");
  InterferenceAggregates a{0.0, 0.0, 0.0};
  for (int dr = -2; dr <= 2; ++dr) {
    for (int dc = -2; dc <= 2; ++dc) {
      const double leak = relative_leakage(prop, {dr, dc}, rule);
      a.i_total += leak;
      if (dr == 0 && dc == 0) continue;
      const CellIndex other{under_study.row + dr, under_study.col + dc};
      if (MulticellScenario::shares_pilots(under_study, other, reuse_factor)) {
        a.i_pc += leak;
        a.i_pc2 += leak * leak;
      }
    }
  }
  return a;
}

MulticellScenario::MulticellScenario(const PropagationScenario& prop, int reuse_factor,
                                     MinDistanceRule rule, CellIndex under_study)
    : reuse_(reuse_factor),
      side_(std::get_if<Square>(&prop.geometry()) ? std::get<Square>(prop.geometry()).side : 0.0),
      agg_(multicell_interference(prop, reuse_factor, rule, under_study)) {}

MulticellScenario MulticellScenario::from_aggregates(int reuse_factor, InterferenceAggregates a,
                                                     double cell_side) {
  if (reuse_factor < 1) throw std::invalid_argument("multicell: reuse factor must be positive");
  if (!(a.i_pc >= 0.0 && a.i_pc2 >= 0.0 && a.i_total >= 1.0))
    throw std::invalid_argument("multicell: aggregates out of range");
  MulticellScenario m;
  m.reuse_ = reuse_factor;
  m.side_ = cell_side;
  m.agg_ = a;
  return m;
}

int MulticellScenario::cluster_of_cell(CellIndex c) {
  return 1 + positive_mod(c.col, 2) + 2 * positive_mod(c.row, 2);
}

bool MulticellScenario::shares_pilots(CellIndex a, CellIndex b, int reuse_factor) {
  const int ca = cluster_of_cell(a), cb = cluster_of_cell(b);
  switch (reuse_factor) {
    case 1: return true;
    case 2: return (ca == 1 || ca == 4) == (cb == 1 || cb == 4);
    case 4: return ca == cb;
    default: throw std::invalid_argument("multicell: reuse factor must be 1, 2 or 4");
  }
}

}  // namespace eemimo
