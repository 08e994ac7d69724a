#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <variant>

namespace eemimo {

struct Disc {
  double d_min;  // m
  double d_max;  // m
};

struct Square {
  double side;   // m, BS at the centre
  double d_min;  // m
};

using Geometry = std::variant<Disc, Square>;

struct Position {
  double x;
  double y;
  double norm() const { return std::hypot(x, y); }
};

// Users uniformly distributed around a BS at the origin with path loss
// l(x) = dbar / ||x||^kappa.
class PropagationScenario {
 public:
  static PropagationScenario disc(double d_min, double d_max, double kappa, double dbar);
  static PropagationScenario square(double side, double d_min, double kappa, double dbar);

  const Geometry& geometry() const { return geometry_; }
  double kappa() const { return kappa_; }
  double dbar() const { return dbar_; }
  double d_min() const;
  double area() const;  // m^2, footprint of the cell
  double s_x() const { return s_x_; }

  double attenuation(double distance) const { return dbar_ / std::pow(distance, kappa_); }

  // u() must return independent uniforms on [0, 1).
  template <class Uniform>
  Position sample_user_location(Uniform&& u) const;

 private:
  PropagationScenario(Geometry g, double kappa, double dbar);

  Geometry geometry_;
  double kappa_;
  double dbar_;
  double s_x_;
};

// E{1/l(x)} over the user distribution; closed form for the disc, quadrature for the square.
double average_inverse_attenuation(const PropagationScenario& scenario);

enum class MinDistanceRule {
  serving_cell_only,  // d_min exclusion only in the cell under study
  every_cell,         // each cell excludes d_min around its own BS
};

struct InterferenceAggregates {
  double i_pc;     // pilot-contaminating cells, own cell excluded
  double i_total;  // all cells, own cell included
  double i_pc2;    // sum of squares over pilot-contaminating cells
};

struct CellIndex {
  int row;
  int col;
};

// Symmetric grid of square cells. Each cell sees the cells within two rings
// (a 5x5 neighbourhood). Clusters form a 2x2 checkerboard; reuse 2 groups
// clusters {1, 4} and {2, 3}.
class MulticellScenario {
 public:
  MulticellScenario(const PropagationScenario& prop, int reuse_factor,
                    MinDistanceRule rule = MinDistanceRule::serving_cell_only,
                    CellIndex under_study = {0, 0});
  // Aggregates supplied directly (no geometry behind them).
  static MulticellScenario from_aggregates(int reuse_factor, InterferenceAggregates a,
                                           double cell_side = 500.0);

  int reuse_factor() const { return reuse_; }
  double cell_side() const { return side_; }
  const InterferenceAggregates& aggregates() const { return agg_; }
  double i_pc() const { return agg_.i_pc; }
  double i_total() const { return agg_.i_total; }
  double i_pc2() const { return agg_.i_pc2; }

  static int cluster_of_cell(CellIndex c);  // 1..4
  static bool shares_pilots(CellIndex a, CellIndex b, int reuse_factor);

 private:
  MulticellScenario() = default;
  int reuse_ = 1;
  double side_ = 500.0;
  InterferenceAggregates agg_{};
};

// E{ l_j(x)/l_l(x) } for users x of the cell at `offset` (in cells) from the
// cell under study, whose BS is j.
double relative_leakage(const PropagationScenario& prop, CellIndex offset, MinDistanceRule rule);

InterferenceAggregates multicell_interference(const PropagationScenario& prop, int reuse_factor,
                                              MinDistanceRule rule = MinDistanceRule::serving_cell_only,
                                              CellIndex under_study = {0, 0});

template <class Uniform>
Position PropagationScenario::sample_user_location(Uniform&& u) const {
  if (const auto* d = std::get_if<Disc>(&geometry_)) {
    const double r = std::sqrt(d->d_min * d->d_min + u() * (d->d_max * d->d_max - d->d_min * d->d_min));
    const double phi = 2.0 * std::numbers::pi * u();
    return {r * std::cos(phi), r * std::sin(phi)};
  }
  const auto& s = std::get<Square>(geometry_);
  for (;;) {
    const Position p{(u() - 0.5) * s.side, (u() - 0.5) * s.side};
    if (p.norm() >= s.d_min) return p;
  }
}

}  // namespace eemimo
