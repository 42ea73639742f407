#include "blendsolve/core.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace blendsolve {

std::ptrdiff_t Grid1D::cell_of(double x) const {
  return static_cast<std::ptrdiff_t>(std::floor((x - left_edge()) / dx));
}

Grid1D build_grid(double x_lo, double x_hi, std::size_t n_cells, double final_time,
                  std::size_t n_steps) {
  if (!(x_hi > x_lo) || !std::isfinite(x_lo) || !std::isfinite(x_hi)) {
    throw InvalidGrid("grid: need x_hi > x_lo");
  }
  if (n_cells < 3) throw InvalidGrid("grid: need at least 3 cells, got " + std::to_string(n_cells));
  if (n_steps < 1) throw InvalidGrid("grid: need at least 1 time step");
  if (!(final_time > 0.0) || !std::isfinite(final_time)) {
    throw InvalidGrid("grid: final time must be positive");
  }
  Grid1D g;
  g.x_lo = x_lo;
  g.x_hi = x_hi;
  g.n_cells = n_cells;
  g.n_steps = n_steps;
  g.final_time = final_time;
  g.dx = (x_hi - x_lo) / static_cast<double>(n_cells - 1);
  g.dt = final_time / static_cast<double>(n_steps);
  return g;
}

bool CellField::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

double ghost_access(std::span<const double> values, std::ptrdiff_t i, const BoundaryPolicy& policy) {
  const auto n = static_cast<std::ptrdiff_t>(values.size());
  if (i >= 0 && i < n) return values[static_cast<std::size_t>(i)];
  if (n == 0) return 0.0;
  if (i < 0) return policy.left == GhostRule::zero_value ? 0.0 : values.front();
  return policy.right == GhostRule::zero_value ? 0.0 : values.back();
}

std::vector<double> with_ghosts(std::span<const double> values, std::size_t n_ghost,
                                const BoundaryPolicy& policy) {
  std::vector<double> out(values.size() + 2 * n_ghost);
  const auto g = static_cast<std::ptrdiff_t>(n_ghost);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = ghost_access(values, static_cast<std::ptrdiff_t>(k) - g, policy);
  }
  return out;
}

Problem Problem::advection(ScalarMap velocity, double speed_bound, ScalarMap initial_datum,
                           SpaceTimeMap exact, BoundaryPolicy boundary) {
  Problem p;
  p.kind = ProblemKind::linear_advection;
  p.velocity = std::move(velocity);
  p.speed_bound = speed_bound;
  p.initial_datum = std::move(initial_datum);
  p.exact_solution = std::move(exact);
  p.boundary = boundary;
  p.validate();
  return p;
}

Problem Problem::constant_advection(double speed, ScalarMap initial_datum, SpaceTimeMap exact,
                                    BoundaryPolicy boundary) {
  Problem p = advection([speed](double) { return speed; }, std::abs(speed), std::move(initial_datum),
                        std::move(exact), boundary);
  p.constant_velocity = speed;
  return p;
}

Problem Problem::conservation_law(ScalarMap flux, double speed_bound, ScalarMap initial_datum,
                                  ScalarMap particle_speed, std::optional<double> critical_point,
                                  SpaceTimeMap exact, BoundaryPolicy boundary) {
  Problem p;
  p.kind = ProblemKind::conservation_law;
  p.flux = std::move(flux);
  p.speed_bound = speed_bound;
  p.initial_datum = std::move(initial_datum);
  p.particle_speed = std::move(particle_speed);
  p.flux_critical_point = critical_point;
  p.exact_solution = std::move(exact);
  p.boundary = boundary;
  p.validate();
  return p;
}

double Problem::speed_of_density(double u) const {
  if (kind != ProblemKind::conservation_law) {
    throw std::invalid_argument("density-dependent speed needs a conservation-law problem");
  }
  if (particle_speed) return particle_speed(u);
  if (std::abs(u) < 1e-12) {
    constexpr double h = 1e-6;
    return (flux(h) - flux(-h)) / (2.0 * h);
  }
  return flux(u) / u;
}

void Problem::validate() const {
  if (!(speed_bound > 0.0) || !std::isfinite(speed_bound)) {
    throw std::invalid_argument("problem: speed bound must be positive");
  }
  if (!initial_datum) throw std::invalid_argument("problem: missing initial datum");
  if (kind == ProblemKind::linear_advection && !velocity) {
    throw std::invalid_argument("problem: advection needs a velocity field");
  }
  if (kind == ProblemKind::conservation_law && !flux) {
    throw std::invalid_argument("problem: conservation law needs a flux");
  }
}

CellField project_function(const ScalarMap& g, const Grid1D& grid, std::size_t quadrature_points) {
  if (quadrature_points == 0 || quadrature_points % 2 != 0) {
    throw std::invalid_argument("project_function: subinterval count must be even and positive");
  }
  CellField out = CellField::zeros(grid);
  const double h = grid.dx / static_cast<double>(quadrature_points);
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    const double a = grid.node(i) - 0.5 * grid.dx;
    double sum = g(a) + g(a + grid.dx);
    for (std::size_t k = 1; k < quadrature_points; ++k) {
      sum += (k % 2 == 1 ? 4.0 : 2.0) * g(a + static_cast<double>(k) * h);
    }
    out[i] = sum * h / 3.0 / grid.dx;
  }
  return out;
}

CellField sample_function(const ScalarMap& g, const Grid1D& grid) {
  CellField out = CellField::zeros(grid);
  for (std::size_t i = 0; i < grid.n_cells; ++i) out[i] = g(grid.node(i));
  return out;
}

CellField discretize(const ScalarMap& g, const Grid1D& grid, Sampling sampling) {
  return sampling == Sampling::pointwise ? sample_function(g, grid) : project_function(g, grid);
}

CellField exact_field(const Problem& problem, const Grid1D& grid, double t, Sampling sampling) {
  if (!problem.has_exact()) throw std::invalid_argument("problem has no exact solution");
  const auto& u = problem.exact_solution;
  return discretize([&u, t](double x) { return u(x, t); }, grid, sampling);
}

double courant_number(const Grid1D& grid, const Problem& problem) {
  return grid.dt * problem.speed_bound / grid.dx;
}

double total_mass(const CellField& field) {
  double m = 0.0;
  for (double v : field.values) m += v;
  return m * field.grid.dx;
}

std::string to_string(Sampling sampling) {
  return sampling == Sampling::pointwise ? "pointwise" : "cell-average";
}

Sampling parse_sampling(const std::string& name) {
  if (name == "pointwise") return Sampling::pointwise;
  if (name == "cell-average") return Sampling::cell_average;
  throw std::invalid_argument("unknown sampling rule '" + name + "'");
}

}  // namespace blendsolve
