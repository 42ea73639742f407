#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace blendsolve {

class InvalidGrid : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Uniform space/time discretization of [x_lo, x_hi] x [0, final_time].
///
/// Nodes x_i = x_lo + i*dx (i = 0..n_cells-1) are cell centers, so the cells
/// C_i = [x_i - dx/2, x_i + dx/2) overhang the domain by dx/2 on each side.
struct Grid1D {
  double x_lo = 0.0;
  double x_hi = 1.0;
  std::size_t n_cells = 0;
  std::size_t n_steps = 0;
  double final_time = 0.0;
  double dx = 0.0;
  double dt = 0.0;

  double node(std::size_t i) const { return x_lo + static_cast<double>(i) * dx; }
  /// Position of the interface between cells k-1 and k (k = 0..n_cells).
  double face(std::size_t k) const { return x_lo + (static_cast<double>(k) - 0.5) * dx; }
  double time(std::size_t n) const { return static_cast<double>(n) * dt; }
  double left_edge() const { return x_lo - 0.5 * dx; }
  double right_edge() const { return x_hi + 0.5 * dx; }

  /// Index of the half-open cell containing x; may fall outside [0, n_cells).
  std::ptrdiff_t cell_of(double x) const;

  bool operator==(const Grid1D&) const = default;
};

Grid1D build_grid(double x_lo, double x_hi, std::size_t n_cells, double final_time,
                  std::size_t n_steps);

/// Per-cell density values on a grid.
struct CellField {
  Grid1D grid;
  std::vector<double> values;

  static CellField zeros(const Grid1D& grid) { return {grid, std::vector<double>(grid.n_cells, 0.0)}; }

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  bool all_finite() const;
};

enum class GhostRule { zero_value, copy_nearest };

struct BoundaryPolicy {
  GhostRule left = GhostRule::zero_value;
  GhostRule right = GhostRule::copy_nearest;
};

/// Value at index i, which may lie outside the field; ghosts follow the policy.
double ghost_access(std::span<const double> values, std::ptrdiff_t i, const BoundaryPolicy& policy);

/// Copy of values with n_ghost padded cells on each side.
std::vector<double> with_ghosts(std::span<const double> values, std::size_t n_ghost,
                                const BoundaryPolicy& policy);

enum class ProblemKind { linear_advection, conservation_law };

using ScalarMap = std::function<double(double)>;
using SpaceTimeMap = std::function<double(double, double)>;

/// Either u_t + (A(x) u)_x = 0 or u_t + f(u)_x = 0, with its initial datum.
struct Problem {
  ProblemKind kind = ProblemKind::linear_advection;
  ScalarMap velocity;        // A(x), advection only
  std::optional<double> constant_velocity;
  ScalarMap flux;            // f(u), conservation law only
  ScalarMap particle_speed;  // A(u) = f(u)/u; empty selects the guarded quotient
  std::optional<double> flux_critical_point;
  ScalarMap initial_datum;
  SpaceTimeMap exact_solution;  // empty when unknown
  BoundaryPolicy boundary;
  double speed_bound = 1.0;

  static Problem advection(ScalarMap velocity, double speed_bound, ScalarMap initial_datum,
                           SpaceTimeMap exact = {}, BoundaryPolicy boundary = {});
  static Problem constant_advection(double speed, ScalarMap initial_datum, SpaceTimeMap exact = {},
                                    BoundaryPolicy boundary = {});
  static Problem conservation_law(ScalarMap flux, double speed_bound, ScalarMap initial_datum,
                                  ScalarMap particle_speed = {},
                                  std::optional<double> critical_point = std::nullopt,
                                  SpaceTimeMap exact = {}, BoundaryPolicy boundary = {});

  bool has_exact() const { return static_cast<bool>(exact_solution); }

  /// Particle speed A(u) for conservation laws.
  double speed_of_density(double u) const;

  /// Throws std::invalid_argument when required maps are missing or speed_bound <= 0.
  void validate() const;
};

/// How continuous data are turned into cell values.
enum class Sampling { cell_average, pointwise };

/// Composite-Simpson cell averages of g with an even number of subintervals per cell.
CellField project_function(const ScalarMap& g, const Grid1D& grid, std::size_t quadrature_points = 8);

/// Node values g(x_i).
CellField sample_function(const ScalarMap& g, const Grid1D& grid);

CellField discretize(const ScalarMap& g, const Grid1D& grid, Sampling sampling);

/// Discretized exact solution at time t; throws if the problem has none.
CellField exact_field(const Problem& problem, const Grid1D& grid, double t, Sampling sampling);

/// beta = dt * speed_bound / dx
double courant_number(const Grid1D& grid, const Problem& problem);

double total_mass(const CellField& field);

std::string to_string(Sampling sampling);
Sampling parse_sampling(const std::string& name);

}  // namespace blendsolve
