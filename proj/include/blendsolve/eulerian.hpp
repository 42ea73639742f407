#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blendsolve/core.hpp"

namespace blendsolve {

enum class EulerianScheme {
  upwind,         // UPW, first order donor cell
  lax_wendroff,   // LW, constant velocity only
  beam_warming,   // BW, constant velocity only
  richtmyer,      // RLW, two-step Lax-Wendroff
  weno2,          // third-order WENO reconstruction + SSP-RK3
  godunov,        // conservation laws only
  exact,          // cell values of the exact solution
};

std::string_view to_string(EulerianScheme scheme);
/// Accepts the acronyms UPW, LW, BW, RLW, WENO2, GODUNOV, EXACT (case-insensitive).
EulerianScheme parse_scheme(std::string_view name);

bool is_compatible(EulerianScheme scheme, const Problem& problem);

/// Largest Courant number for which the scheme is stable.
double stability_limit(EulerianScheme scheme);

/// Godunov flux of a scalar conservation law: min of f over [ul, ur] when
/// ul <= ur, max over [ur, ul] otherwise. Candidates are the endpoints plus
/// the critical point of f, if supplied and inside the interval.
double godunov_flux(double u_left, double u_right, const ScalarMap& f,
                    std::optional<double> critical_point = std::nullopt);

struct StepResult {
  CellField field;
  bool stability_warning = false;
};

/// One explicit conservative update S: CellField -> CellField for a fixed
/// problem and grid. Velocity samples are cached at construction.
class EulerianSolver {
 public:
  EulerianSolver(EulerianScheme scheme, const Problem& problem, const Grid1D& grid,
                 Sampling exact_sampling = Sampling::cell_average);

  /// Advance the field from `time` to `time + dt`.
  StepResult step(const CellField& field, double time) const;

  EulerianScheme scheme() const { return scheme_; }
  const Grid1D& grid() const { return grid_; }
  bool violates_cfl() const { return cfl_violation_; }

 private:
  void fluxes(const std::vector<double>& padded, std::vector<double>& face_flux) const;
  void advance(const std::vector<double>& u, std::vector<double>& out) const;

  EulerianScheme scheme_;
  Problem problem_;
  Grid1D grid_;
  Sampling exact_sampling_;
  bool cfl_violation_ = false;
  std::vector<double> center_speed_;  // A(x_i) for i = -2 .. n_cells+1
  std::vector<double> face_speed_;    // A at faces k = 0 .. n_cells
};

/// Single step on `field.grid` with time step dt, starting at `time`.
StepResult eulerian_step(EulerianScheme scheme, const CellField& field, const Problem& problem,
                         double dt, double time = 0.0,
                         Sampling exact_sampling = Sampling::cell_average);

}  // namespace blendsolve
