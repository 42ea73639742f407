#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "blendsolve/blend.hpp"
#include "blendsolve/core.hpp"

namespace blendsolve {

/// Coarse grid G' with N' = ceil(s N) cells and steps, and its 2x refinement G''.
struct CoarsePair {
  double s = 0.5;
  Grid1D g_prime;
  Grid1D g_second;
  std::size_t n_particles_prime = 0;
  std::size_t n_particles_second = 0;
};

/// ceil(s * n), robust to the rounding of s (s = 1/3, n = 1200 gives 400).
std::size_t scaled_count(double s, std::size_t n);

/// Throws std::invalid_argument unless 0 < s <= 1/2 and the coarse grid has >= 3 cells.
CoarsePair make_coarse_pair(const Grid1D& reference, double s, std::size_t n_particles = 0);

/// Index of the G'' node nearest to node i of G'; ties go to the lower index.
std::size_t node_correspondence(std::size_t i, const CoarsePair& pair);

/// sum_i |u'_i - u''_{h(i)}| dx'
double richardson_indicator(const CellField& sol_prime, const CellField& sol_second, const CoarsePair& pair);

enum class SearchMode { full_2d, partial_1d };

/// Exhaustive lattice with step `coarse_step`, then `rounds` refinements that
/// halve the step around the current argmin. Ties go to the smallest lambda,
/// then the smallest mu.
struct SearchConfig {
  SearchMode mode = SearchMode::full_2d;
  double coarse_step = 0.05;
  std::size_t rounds = 2;
};

struct SurfacePoint {
  double lambda = 1.0;
  double mu = 1.0;
  double delta_W = 0.0;
  double delta_V = 0.0;
};

struct CouplingEstimate {
  double lambda = 1.0;
  double mu = 1.0;
  double delta_W = 0.0;
  CoarsePair pair;
  std::vector<SurfacePoint> surface;  // in evaluation order
};

/// Richardson indicators of the blended run `base` (its lambda/mu are
/// overridden) on the coarse pair of `reference`.
SurfacePoint richardson_point(const Problem& problem, const SimulationConfig& base, const CoarsePair& pair,
                              double lambda, double mu);

/// Argmin of delta_W over (lambda, mu) searched per `search`. Diverged runs
/// score +inf.
CouplingEstimate estimate_coupling(const Problem& problem, const SimulationConfig& base,
                                   const Grid1D& reference, double s, const SearchConfig& search,
                                   std::size_t threads = 1);

/// Coupling weight that cancels the leading dispersive term of the
/// lambda*LW + (1-lambda)*BW blend (with mu = 1 - lambda).
double optimal_lambda_lwbw(double beta);

void write_surface_csv(std::ostream& os, const CouplingEstimate& estimate);

}  // namespace blendsolve
