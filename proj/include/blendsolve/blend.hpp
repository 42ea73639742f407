#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "blendsolve/core.hpp"
#include "blendsolve/eulerian.hpp"
#include "blendsolve/lagrangian.hpp"

namespace blendsolve {

/// lambda applies everywhere.
struct ConstantPolicy {};

/// lambda(L) = hi - (hi - lo) * min(L / ref, 1), L = particles in the cell.
struct OccupancyRamp {
  double lambda_hi = 1.0;
  double lambda_lo = 0.0;
  double occupancy_ref = 1.0;
  double operator()(std::size_t occupancy) const;
};

/// lambda(L) = table[min(L, size-1)].
struct OccupancyTable {
  std::vector<double> table;
  double operator()(std::size_t occupancy) const;
};

/// lambda_in on the particle support, lambda_out elsewhere.
struct MaskedPolicy {
  double lambda_in = 0.0;
  double lambda_out = 1.0;
};

/// Space-dependent lambda(x) evaluated at cell centers.
struct ProfilePolicy {
  ScalarMap lambda_of_x;
};

using LambdaPolicy = std::variant<ConstantPolicy, OccupancyRamp, OccupancyTable, MaskedPolicy, ProfilePolicy>;

struct BlendParams {
  double lambda = 1.0;
  double mu = 1.0;
  LambdaPolicy policy = ConstantPolicy{};

  /// Throws std::invalid_argument for weights outside [0, 1].
  void validate() const;
  bool needs_particles() const;
};

/// Per-cell lambda; `particles` is required by occupancy and masked policies.
std::vector<double> cell_lambdas(const BlendParams& params, const Grid1D& grid,
                                 const ParticleSet* particles);

struct BlendState {
  CellField W;
  CellField V;
  std::optional<ParticleSet> particles;
  std::size_t step = 0;

  /// W = V = u0.
  static BlendState initial(const CellField& u0, std::optional<ParticleSet> particles = std::nullopt);
};

/// Row-stochastic L x L coupling matrix.
class MultiBlendMatrix {
 public:
  explicit MultiBlendMatrix(std::vector<std::vector<double>> rows);

  std::size_t size() const { return rows_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return rows_[i][j]; }

 private:
  std::vector<std::vector<double>> rows_;
};

enum class SpeedSource { W, V };

BlendState blended_step_ee(const BlendState& state, EulerianScheme s1, EulerianScheme s2,
                           const BlendParams& params, const Problem& problem,
                           Sampling exact_sampling = Sampling::cell_average);

BlendState blended_step_ee(const BlendState& state, const EulerianSolver& s1, const EulerianSolver& s2,
                           const BlendParams& params);

BlendState blended_step_multiscale(const BlendState& state, EulerianScheme s1, const BlendParams& params,
                                   const Problem& problem, OdeSolver ode,
                                   SpeedSource speed_source = SpeedSource::W);

BlendState blended_step_multiscale(const BlendState& state, const EulerianSolver& s1,
                                   const BlendParams& params, const Problem& problem, OdeSolver ode,
                                   SpeedSource speed_source);

/// out[i] = sum_j matrix(i, j) * S_j[states[j]].
std::vector<CellField> multi_blend_step(std::span<const CellField> states,
                                        std::span<const EulerianScheme> schemes,
                                        const MultiBlendMatrix& matrix, const Problem& problem,
                                        double time = 0.0);

enum class CouplingMode { eulerian_pair, multiscale };
enum class RecordMode { final_only, trajectory };

struct SimulationConfig {
  CouplingMode mode = CouplingMode::eulerian_pair;
  EulerianScheme s1 = EulerianScheme::upwind;
  EulerianScheme s2 = EulerianScheme::upwind;  // ignored in multiscale mode
  BlendParams params;
  std::size_t n_particles = 0;
  OdeSolver ode = OdeSolver::explicit_euler;
  SpeedSource speed_source = SpeedSource::W;
  RecordMode record = RecordMode::final_only;
  Sampling sampling = Sampling::cell_average;
  bool track_error = false;
  std::optional<std::pair<double, double>> particle_window;

  void validate() const;
};

class DivergedError : public std::runtime_error {
 public:
  DivergedError(std::size_t step, const std::string& what) : std::runtime_error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

struct Snapshot {
  std::size_t step = 0;
  double time = 0.0;
  CellField W;
  CellField V;
};

struct RunReport {
  CellField W;
  CellField V;
  std::optional<CellField> exact;  // at final time, same sampling as the data
  std::optional<ParticleSet> particles;
  std::vector<double> mass_W;      // index n = step n, n = 0..N_T
  std::vector<double> mass_V;
  std::vector<double> max_W;
  std::vector<double> error_W;     // L1 error of W per step when tracked
  std::vector<Snapshot> trajectory;
  bool stability_warning = false;
};

inline constexpr std::size_t kMaxSnapshots = 512;

RunReport run_simulation(const Problem& problem, const Grid1D& grid, const SimulationConfig& config);

void write_series_csv(std::ostream& os, const RunReport& report, const Grid1D& grid);
void write_final_field_csv(std::ostream& os, const RunReport& report);

}  // namespace blendsolve
