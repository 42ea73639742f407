#include "blendsolve/blend.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "blendsolve/csv.hpp"

namespace blendsolve {

namespace {

void check_weight(double w, const char* name) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " + csv_number(w));
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// W' = lambda*Wh + (1-lambda)*Vh, V' = (1-mu)*Wh + mu*Vh, cellwise.
void combine(const CellField& w_hat, const CellField& v_hat, const std::vector<double>& lambda, double mu,
             CellField& w_out, CellField& v_out) {
  const std::size_t n = w_hat.size();
  w_out = CellField{w_hat.grid, std::vector<double>(n)};
  v_out = CellField{w_hat.grid, std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    w_out[i] = lambda[i] * w_hat[i] + (1.0 - lambda[i]) * v_hat[i];
    v_out[i] = (1.0 - mu) * w_hat[i] + mu * v_hat[i];
  }
}

}  // namespace

double OccupancyRamp::operator()(std::size_t occupancy) const {
  const double frac = std::min(static_cast<double>(occupancy) / occupancy_ref, 1.0);
  return lambda_hi - (lambda_hi - lambda_lo) * frac;
}

double OccupancyTable::operator()(std::size_t occupancy) const {
  return table[std::min(occupancy, table.size() - 1)];
}

void BlendParams::validate() const {
  check_weight(lambda, "lambda");
  check_weight(mu, "mu");
  std::visit(Overloaded{
                 [](const ConstantPolicy&) {},
                 [](const OccupancyRamp& p) {
                   check_weight(p.lambda_hi, "lambda_hi");
                   check_weight(p.lambda_lo, "lambda_lo");
                   if (!(p.occupancy_ref > 0.0)) throw std::invalid_argument("occupancy_ref must be positive");
                 },
                 [](const OccupancyTable& p) {
                   if (p.table.empty()) throw std::invalid_argument("lambda table is empty");
                   for (double v : p.table) check_weight(v, "lambda table entry");
                 },
                 [](const MaskedPolicy& p) {
                   check_weight(p.lambda_in, "lambda_in");
                   check_weight(p.lambda_out, "lambda_out");
                 },
                 [](const ProfilePolicy& p) {
                   if (!p.lambda_of_x) throw std::invalid_argument("lambda profile is empty");
                 },
             },
             policy);
}

bool BlendParams::needs_particles() const {
  return std::holds_alternative<OccupancyRamp>(policy) || std::holds_alternative<OccupancyTable>(policy) ||
         std::holds_alternative<MaskedPolicy>(policy);
}

std::vector<double> cell_lambdas(const BlendParams& params, const Grid1D& grid,
                                 const ParticleSet* particles) {
  if (params.needs_particles() && particles == nullptr) {
    throw std::invalid_argument("this lambda policy needs particles");
  }
  std::vector<double> lambda(grid.n_cells, params.lambda);
  std::visit(Overloaded{
                 [](const ConstantPolicy&) {},
                 [&](const OccupancyRamp& p) {
                   const auto count = occupancy(*particles, grid);
                   for (std::size_t i = 0; i < grid.n_cells; ++i) lambda[i] = p(count[i]);
                 },
                 [&](const OccupancyTable& p) {
                   const auto count = occupancy(*particles, grid);
                   for (std::size_t i = 0; i < grid.n_cells; ++i) lambda[i] = p(count[i]);
                 },
                 [&](const MaskedPolicy& p) {
                   const auto mask = support_mask(*particles, grid);
                   for (std::size_t i = 0; i < grid.n_cells; ++i) lambda[i] = mask[i] ? p.lambda_in : p.lambda_out;
                 },
                 [&](const ProfilePolicy& p) {
                   for (std::size_t i = 0; i < grid.n_cells; ++i) {
                     lambda[i] = p.lambda_of_x(grid.node(i));
                     check_weight(lambda[i], "lambda(x)");
                   }
                 },
             },
             params.policy);
  return lambda;
}

BlendState BlendState::initial(const CellField& u0, std::optional<ParticleSet> particles) {
  return BlendState{u0, u0, std::move(particles), 0};
}

MultiBlendMatrix::MultiBlendMatrix(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw std::invalid_argument("multi-blend matrix is empty");
  for (const auto& row : rows_) {
    if (row.size() != rows_.size()) throw std::invalid_argument("multi-blend matrix must be square");
    double sum = 0.0;
    for (double v : row) {
      check_weight(v, "multi-blend weight");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("multi-blend rows must sum to 1");
  }
}

BlendState blended_step_ee(const BlendState& state, const EulerianSolver& s1, const EulerianSolver& s2,
                           const BlendParams& params) {
  const Grid1D& grid = state.W.grid;
  const double t = grid.time(state.step);
  const CellField w_hat = s1.step(state.W, t).field;
  const CellField v_hat = s2.step(state.V, t).field;
  BlendState next;
  combine(w_hat, v_hat, cell_lambdas(params, grid, nullptr), params.mu, next.W, next.V);
  next.step = state.step + 1;
  return next;
}

BlendState blended_step_ee(const BlendState& state, EulerianScheme s1, EulerianScheme s2,
                           const BlendParams& params, const Problem& problem, Sampling exact_sampling) {
  params.validate();
  const Grid1D& grid = state.W.grid;
  return blended_step_ee(state, EulerianSolver(s1, problem, grid, exact_sampling),
                         EulerianSolver(s2, problem, grid, exact_sampling), params);
}

BlendState blended_step_multiscale(const BlendState& state, const EulerianSolver& s1,
                                   const BlendParams& params, const Problem& problem, OdeSolver ode,
                                   SpeedSource speed_source) {
  if (!state.particles) throw std::invalid_argument("multiscale step needs particles");
  const Grid1D& grid = state.W.grid;
  const double t = grid.time(state.step);

  // 1. Eulerian predictor.
  const CellField w_hat = s1.step(state.W, t).field;

  // 2. Particle advection; conservation laws read A(u) from the time-n density.
  ParticleSet particles = *state.particles;
  if (problem.kind == ProblemKind::linear_advection) {
    particles = advect_particles(std::move(particles), problem.velocity, grid.dt, ode, grid);
  } else {
    const CellField& source = speed_source == SpeedSource::W ? state.W : state.V;
    const auto last = static_cast<std::ptrdiff_t>(grid.n_cells) - 1;
    auto speed_of = [&](double x) {
      const auto c = std::clamp<std::ptrdiff_t>(grid.cell_of(x), 0, last);
      return problem.speed_of_density(source[static_cast<std::size_t>(c)]);
    };
    particles = advect_particles(std::move(particles), speed_of, grid.dt, ode, grid);
  }

  // 3. Lagrangian density from new positions and old masses.
  const CellField v_hat = reconstruct_density(particles, grid);

  // 4. Blend.
  BlendState next;
  combine(w_hat, v_hat, cell_lambdas(params, grid, &particles), params.mu, next.W, next.V);

  // 5. Push the blended density back into the masses (not needed for mu = 1).
  if (params.mu != 1.0) particles = update_masses(std::move(particles), next.V, v_hat, grid);

  next.particles = std::move(particles);
  next.step = state.step + 1;
  return next;
}

BlendState blended_step_multiscale(const BlendState& state, EulerianScheme s1, const BlendParams& params,
                                   const Problem& problem, OdeSolver ode, SpeedSource speed_source) {
  params.validate();
  return blended_step_multiscale(state, EulerianSolver(s1, problem, state.W.grid), params, problem, ode,
                                 speed_source);
}

std::vector<CellField> multi_blend_step(std::span<const CellField> states,
                                        std::span<const EulerianScheme> schemes,
                                        const MultiBlendMatrix& matrix, const Problem& problem,
                                        double time) {
  const std::size_t n = matrix.size();
  if (states.size() != n || schemes.size() != n) {
    throw std::invalid_argument("multi-blend: states, schemes and matrix sizes differ");
  }
  std::vector<CellField> advanced;
  advanced.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    advanced.push_back(EulerianSolver(schemes[j], problem, states[j].grid).step(states[j], time).field);
  }
  std::vector<CellField> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    CellField row = CellField::zeros(states[i].grid);
    for (std::size_t c = 0; c < row.size(); ++c) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += matrix(i, j) * advanced[j][c];
      row[c] = acc;
    }
    out.push_back(std::move(row));
  }
  return out;
}

void SimulationConfig::validate() const {
  params.validate();
  if (mode == CouplingMode::multiscale) {
    if (n_particles < 2) throw std::invalid_argument("multiscale run needs at least 2 particles");
  } else if (params.needs_particles()) {
    throw std::invalid_argument("occupancy and masked policies need multiscale mode");
  }
}

namespace {

double l1_distance(const CellField& a, const CellField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s * a.grid.dx;
}

double max_value(const CellField& f) { return *std::max_element(f.values.begin(), f.values.end()); }

}  // namespace

RunReport run_simulation(const Problem& problem, const Grid1D& grid, const SimulationConfig& config) {
  problem.validate();
  config.validate();
  const bool multiscale = config.mode == CouplingMode::multiscale;
  const CellField u0 = discretize(problem.initial_datum, grid, config.sampling);

  std::optional<ParticleSet> particles;
  if (multiscale) {
    particles = config.particle_window
                    ? init_particles_localized(problem, grid, config.n_particles, config.particle_window->first,
                                               config.particle_window->second)
                    : init_particles(problem, grid, config.n_particles);
  }
  BlendState state = BlendState::initial(u0, std::move(particles));

  const EulerianSolver s1(config.s1, problem, grid, config.sampling);
  std::optional<EulerianSolver> s2;
  if (!multiscale) s2.emplace(config.s2, problem, grid, config.sampling);

  RunReport report;
  report.stability_warning = s1.violates_cfl() || (s2 && s2->violates_cfl());
  const std::size_t steps = grid.n_steps;
  report.mass_W.reserve(steps + 1);
  report.mass_V.reserve(steps + 1);
  report.max_W.reserve(steps + 1);
  const bool track = config.track_error && problem.has_exact();
  const std::size_t stride = steps <= kMaxSnapshots - 2 ? 1 : (steps + kMaxSnapshots - 3) / (kMaxSnapshots - 2);

  auto record = [&](const BlendState& s) {
    report.mass_W.push_back(total_mass(s.W));
    report.mass_V.push_back(total_mass(s.V));
    report.max_W.push_back(max_value(s.W));
    if (track) report.error_W.push_back(l1_distance(s.W, exact_field(problem, grid, grid.time(s.step), config.sampling)));
    if (config.record == RecordMode::trajectory && (s.step % stride == 0 || s.step == steps)) {
      report.trajectory.push_back(Snapshot{s.step, grid.time(s.step), s.W, s.V});
    }
  };

  record(state);
  for (std::size_t n = 0; n < steps; ++n) {
    state = multiscale ? blended_step_multiscale(state, s1, config.params, problem, config.ode, config.speed_source)
                       : blended_step_ee(state, s1, *s2, config.params);
    if (!state.W.all_finite() || !state.V.all_finite()) {
      throw DivergedError(state.step, "run diverged at step " + std::to_string(state.step));
    }
    record(state);
  }

  report.W = std::move(state.W);
  report.V = std::move(state.V);
  report.particles = std::move(state.particles);
  if (problem.has_exact()) report.exact = exact_field(problem, grid, grid.final_time, config.sampling);
  return report;
}

void write_series_csv(std::ostream& os, const RunReport& report, const Grid1D& grid) {
  os << "step,time,mass_W,mass_V,max_W\n";
  for (std::size_t n = 0; n < report.mass_W.size(); ++n) {
    os << n << ',' << csv_number(grid.time(n)) << ',' << csv_number(report.mass_W[n]) << ','
       << csv_number(report.mass_V[n]) << ',' << csv_number(report.max_W[n]) << '\n';
  }
}

void write_final_field_csv(std::ostream& os, const RunReport& report) {
  os << "i,x,W,V,U_exact\n";
  const Grid1D& grid = report.W.grid;
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    os << i << ',' << csv_number(grid.node(i)) << ',' << csv_number(report.W[i]) << ','
       << csv_number(report.V[i]) << ',';
    if (report.exact) os << csv_number((*report.exact)[i]);
    os << '\n';
  }
}

}  // namespace blendsolve
