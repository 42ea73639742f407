#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "blendsolve/bench.hpp"

using namespace blendsolve;

namespace checks {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

// Test 1's problem and spacing, cut to `steps` steps.
Grid1D ramp_grid(std::size_t steps) {
  const double dt = 2.3 / 3000.0;
  return build_grid(0.0, 20.0, 1200, dt * static_cast<double>(steps), steps);
}

double max_abs_diff(const CellField& a, const CellField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double rel_drift(const std::vector<double>& mass) {
  double m = 0.0;
  for (double v : mass) m = std::max(m, std::abs(v - mass.front()));
  return m / std::abs(mass.front());
}

}  // namespace

Result conservation_suite() {
  const Problem problem = linear_ramp_problem();
  const Grid1D grid = ramp_grid(200);
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  std::string worst_case;
  for (EulerianScheme s1 : {EulerianScheme::upwind, EulerianScheme::richtmyer, EulerianScheme::weno2}) {
    for (bool particles : {false, true}) {
      for (int k = 0; k < 20; ++k) {
        SimulationConfig cfg;
        cfg.s1 = s1;
        cfg.sampling = Sampling::pointwise;
        if (particles) {
          cfg.mode = CouplingMode::multiscale;
          cfg.n_particles = 5 * grid.n_cells;
        } else {
          cfg.s2 = EulerianScheme::upwind;
        }
        cfg.params.lambda = unit(rng);
        cfg.params.mu = unit(rng);
        const RunReport r = run_simulation(problem, grid, cfg);
        const double d = std::max(rel_drift(r.mass_W), rel_drift(r.mass_V));
        if (d > worst) {
          worst = d;
          worst_case = std::string(to_string(s1)) + (particles ? "+particles" : "+UPW");
        }
      }
    }
  }
  return {"conservation", worst <= 1e-10, "worst relative mass drift " + fmt(worst) + " (" + worst_case + ")"};
}

Result uncoupled_identity() {
  const Problem problem = linear_ramp_problem();
  const Grid1D grid = ramp_grid(200);
  const CellField u0 = sample_function(problem.initial_datum, grid);
  bool same = true;
  std::size_t compared = 0;
  for (EulerianScheme s1 : {EulerianScheme::upwind, EulerianScheme::richtmyer, EulerianScheme::weno2}) {
    const EulerianSolver a(s1, problem, grid);
    const EulerianSolver b(EulerianScheme::upwind, problem, grid);
    const BlendParams params;  // (1, 1)
    BlendState st = BlendState::initial(u0);
    CellField w = u0;
    CellField v = u0;
    for (std::size_t n = 0; n < grid.n_steps; ++n) {
      st = blended_step_ee(st, a, b, params);
      w = a.step(w, grid.time(n)).field;
      v = b.step(v, grid.time(n)).field;
      same = same && st.W.values == w.values && st.V.values == v.values;
      ++compared;
    }
    // Particles as the second scheme: V must be the plain Lagrangian density.
    ParticleSet ps = init_particles(problem, grid, 5 * grid.n_cells);
    BlendState ms = BlendState::initial(u0, ps);
    w = u0;
    for (std::size_t n = 0; n < grid.n_steps; ++n) {
      ms = blended_step_multiscale(ms, a, params, problem, OdeSolver::explicit_euler, SpeedSource::W);
      w = a.step(w, grid.time(n)).field;
      ps = advect_particles(std::move(ps), problem.velocity, grid.dt, OdeSolver::explicit_euler, grid);
      same = same && ms.W.values == w.values && ms.V.values == reconstruct_density(ps, grid).values &&
             ms.particles->masses == ps.masses;
      ++compared;
    }
  }
  return {"uncoupled identity", same, std::to_string(compared) + " steps compared bitwise"};
}

Result collapse_identity() {
  const TestCase tc = make_test_case("1");
  const EulerianSolver a(tc.config.s1, tc.problem, tc.grid);
  const EulerianSolver b(tc.config.s2, tc.problem, tc.grid);
  const CellField u0 = discretize(tc.problem.initial_datum, tc.grid, tc.config.sampling);
  double worst = 0.0;
  for (auto [lambda, mu] : {std::pair{0.3, 0.7}, std::pair{0.5, 0.5}, std::pair{0.9, 0.1}}) {
    BlendParams params;
    params.lambda = lambda;
    params.mu = mu;
    BlendState st = BlendState::initial(u0);
    for (std::size_t n = 0; n < tc.grid.n_steps; ++n) {
      st = blended_step_ee(st, a, b, params);
      worst = std::max(worst, max_abs_diff(st.W, st.V));
    }
  }
  return {"lambda = 1 - mu collapse", worst <= 1e-12, "max |W - V| = " + fmt(worst)};
}

namespace {

Result unit_courant() {
  const Problem p = raised_cosine_problem();
  const Grid1D g = build_grid(0.0, 20.0, 201, 5.0, 50);  // dt = dx
  const EulerianSolver s(EulerianScheme::upwind, p, g);
  CellField u = sample_function(p.initial_datum, g);
  const CellField u0 = u;
  for (std::size_t n = 0; n < g.n_steps; ++n) u = s.step(u, g.time(n)).field;
  double worst = 0.0;
  for (std::size_t i = 0; i < g.n_cells; ++i) {
    const double expected = i >= g.n_steps ? u0[i - g.n_steps] : 0.0;
    worst = std::max(worst, std::abs(u[i] - expected));
  }
  return {"unit-Courant exactness", worst <= 1e-14, "max deviation " + fmt(worst)};
}

Result mass_duality() {
  const Problem p = linear_ramp_problem();
  const Grid1D g = ramp_grid(100);
  ParticleSet ps = init_particles(p, g, 6000);
  double worst = 0.0;
  for (std::size_t n = 0; n < g.n_steps; ++n) {
    ps = advect_particles(std::move(ps), p.velocity, g.dt, OdeSolver::rk4, g);
    const double mass = ps.alive_mass();
    worst = std::max(worst, std::abs(total_mass(reconstruct_density(ps, g)) - mass) / mass);
  }
  return {"deposition/mass duality", worst <= 1e-12, "max relative gap " + fmt(worst)};
}

Result mass_update() {
  const Problem p = linear_ramp_problem();
  const Grid1D g = ramp_grid(10);
  ParticleSet ps = init_particles(p, g, 3600);
  const CellField v_hat = reconstruct_density(ps, g);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> jitter(0.5, 1.5);
  CellField v_new = v_hat;
  for (double& x : v_new.values) x *= jitter(rng);
  const ParticleSet once = update_masses(ps, v_new, v_hat, g);
  const CellField after = reconstruct_density(once, g);
  const std::vector<std::size_t> occ = occupancy(ps, g);
  double post = 0.0;
  for (std::size_t i = 0; i < g.n_cells; ++i) {
    if (occ[i] > 0) post = std::max(post, std::abs(after[i] - v_new[i]));
  }
  const ParticleSet twice = update_masses(once, v_new, after, g);
  double idem = 0.0;
  for (std::size_t k = 0; k < once.size(); ++k) idem = std::max(idem, std::abs(twice.masses[k] - once.masses[k]));
  const bool ok = post <= 1e-12 && idem <= 1e-15;
  return {"update_masses postcondition and idempotence", ok,
          "density gap " + fmt(post) + ", repeat change " + fmt(idem)};
}

Result godunov_bounds() {
  const TestCase tc = make_test_case("4");
  const EulerianSolver s(EulerianScheme::godunov, tc.problem, tc.grid);
  CellField u = discretize(tc.problem.initial_datum, tc.grid, tc.config.sampling);
  const auto [lo_it, hi_it] = std::minmax_element(u.values.begin(), u.values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  double excess = 0.0;
  for (std::size_t n = 0; n < tc.grid.n_steps; ++n) {
    u = s.step(u, tc.grid.time(n)).field;
    for (double v : u.values) excess = std::max({excess, lo - v, v - hi});
  }
  return {"Godunov bounds", excess <= 0.0, "largest excursion " + fmt(excess)};
}

Result multi_blend_reduction() {
  const TestCase tc = make_test_case("1");
  const Grid1D g = ramp_grid(50);
  const CellField u0 = sample_function(tc.problem.initial_datum, g);
  const EulerianSolver a(tc.config.s1, tc.problem, g);
  const EulerianSolver b(tc.config.s2, tc.problem, g);
  BlendParams params;
  params.lambda = 0.37;
  params.mu = 0.81;
  const MultiBlendMatrix m({{params.lambda, 1.0 - params.lambda}, {1.0 - params.mu, params.mu}});
  const std::vector<EulerianScheme> schemes{tc.config.s1, tc.config.s2};
  BlendState st = BlendState::initial(u0);
  std::vector<CellField> multi{u0, u0};
  double worst = 0.0;
  for (std::size_t n = 0; n < g.n_steps; ++n) {
    st = blended_step_ee(st, a, b, params);
    multi = multi_blend_step(multi, schemes, m, tc.problem, g.time(n));
    worst = std::max({worst, max_abs_diff(st.W, multi[0]), max_abs_diff(st.V, multi[1])});
  }
  return {"multi-blend reduces to two-scheme blend", worst <= 1e-14, "max difference " + fmt(worst)};
}

Result thread_determinism() {
  const TestCase tc = make_test_case("example1");
  const Lattice lattice = lattice_2d(0.125);
  std::ostringstream s1, s4, e1, e4;
  write_sweep_csv(s1, parameter_sweep(tc, lattice, 1));
  write_sweep_csv(s4, parameter_sweep(tc, lattice, 4));
  SearchConfig search;
  search.coarse_step = 0.125;
  write_surface_csv(e1, estimate_coupling(tc.problem, tc.config, tc.grid, 0.5, search, 1));
  write_surface_csv(e4, estimate_coupling(tc.problem, tc.config, tc.grid, 0.5, search, 4));
  const bool ok = s1.str() == s4.str() && e1.str() == e4.str();
  return {"determinism across 1 and 4 threads", ok, "sweep and surface CSV compared byte for byte"};
}

}  // namespace

std::vector<Result> property_suite() {
  return {unit_courant(), mass_duality(), mass_update(), godunov_bounds(), multi_blend_reduction(),
          thread_determinism()};
}

}  // namespace checks
