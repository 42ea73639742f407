#include "blendsolve/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "blendsolve/csv.hpp"

namespace blendsolve {

std::string to_string(OdeSolver solver) {
  return solver == OdeSolver::rk4 ? "RK4" : "EE";
}

OdeSolver parse_ode_solver(const std::string& name) {
  if (name == "EE" || name == "ee") return OdeSolver::explicit_euler;
  if (name == "RK4" || name == "rk4") return OdeSolver::rk4;
  throw std::invalid_argument("unknown ODE solver '" + name + "'");
}

double ParticleSet::alive_mass() const {
  double m = 0.0;
  for (std::size_t a = 0; a < size(); ++a) {
    if (alive[a]) m += masses[a];
  }
  return m;
}

namespace {

ParticleSet seed(const Problem& problem, const Grid1D& grid, std::size_t n_particles, double x_from,
                 double x_to, double particles_per_cell) {
  if (n_particles < 2) throw std::invalid_argument("need at least 2 particles");
  ParticleSet ps;
  ps.positions.resize(n_particles);
  ps.masses.resize(n_particles);
  ps.alive.assign(n_particles, 1);
  ps.cell_index.assign(n_particles, -1);
  const double spacing = (x_to - x_from) / static_cast<double>(n_particles - 1);
  const double weight = grid.dx / particles_per_cell;
  for (std::size_t a = 0; a < n_particles; ++a) {
    const double p = x_from + static_cast<double>(a) * spacing;
    ps.positions[a] = p;
    ps.masses[a] = problem.initial_datum(p) * weight;
  }
  ps.n_alive = n_particles;
  refresh_cells(ps, grid);
  return ps;
}

}  // namespace

ParticleSet init_particles(const Problem& problem, const Grid1D& grid, std::size_t n_particles) {
  const double per_cell = static_cast<double>(n_particles) / static_cast<double>(grid.n_cells);
  return seed(problem, grid, n_particles, grid.node(0), grid.node(grid.n_cells - 1), per_cell);
}

ParticleSet init_particles_localized(const Problem& problem, const Grid1D& grid,
                                     std::size_t n_particles, double x_from, double x_to) {
  if (!(x_to > x_from)) throw std::invalid_argument("particle window must satisfy x_from < x_to");
  const auto first = std::max<std::ptrdiff_t>(grid.cell_of(x_from), 0);
  const auto last =
      std::min<std::ptrdiff_t>(grid.cell_of(x_to), static_cast<std::ptrdiff_t>(grid.n_cells) - 1);
  if (last < first) throw std::invalid_argument("particle window lies outside the grid");
  const double per_cell = static_cast<double>(n_particles) / static_cast<double>(last - first + 1);
  return seed(problem, grid, n_particles, x_from, x_to, per_cell);
}

void refresh_cells(ParticleSet& ps, const Grid1D& grid) {
  const auto n = static_cast<std::ptrdiff_t>(grid.n_cells);
  for (std::size_t a = 0; a < ps.size(); ++a) {
    if (!ps.alive[a]) continue;
    const std::ptrdiff_t c = grid.cell_of(ps.positions[a]);
    if (c < 0 || c >= n || !std::isfinite(ps.positions[a])) {
      ps.alive[a] = 0;
      ps.cell_index[a] = -1;
      ps.exited_mass += ps.masses[a];
      --ps.n_alive;
    } else {
      ps.cell_index[a] = c;
    }
  }
}

ParticleSet advect_particles(ParticleSet ps, const ScalarMap& speed_of, double dt, OdeSolver solver,
                             const Grid1D& grid) {
  for (std::size_t a = 0; a < ps.size(); ++a) {
    if (!ps.alive[a]) continue;
    const double p = ps.positions[a];
    if (solver == OdeSolver::explicit_euler) {
      ps.positions[a] = p + dt * speed_of(p);
    } else {
      const double k1 = speed_of(p);
      const double k2 = speed_of(p + 0.5 * dt * k1);
      const double k3 = speed_of(p + 0.5 * dt * k2);
      const double k4 = speed_of(p + dt * k3);
      ps.positions[a] = p + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  refresh_cells(ps, grid);
  return ps;
}

std::vector<std::size_t> occupancy(const ParticleSet& ps, const Grid1D& grid) {
  std::vector<std::size_t> count(grid.n_cells, 0);
  for (std::size_t a = 0; a < ps.size(); ++a) {
    if (ps.alive[a]) ++count[static_cast<std::size_t>(ps.cell_index[a])];
  }
  return count;
}

CellField reconstruct_density(const ParticleSet& ps, const Grid1D& grid) {
  CellField v = CellField::zeros(grid);
  // Ascending particle order per cell keeps the sums reproducible.
  for (std::size_t a = 0; a < ps.size(); ++a) {
    if (ps.alive[a]) v[static_cast<std::size_t>(ps.cell_index[a])] += ps.masses[a];
  }
  for (double& x : v.values) x /= grid.dx;
  return v;
}

ParticleSet update_masses(ParticleSet ps, const CellField& v_new, const CellField& v_hat,
                          const Grid1D& grid) {
  if (v_new.size() != grid.n_cells || v_hat.size() != grid.n_cells) {
    throw std::invalid_argument("update_masses: field size does not match grid");
  }
  const auto count = occupancy(ps, grid);
  std::vector<double> share(grid.n_cells, 0.0);
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    if (count[i] > 0) share[i] = grid.dx / static_cast<double>(count[i]) * (v_new[i] - v_hat[i]);
  }
  for (std::size_t a = 0; a < ps.size(); ++a) {
    if (ps.alive[a]) ps.masses[a] += share[static_cast<std::size_t>(ps.cell_index[a])];
  }
  return ps;
}

std::vector<double> particle_speed_cl(const ParticleSet& ps, const CellField& field,
                                      const Problem& problem) {
  if (problem.kind != ProblemKind::conservation_law) {
    throw std::invalid_argument("particle_speed_cl needs a conservation-law problem");
  }
  std::vector<double> speed(ps.size(), 0.0);
  for (std::size_t a = 0; a < ps.size(); ++a) {
    if (ps.alive[a]) speed[a] = problem.speed_of_density(field[static_cast<std::size_t>(ps.cell_index[a])]);
  }
  return speed;
}

std::vector<bool> support_mask(const ParticleSet& ps, const Grid1D& grid) {
  std::vector<bool> mask(grid.n_cells, false);
  std::ptrdiff_t lo = -1, hi = -1;
  for (std::size_t a = 0; a < ps.size(); ++a) {
    if (!ps.alive[a]) continue;
    const auto c = ps.cell_index[a];
    if (lo < 0 || c < lo) lo = c;
    if (hi < 0 || c > hi) hi = c;
  }
  if (lo < 0) return mask;
  for (auto i = lo; i <= hi; ++i) mask[static_cast<std::size_t>(i)] = true;
  return mask;
}

void write_particles_csv(std::ostream& os, std::size_t step, const ParticleSet& ps, bool header) {
  if (header) os << "step,alpha,position,mass\n";
  for (std::size_t a = 0; a < ps.size(); ++a) {
    if (!ps.alive[a]) continue;
    os << step << ',' << a << ',' << csv_number(ps.positions[a]) << ',' << csv_number(ps.masses[a])
       << '\n';
  }
}

}  // namespace blendsolve
