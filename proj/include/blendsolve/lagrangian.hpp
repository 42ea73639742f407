#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "blendsolve/core.hpp"

namespace blendsolve {

enum class OdeSolver { explicit_euler, rk4 };

std::string to_string(OdeSolver solver);
/// "EE" or "RK4".
OdeSolver parse_ode_solver(const std::string& name);

/// Mass-carrying particles. A particle leaving [x_lo - dx/2, x_hi + dx/2)
/// is retired: its mass moves to exited_mass and it no longer deposits.
struct ParticleSet {
  std::vector<double> positions;
  std::vector<double> masses;
  std::vector<std::uint8_t> alive;
  std::vector<std::ptrdiff_t> cell_index;  // -1 for retired particles
  std::size_t n_alive = 0;
  double exited_mass = 0.0;

  std::size_t size() const { return positions.size(); }
  double alive_mass() const;
};

/// N_P particles uniformly spaced on [x_0, x_{N_C-1}], with masses
/// u0(P) * dx / N_PC where N_PC = N_P / N_C.
ParticleSet init_particles(const Problem& problem, const Grid1D& grid, std::size_t n_particles);

/// Particles uniformly spaced on [x_from, x_to] only. N_PC is taken as the
/// number of particles per cell spanned by the window.
ParticleSet init_particles_localized(const Problem& problem, const Grid1D& grid,
                                     std::size_t n_particles, double x_from, double x_to);

/// Recompute cell_index and retire particles that left the grid.
void refresh_cells(ParticleSet& ps, const Grid1D& grid);

/// Move alive particles by one ODE step of dP/dt = speed_of(P).
ParticleSet advect_particles(ParticleSet ps, const ScalarMap& speed_of, double dt, OdeSolver solver,
                             const Grid1D& grid);

/// Alive particles per cell.
std::vector<std::size_t> occupancy(const ParticleSet& ps, const Grid1D& grid);

/// Sum of alive masses in each cell divided by dx.
CellField reconstruct_density(const ParticleSet& ps, const Grid1D& grid);

/// Spread the per-cell correction dx * (v_new - v_hat) equally over the
/// particles of each occupied cell. Empty cells touch nothing.
ParticleSet update_masses(ParticleSet ps, const CellField& v_new, const CellField& v_hat,
                          const Grid1D& grid);

/// Conservation-law particle speeds A(field[cell]) for each particle (0 for retired ones).
std::vector<double> particle_speed_cl(const ParticleSet& ps, const CellField& field,
                                      const Problem& problem);

/// True on cells between the first and last occupied cell (inclusive).
std::vector<bool> support_mask(const ParticleSet& ps, const Grid1D& grid);

/// Rows step,alpha,position,mass for alive particles; header when requested.
void write_particles_csv(std::ostream& os, std::size_t step, const ParticleSet& ps, bool header);

}  // namespace blendsolve
