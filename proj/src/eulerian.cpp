#include "blendsolve/eulerian.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace blendsolve {

namespace {

constexpr std::size_t kGhosts = 2;
constexpr double kWenoEpsilon = 1e-9;

// Third-order WENO value at the right face of the middle cell of (um, u0, up).
double weno3_face(double um, double u0, double up) {
  const double p0 = -0.5 * um + 1.5 * u0;
  const double p1 = 0.5 * u0 + 0.5 * up;
  const double b0 = (u0 - um) * (u0 - um);
  const double b1 = (up - u0) * (up - u0);
  const double a0 = (1.0 / 3.0) / ((kWenoEpsilon + b0) * (kWenoEpsilon + b0));
  const double a1 = (2.0 / 3.0) / ((kWenoEpsilon + b1) * (kWenoEpsilon + b1));
  return (a0 * p0 + a1 * p1) / (a0 + a1);
}

}  // namespace

std::string_view to_string(EulerianScheme scheme) {
  switch (scheme) {
    case EulerianScheme::upwind: return "UPW";
    case EulerianScheme::lax_wendroff: return "LW";
    case EulerianScheme::beam_warming: return "BW";
    case EulerianScheme::richtmyer: return "RLW";
    case EulerianScheme::weno2: return "WENO2";
    case EulerianScheme::godunov: return "GODUNOV";
    case EulerianScheme::exact: return "EXACT";
  }
  return "?";
}

EulerianScheme parse_scheme(std::string_view name) {
  std::string up(name);
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
  for (auto s : {EulerianScheme::upwind, EulerianScheme::lax_wendroff, EulerianScheme::beam_warming,
                 EulerianScheme::richtmyer, EulerianScheme::weno2, EulerianScheme::godunov,
                 EulerianScheme::exact}) {
    if (up == to_string(s)) return s;
  }
  throw std::invalid_argument("unknown Eulerian scheme '" + std::string(name) + "'");
}

bool is_compatible(EulerianScheme scheme, const Problem& problem) {
  const bool advection = problem.kind == ProblemKind::linear_advection;
  switch (scheme) {
    case EulerianScheme::upwind:
    case EulerianScheme::richtmyer:
    case EulerianScheme::weno2: return advection;
    case EulerianScheme::lax_wendroff:
    case EulerianScheme::beam_warming: return advection && problem.constant_velocity.has_value();
    case EulerianScheme::godunov: return !advection;
    case EulerianScheme::exact: return problem.has_exact();
  }
  return false;
}

double stability_limit(EulerianScheme scheme) {
  switch (scheme) {
    case EulerianScheme::beam_warming: return 2.0;
    case EulerianScheme::exact: return std::numeric_limits<double>::infinity();
    default: return 1.0;
  }
}

double godunov_flux(double u_left, double u_right, const ScalarMap& f,
                    std::optional<double> critical_point) {
  const double fl = f(u_left);
  const double fr = f(u_right);
  const double lo = std::min(u_left, u_right);
  const double hi = std::max(u_left, u_right);
  const bool has_crit = critical_point && *critical_point > lo && *critical_point < hi;
  if (u_left <= u_right) {
    double m = std::min(fl, fr);
    if (has_crit) m = std::min(m, f(*critical_point));
    return m;
  }
  double m = std::max(fl, fr);
  if (has_crit) m = std::max(m, f(*critical_point));
  return m;
}

EulerianSolver::EulerianSolver(EulerianScheme scheme, const Problem& problem, const Grid1D& grid,
                               Sampling exact_sampling)
    : scheme_(scheme), problem_(problem), grid_(grid), exact_sampling_(exact_sampling) {
  if (!is_compatible(scheme, problem)) {
    throw std::invalid_argument("scheme " + std::string(to_string(scheme)) +
                                " is not applicable to this problem");
  }
  cfl_violation_ = courant_number(grid, problem) > stability_limit(scheme) * (1.0 + 1e-12);
  if (problem.kind == ProblemKind::linear_advection) {
    const std::size_t n = grid.n_cells;
    center_speed_.resize(n + 2 * kGhosts);
    for (std::size_t p = 0; p < center_speed_.size(); ++p) {
      const double x = grid.x_lo + (static_cast<double>(p) - static_cast<double>(kGhosts)) * grid.dx;
      center_speed_[p] = problem.velocity(x);
    }
    face_speed_.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) face_speed_[k] = problem.velocity(grid.face(k));
  }
}

// Face k separates cells k-1 and k; in the padded array those are k+1 and k+2.
void EulerianSolver::fluxes(const std::vector<double>& u, std::vector<double>& flux) const {
  const std::size_t n = grid_.n_cells;
  const double r = grid_.dt / grid_.dx;
  flux.resize(n + 1);
  switch (scheme_) {
    case EulerianScheme::upwind:
      for (std::size_t k = 0; k <= n; ++k) {
        const std::size_t l = k + 1, rr = k + 2;
        flux[k] = std::max(center_speed_[l], 0.0) * u[l] + std::min(center_speed_[rr], 0.0) * u[rr];
      }
      break;
    case EulerianScheme::lax_wendroff: {
      const double a = *problem_.constant_velocity;
      const double nu = a * r;
      for (std::size_t k = 0; k <= n; ++k) {
        const double ul = u[k + 1], ur = u[k + 2];
        flux[k] = 0.5 * a * (ul + ur) - 0.5 * a * nu * (ur - ul);
      }
      break;
    }
    case EulerianScheme::beam_warming: {
      const double a = *problem_.constant_velocity;
      const double nu = a * r;
      for (std::size_t k = 0; k <= n; ++k) {
        if (a >= 0.0) {
          flux[k] = a * u[k + 1] + 0.5 * a * (1.0 - nu) * (u[k + 1] - u[k]);
        } else {
          flux[k] = a * u[k + 2] - 0.5 * a * (1.0 + nu) * (u[k + 3] - u[k + 2]);
        }
      }
      break;
    }
    case EulerianScheme::richtmyer:
      for (std::size_t k = 0; k <= n; ++k) {
        const std::size_t l = k + 1, rr = k + 2;
        const double half = 0.5 * (u[l] + u[rr]) -
                            0.5 * r * (center_speed_[rr] * u[rr] - center_speed_[l] * u[l]);
        flux[k] = face_speed_[k] * half;
      }
      break;
    case EulerianScheme::weno2:
      for (std::size_t k = 0; k <= n; ++k) {
        const double a = face_speed_[k];
        const double face_value = a >= 0.0 ? weno3_face(u[k], u[k + 1], u[k + 2])
                                           : weno3_face(u[k + 3], u[k + 2], u[k + 1]);
        flux[k] = a * face_value;
      }
      break;
    case EulerianScheme::godunov:
      for (std::size_t k = 0; k <= n; ++k) {
        flux[k] = godunov_flux(u[k + 1], u[k + 2], problem_.flux, problem_.flux_critical_point);
      }
      break;
    case EulerianScheme::exact: break;
  }
}

// Forward-Euler conservative update out = u - dt/dx (F_{i+1/2} - F_{i-1/2}).
void EulerianSolver::advance(const std::vector<double>& u, std::vector<double>& out) const {
  const auto padded = with_ghosts(u, kGhosts, problem_.boundary);
  std::vector<double> flux;
  fluxes(padded, flux);
  const double r = grid_.dt / grid_.dx;
  out.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] - r * (flux[i + 1] - flux[i]);
}

StepResult EulerianSolver::step(const CellField& field, double time) const {
  if (field.size() != grid_.n_cells) throw std::invalid_argument("field does not match solver grid");
  StepResult result{CellField{grid_, {}}, cfl_violation_};
  if (scheme_ == EulerianScheme::exact) {
    result.field = exact_field(problem_, grid_, time + grid_.dt, exact_sampling_);
    return result;
  }
  if (scheme_ != EulerianScheme::weno2) {
    advance(field.values, result.field.values);
    return result;
  }
  // SSP-RK3 built from three conservative Euler stages.
  const auto& u0 = field.values;
  std::vector<double> stage, euler;
  advance(u0, euler);
  stage = euler;
  advance(stage, euler);
  for (std::size_t i = 0; i < u0.size(); ++i) stage[i] = 0.75 * u0[i] + 0.25 * euler[i];
  advance(stage, euler);
  auto& out = result.field.values;
  out.resize(u0.size());
  for (std::size_t i = 0; i < u0.size(); ++i) out[i] = u0[i] / 3.0 + 2.0 / 3.0 * euler[i];
  return result;
}

StepResult eulerian_step(EulerianScheme scheme, const CellField& field, const Problem& problem,
                         double dt, double time, Sampling exact_sampling) {
  Grid1D grid = field.grid;
  grid.dt = dt;
  return EulerianSolver(scheme, problem, grid, exact_sampling).step(field, time);
}

}  // namespace blendsolve
