#include "blendsolve/richardson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "blendsolve/csv.hpp"
#include "blendsolve/parallel.hpp"

namespace blendsolve {

std::size_t scaled_count(double s, std::size_t n) {
  const double x = s * static_cast<double>(n);
  return static_cast<std::size_t>(std::ceil(x - 1e-9 * std::max(1.0, x)));
}

CoarsePair make_coarse_pair(const Grid1D& reference, double s, std::size_t n_particles) {
  if (!(s > 0.0 && s <= 0.5)) throw std::invalid_argument("coarsening factor s must lie in (0, 1/2]");
  const std::size_t nc = scaled_count(s, reference.n_cells);
  const std::size_t nt = scaled_count(s, reference.n_steps);
  if (nc < 3 || nt < 1) throw std::invalid_argument("coarsening factor leaves fewer than 3 cells");
  CoarsePair pair;
  pair.s = s;
  pair.g_prime = build_grid(reference.x_lo, reference.x_hi, nc, reference.final_time, nt);
  pair.g_second = build_grid(reference.x_lo, reference.x_hi, 2 * nc, reference.final_time, 2 * nt);
  pair.n_particles_prime = n_particles > 0 ? scaled_count(s, n_particles) : 0;
  pair.n_particles_second = 2 * pair.n_particles_prime;
  return pair;
}

std::size_t node_correspondence(std::size_t i, const CoarsePair& pair) {
  // x'_i sits at fractional G'' index i (N''-1)/(N'-1); round half down.
  const auto a = static_cast<long long>(i) * static_cast<long long>(pair.g_second.n_cells - 1);
  const auto b = static_cast<long long>(pair.g_prime.n_cells - 1);
  const long long p = 2 * a - b;
  const long long q = 2 * b;
  const long long j = p >= 0 ? (p + q - 1) / q : -((-p) / q);
  return static_cast<std::size_t>(std::clamp<long long>(j, 0, static_cast<long long>(pair.g_second.n_cells) - 1));
}

double richardson_indicator(const CellField& sol_prime, const CellField& sol_second, const CoarsePair& pair) {
  if (sol_prime.size() != pair.g_prime.n_cells || sol_second.size() != pair.g_second.n_cells) {
    throw std::invalid_argument("richardson_indicator: fields do not match the coarse pair");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < sol_prime.size(); ++i) {
    s += std::abs(sol_prime[i] - sol_second[node_correspondence(i, pair)]);
  }
  return s * pair.g_prime.dx;
}

SurfacePoint richardson_point(const Problem& problem, const SimulationConfig& base, const CoarsePair& pair,
                              double lambda, double mu) {
  SurfacePoint point{lambda, mu, std::numeric_limits<double>::infinity(),
                     std::numeric_limits<double>::infinity()};
  SimulationConfig cfg = base;
  cfg.params.lambda = lambda;
  cfg.params.mu = mu;
  cfg.record = RecordMode::final_only;
  cfg.track_error = false;
  try {
    cfg.n_particles = pair.n_particles_prime;
    const RunReport coarse = run_simulation(problem, pair.g_prime, cfg);
    cfg.n_particles = pair.n_particles_second;
    const RunReport fine = run_simulation(problem, pair.g_second, cfg);
    point.delta_W = richardson_indicator(coarse.W, fine.W, pair);
    point.delta_V = richardson_indicator(coarse.V, fine.V, pair);
  } catch (const DivergedError&) {
  }
  return point;
}

namespace {

// Lattice coordinates in units of the finest search resolution.
using Key = std::pair<long long, long long>;

bool better(const SurfacePoint& a, const SurfacePoint& b) {
  return std::tie(a.delta_W, a.lambda, a.mu) < std::tie(b.delta_W, b.lambda, b.mu);
}

}  // namespace

CouplingEstimate estimate_coupling(const Problem& problem, const SimulationConfig& base,
                                   const Grid1D& reference, double s, const SearchConfig& search,
                                   std::size_t threads) {
  if (!(search.coarse_step > 0.0 && search.coarse_step <= 1.0)) {
    throw std::invalid_argument("search step must lie in (0, 1]");
  }
  CouplingEstimate est;
  est.pair = make_coarse_pair(reference, s, base.n_particles);

  const double resolution = search.coarse_step / std::ldexp(1.0, static_cast<int>(search.rounds));
  const long long top = std::llround(1.0 / resolution);
  const bool partial = search.mode == SearchMode::partial_1d;
  std::map<Key, std::size_t> seen;

  auto evaluate = [&](const std::vector<Key>& keys) {
    std::vector<Key> fresh;
    for (const Key& k : keys) {
      if (k.first < 0 || k.first > top || k.second < 0 || k.second > top) continue;
      if (seen.count(k) || std::find(fresh.begin(), fresh.end(), k) != fresh.end()) continue;
      fresh.push_back(k);
    }
    std::vector<SurfacePoint> results(fresh.size());
    parallel_for(fresh.size(), threads, [&](std::size_t n) {
      const double lambda = std::min(1.0, static_cast<double>(fresh[n].first) * resolution);
      const double mu = std::min(1.0, static_cast<double>(fresh[n].second) * resolution);
      results[n] = richardson_point(problem, base, est.pair, lambda, mu);
    });
    for (std::size_t n = 0; n < fresh.size(); ++n) {
      seen[fresh[n]] = est.surface.size();
      est.surface.push_back(results[n]);
    }
  };

  const long long coarse = std::llround(search.coarse_step / resolution);
  std::vector<long long> axis;
  for (long long l = 0; l <= top; l += coarse) axis.push_back(l);
  if (axis.back() != top) axis.push_back(top);
  std::vector<Key> lattice;
  for (long long l : axis) {
    if (partial) {
      lattice.emplace_back(l, top);
    } else {
      for (long long m : axis) lattice.emplace_back(l, m);
    }
  }
  evaluate(lattice);

  auto incumbent = [&] {
    Key best_key = seen.begin()->first;
    for (const auto& [key, idx] : seen) {
      if (better(est.surface[idx], est.surface[seen[best_key]])) best_key = key;
    }
    return best_key;
  };

  for (std::size_t r = 1; r <= search.rounds; ++r) {
    const long long h = coarse >> r;
    const Key c = incumbent();
    std::vector<Key> around;
    for (long long dl = -1; dl <= 1; ++dl) {
      if (partial) {
        around.emplace_back(c.first + dl * h, top);
      } else {
        for (long long dm = -1; dm <= 1; ++dm) around.emplace_back(c.first + dl * h, c.second + dm * h);
      }
    }
    evaluate(around);
  }

  const SurfacePoint& best = est.surface[seen[incumbent()]];
  est.lambda = best.lambda;
  est.mu = best.mu;
  est.delta_W = best.delta_W;
  return est;
}

double optimal_lambda_lwbw(double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("Courant number must lie in (0, 1]");
  return (2.0 - beta) / 3.0;
}

void write_surface_csv(std::ostream& os, const CouplingEstimate& estimate) {
  os << "lambda,mu,delta_R_W,delta_R_V\n";
  for (const auto& p : estimate.surface) {
    os << csv_number(p.lambda) << ',' << csv_number(p.mu) << ',' << csv_number(p.delta_W) << ','
       << csv_number(p.delta_V) << '\n';
  }
}

}  // namespace blendsolve
