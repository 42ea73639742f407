#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "blendsolve/blend.hpp"
#include "blendsolve/core.hpp"
#include "blendsolve/richardson.hpp"

namespace blendsolve {

class UnknownTest : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Published reference numbers of a benchmark, where available.
struct PublishedNumbers {
  std::optional<double> e_ref;
  std::optional<double> e_min;
  std::optional<double> lambda_star;
  std::optional<double> mu_star;
  std::optional<double> lambda_r;
  std::optional<double> mu_r;
  std::optional<double> e_r;
  std::optional<double> s;
};

struct TestCase {
  std::string id;
  std::string description;
  Problem problem;
  Grid1D grid;
  SimulationConfig config;
  PublishedNumbers published;
};

/// Benchmark problems (exposed for tests and the CLI).
Problem linear_ramp_problem();      // A(x) = x, indicator of [1/2, 3/2]
Problem sine_velocity_problem();    // A(x) = sin x on [0, pi]
Problem lwr_problem();              // f(u) = u(1 - u), u0 = 1/2 on [0, 2]
Problem raised_cosine_problem();    // A = 1, raised cosine around x = 2
Problem smooth_pulse_problem();     // A = 1, sin^6 pulse on [1/2, 3/2]

/// Ids: 1, 2, 3, 4, example1, example2, test2-localized, test2-reverse,
/// test3-variable-lambda. Throws UnknownTest otherwise.
TestCase make_test_case(std::string_view id);
const std::vector<std::string>& test_ids();

/// sum_i |numeric_i - exact_i| dx; throws std::invalid_argument on grid mismatch.
double l1_error(const CellField& numeric, const CellField& exact);

struct Evaluation {
  double e_W = 0.0;
  double e_V = 0.0;
};

/// Final-time L1 errors of W and V for the test's config with (lambda, mu).
Evaluation evaluate(const TestCase& test, double lambda, double mu);
Evaluation evaluate(const TestCase& test, const BlendParams& params);

/// Best uncoupled error: min over both schemes for Eulerian pairs, the
/// Eulerian density alone for multiscale runs.
double reference_error(const TestCase& test);

using Lattice = std::vector<std::pair<double, double>>;

/// All (lambda, mu) in [0,1]^2 on a square lattice of the given step.
Lattice lattice_2d(double step);
/// lambda in [lo, hi] with the given step, mu fixed.
Lattice lattice_1d(double lo, double hi, double step, double mu);

struct SweepPoint {
  double lambda = 1.0;
  double mu = 1.0;
  double e1_W = 0.0;
  double e1_V = 0.0;
  bool in_phi_W = false;
  bool in_phi_V = false;
};

struct SweepResult {
  std::vector<SweepPoint> points;  // lattice order
  double e_ref = 0.0;
  std::size_t argmin_W = 0;
  std::size_t argmin_V = 0;
};

/// Errors over the lattice; Phi membership is E1 < e_ref (strict). The argmin
/// tie-break prefers the smallest lambda, then the smallest mu.
SweepResult parameter_sweep(const TestCase& test, const Lattice& lattice, std::size_t threads = 1,
                            std::optional<double> e_ref = std::nullopt);

struct RefinementResult {
  double factor = 1.0;
  std::size_t n_cells = 0;
  std::size_t n_steps = 0;
  double error = 0.0;
};

/// Refine the grid (N_T scaled with N_C) until the uncoupled `probe` scheme
/// reaches `target` within 2%, by doubling then bisection over N_C.
RefinementResult refinement_equivalence(const TestCase& test, EulerianScheme probe, double target,
                                        std::size_t max_cells = 40000);

struct ReportRow {
  std::string quantity;
  std::optional<double> published_value;
  double computed_value = 0.0;
  bool pass = true;
  bool checked = false;  // false for informational rows
};

struct TestReport {
  std::string id;
  std::vector<ReportRow> rows;
  bool passed() const;
};

TestReport run_benchmark(std::string_view id, std::size_t threads = 1);

void write_report_csv(std::ostream& os, const TestReport& report);
void write_sweep_csv(std::ostream& os, const SweepResult& sweep);

}  // namespace blendsolve
