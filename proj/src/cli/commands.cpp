#include "blendsolve/cli/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "blendsolve/csv.hpp"

namespace blendsolve::cli {

namespace fs = std::filesystem;

fs::path resolve_out_dir(const std::optional<fs::path>& flag, const RunConfig* config) {
  if (flag) return *flag;
  if (config && config->output.dir) return *config->output.dir;
  if (const char* env = std::getenv("BLENDSOLVE_OUT"); env && *env) return env;
  return fs::current_path();
}

namespace {

std::ofstream open_csv(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream os(dir / name);
  if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
  return os;
}

void echo_config(const RunConfig& config, const fs::path& out, std::ostream& log) {
  log << "# resolved configuration\n";
  write_config(log, config);
  log << '\n';
  std::ofstream os = open_csv(out, "config.ini");
  write_config(os, config);
}

void write_trajectory_csv(std::ostream& os, const RunReport& report) {
  os << "step,time,i,x,W,V\n";
  for (const auto& snap : report.trajectory) {
    for (std::size_t i = 0; i < snap.W.size(); ++i) {
      os << snap.step << ',' << csv_number(snap.time) << ',' << i << ',' << csv_number(snap.W.grid.node(i)) << ','
         << csv_number(snap.W[i]) << ',' << csv_number(snap.V[i]) << '\n';
    }
  }
}

}  // namespace

int cmd_run(const RunConfig& config, const fs::path& out, std::ostream& log) {
  echo_config(config, out, log);
  const TestCase& tc = config.test;
  SimulationConfig sim = tc.config;
  sim.record = config.output.trajectory ? RecordMode::trajectory : RecordMode::final_only;
  sim.track_error = tc.problem.has_exact();
  RunReport report;
  try {
    report = run_simulation(tc.problem, tc.grid, sim);
  } catch (const DivergedError& ex) {
    log << "error: run diverged at step " << ex.step() << ": " << ex.what() << '\n';
    return 2;
  }
  {
    std::ofstream os = open_csv(out, "field.csv");
    write_final_field_csv(os, report);
  }
  {
    std::ofstream os = open_csv(out, "series.csv");
    write_series_csv(os, report, tc.grid);
  }
  if (!report.error_W.empty()) {
    std::ofstream os = open_csv(out, "error_series.csv");
    os << "step,time,E1_W\n";
    for (std::size_t n = 0; n < report.error_W.size(); ++n) {
      os << n << ',' << csv_number(tc.grid.time(n)) << ',' << csv_number(report.error_W[n]) << '\n';
    }
  }
  if (config.output.trajectory) {
    std::ofstream os = open_csv(out, "trajectory.csv");
    write_trajectory_csv(os, report);
  }
  if (config.output.particles && report.particles) {
    std::ofstream os = open_csv(out, "particles.csv");
    write_particles_csv(os, tc.grid.n_steps, *report.particles, true);
  }
  if (report.stability_warning) log << "warning: Courant number exceeds the stability limit of a scheme\n";
  if (report.exact) {
    log << "E1_W = " << csv_number(l1_error(report.W, *report.exact)) << '\n';
    log << "E1_V = " << csv_number(l1_error(report.V, *report.exact)) << '\n';
  }
  log << "mass_W = " << csv_number(report.mass_W.back()) << "\nmass_V = " << csv_number(report.mass_V.back())
      << '\n';
  return 0;
}

int cmd_sweep(const RunConfig& config, const fs::path& out, std::size_t threads, std::ostream& log) {
  echo_config(config, out, log);
  const SweepSettings& s = config.sweep;
  const Lattice lattice = s.lattice == SweepLattice::full_2d ? lattice_2d(s.step)
                                                             : lattice_1d(s.lambda_lo, s.lambda_hi, s.step, s.mu);
  const SweepResult result = parameter_sweep(config.test, lattice, threads);
  std::ofstream os = open_csv(out, "sweep.csv");
  write_sweep_csv(os, result);
  const SweepPoint& best = result.points[result.argmin_W];
  log << "E1_ref = " << csv_number(result.e_ref) << '\n'
      << "argmin_W: lambda = " << csv_number(best.lambda) << ", mu = " << csv_number(best.mu)
      << ", E1_W = " << csv_number(best.e1_W) << '\n';
  return 0;
}

int cmd_estimate(const RunConfig& config, const fs::path& out, std::size_t threads, std::ostream& log) {
  echo_config(config, out, log);
  const TestCase& tc = config.test;
  const CouplingEstimate est =
      estimate_coupling(tc.problem, tc.config, tc.grid, config.richardson.s, config.richardson.search, threads);
  std::ofstream os = open_csv(out, "surface.csv");
  write_surface_csv(os, est);
  log << "lambda_R = " << csv_number(est.lambda) << "\nmu_R = " << csv_number(est.mu)
      << "\ndelta_R_W = " << csv_number(est.delta_W) << '\n';
  if (tc.problem.has_exact()) {
    const Evaluation e = evaluate(tc, est.lambda, est.mu);
    log << "E1_W(lambda_R, mu_R) = " << csv_number(e.e_W) << '\n';
  }
  return 0;
}

int cmd_bench(const std::string& id, const fs::path& out, std::size_t threads, std::ostream& log) {
  std::vector<std::string> ids;
  if (id == "all") {
    ids = test_ids();
  } else {
    make_test_case(id);  // throws UnknownTest before any work starts
    ids.push_back(id);
  }
  bool ok = true;
  for (const std::string& t : ids) {
    const TestReport report = run_benchmark(t, threads);
    std::ofstream os = open_csv(out, "bench_" + t + ".csv");
    write_report_csv(os, report);
    log << "== " << t << (report.passed() ? "  PASS" : "  FAIL") << '\n';
    for (const auto& row : report.rows) {
      log << "  " << row.quantity << " = " << csv_number(row.computed_value);
      if (row.published_value) log << "  (published " << csv_number(*row.published_value) << ")";
      if (row.checked) log << (row.pass ? "  ok" : "  FAILED");
      log << '\n';
    }
    ok = ok && report.passed();
  }
  return ok ? 0 : 1;
}

}  // namespace blendsolve::cli
