#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "blendsolve/bench.hpp"

using namespace blendsolve;

namespace {

// Centered-difference residual of u_t + (A u)_x at (x, t).
double advection_residual(const Problem& p, double x, double t, double h) {
  const auto& u = p.exact_solution;
  const double ut = (u(x, t + h) - u(x, t - h)) / (2.0 * h);
  const double flux_x = (p.velocity(x + h) * u(x + h, t) - p.velocity(x - h) * u(x - h, t)) / (2.0 * h);
  return ut + flux_x;
}

double law_residual(const Problem& p, double x, double t, double h) {
  const auto& u = p.exact_solution;
  const double ut = (u(x, t + h) - u(x, t - h)) / (2.0 * h);
  const double fx = (p.flux(u(x + h, t)) - p.flux(u(x - h, t))) / (2.0 * h);
  return ut + fx;
}

}  // namespace

TEST_CASE("test ids") {
  for (const std::string& id : test_ids()) CHECK_NOTHROW(make_test_case(id));
  CHECK_THROWS_AS(make_test_case("9"), UnknownTest);
  CHECK_THROWS_AS(make_test_case(""), UnknownTest);
}

TEST_CASE("benchmark grids") {
  const TestCase t1 = make_test_case("1");
  CHECK(t1.grid.n_cells == 1200);
  CHECK(t1.grid.n_steps == 3000);
  CHECK(courant_number(t1.grid, t1.problem) == doctest::Approx(0.92).epsilon(1e-3));
  const TestCase t2 = make_test_case("2");
  CHECK(t2.config.mode == CouplingMode::multiscale);
  CHECK(t2.config.n_particles == 6000);
  const TestCase t4 = make_test_case("4");
  CHECK(t4.problem.kind == ProblemKind::conservation_law);
}

TEST_CASE("l1 error") {
  const Grid1D g = build_grid(0.0, 1.0, 11, 1.0, 10);
  CellField a = CellField::zeros(g);
  CHECK(l1_error(a, a) == 0.0);
  CellField b = a;
  b[3] = 2.0;
  b[7] = -1.0;
  CHECK(l1_error(b, a) == doctest::Approx(3.0 * g.dx));
  CHECK_THROWS_AS(l1_error(a, CellField::zeros(build_grid(0.0, 1.0, 12, 1.0, 10))), std::invalid_argument);
}

TEST_CASE("lattices") {
  CHECK(lattice_2d(0.05).size() == 21 * 21);
  CHECK(lattice_2d(1.0).size() == 4);
  CHECK(lattice_2d(0.3).size() == 16);
  CHECK_THROWS_AS(lattice_2d(0.0), std::invalid_argument);
  const Lattice l = lattice_1d(0.95, 1.0, 0.002, 1.0);
  CHECK(l.size() == 26);
  CHECK(l.back().first == doctest::Approx(1.0));
  for (const auto& p : l) CHECK(p.second == 1.0);
  CHECK_THROWS_AS(lattice_1d(0.0, 1.0, -0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(lattice_1d(0.6, 0.5, 0.1, 1.0), std::invalid_argument);
}

TEST_CASE("sweep basics") {
  const TestCase tc = make_test_case("example1");
  const SweepResult one = parameter_sweep(tc, Lattice{{1.0, 1.0}});
  REQUIRE(one.points.size() == 1);
  CHECK_FALSE(one.points[0].in_phi_W);
  CHECK_FALSE(one.points[0].in_phi_V);
  CHECK(one.e_ref == reference_error(tc));
  CHECK_THROWS_AS(parameter_sweep(tc, Lattice{}), std::invalid_argument);

  const SweepResult sweep = parameter_sweep(tc, lattice_1d(0.0, 1.0, 0.25, 0.5), 3);
  for (const SweepPoint& p : sweep.points) {
    CHECK(p.in_phi_W == (p.e1_W < sweep.e_ref));
    CHECK(p.in_phi_V == (p.e1_V < sweep.e_ref));
    CHECK(sweep.points[sweep.argmin_W].e1_W <= p.e1_W);
  }
  std::ostringstream os;
  write_sweep_csv(os, sweep);
  CHECK(os.str().rfind("lambda,mu,E1_W,E1_V,in_Phi_W,in_Phi_V\n", 0) == 0);
}

TEST_CASE("reference error of identical schemes") {
  TestCase tc = make_test_case("example1");
  tc.config.s2 = tc.config.s1;
  const Evaluation e = evaluate(tc, 1.0, 1.0);
  CHECK(e.e_W == e.e_V);
  CHECK(reference_error(tc) == e.e_W);
}

TEST_CASE("refinement equivalence at the base error") {
  const TestCase tc = make_test_case("example1");
  const double base = evaluate(tc, 1.0, 1.0).e_W;
  const RefinementResult r = refinement_equivalence(tc, tc.config.s1, base);
  CHECK(r.factor == 1.0);
  CHECK(r.n_cells == tc.grid.n_cells);
  CHECK_THROWS(refinement_equivalence(tc, tc.config.s1, base * 1e-6, 400));
}

TEST_CASE("raised cosine has unit mass") {
  const Problem p = raised_cosine_problem();
  const Grid1D g = build_grid(0.0, 20.0, 300, 10.0, 800);
  CHECK(total_mass(project_function(p.initial_datum, g)) == doctest::Approx(1.0).epsilon(1e-6));
  const Grid1D fine = build_grid(0.0, 20.0, 20001, 10.0, 800);
  CHECK(total_mass(project_function(p.initial_datum, fine)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("exact solutions satisfy their equations") {
  const double h = 1e-4;
  const Problem ramp = linear_ramp_problem();
  for (double t : {0.3, 1.0, 2.0}) {
    for (double x : {0.2, 1.2, 2.0, 3.5, 7.0}) {
      const double xe = x * std::exp(-t);
      if (std::abs(xe - 0.5) < 1e-2 || std::abs(xe - 1.5) < 1e-2) continue;
      CHECK(std::abs(advection_residual(ramp, x, t, h)) <= 1e-4);
    }
  }
  const Problem sine = sine_velocity_problem();
  for (double t : {0.2, 0.5, 1.0}) {
    for (double x : {0.3, 0.9, 1.5, 2.2, 2.9}) CHECK(std::abs(advection_residual(sine, x, t, h)) <= 1e-4);
  }
  const Problem lwr = lwr_problem();
  for (double t : {1.0, 3.0, 4.0}) {
    for (double x : {1.9, 2.5, 3.1, 4.6}) {
      if (x > 2.0 + t) continue;
      CHECK(std::abs(law_residual(lwr, x, t, h)) <= 1e-4);
    }
  }
  // Final profile: -x/8 + 3/4 on [2, 6], 0 elsewhere.
  for (double x : {0.5, 2.5, 4.0, 5.9, 6.5}) {
    const double expected = (x >= 2.0 && x <= 6.0) ? -x / 8.0 + 0.75 : 0.0;
    CHECK(lwr.exact_solution(x, 4.0) == doctest::Approx(expected).epsilon(1e-12));
  }
  const Problem pulse = smooth_pulse_problem();
  CHECK(pulse.exact_solution(1.7, 0.7) == doctest::Approx(1.0));
}

TEST_CASE("report csv") {
  TestReport rep;
  rep.id = "x";
  rep.rows.push_back({"a", 1.0, 1.1, true, true});
  rep.rows.push_back({"b", std::nullopt, 2.0, true, false});
  rep.rows.push_back({"c", 2.0, 3.0, false, true});
  CHECK_FALSE(rep.passed());
  std::ostringstream os;
  write_report_csv(os, rep);
  const std::string s = os.str();
  CHECK(s.rfind("quantity,paper_value,computed_value,rel_diff,pass\n", 0) == 0);
  CHECK(s.find("b,,2,,info") != std::string::npos);
  CHECK(s.find(",false\n") != std::string::npos);
}

TEST_CASE("quick benchmark reports") {
  for (const char* id : {"example1", "example2", "3"}) {
    const TestReport rep = run_benchmark(id, 2);
    CHECK_MESSAGE(rep.passed(), id);
    CHECK_FALSE(rep.rows.empty());
  }
  CHECK_THROWS_AS(run_benchmark("nope"), UnknownTest);
}
