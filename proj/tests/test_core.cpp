#include <doctest.h>

#include <cmath>

#include "blendsolve/core.hpp"

using namespace blendsolve;

namespace {

// Midpoint rule on a much finer mesh, used as an independent integral oracle.
double fine_integral(const ScalarMap& g, double a, double b, std::size_t n) {
  const double h = (b - a) / static_cast<double>(n);
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += g(a + (static_cast<double>(k) + 0.5) * h);
  return s * h;
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

}  // namespace

TEST_CASE("grid spacing follows the cell-centred convention") {
  const Grid1D g = build_grid(0.0, 20.0, 1200, 2.3, 3000);
  CHECK(g.dx == doctest::Approx(20.0 / 1199.0).epsilon(1e-15));
  CHECK(g.dt == doctest::Approx(2.3 / 3000.0).epsilon(1e-15));
  CHECK(g.dx == doctest::Approx(0.016681).epsilon(1e-4));
  CHECK(g.node(0) == 0.0);
  CHECK(g.node(1199) == doctest::Approx(20.0).epsilon(1e-14));
  CHECK(g.face(0) == doctest::Approx(-0.5 * g.dx));
  CHECK(g.left_edge() == doctest::Approx(-0.5 * g.dx));

  const Grid1D g4 = build_grid(-0.2, 7.0, 100, 4.0, 200);
  CHECK(g4.dx == doctest::Approx(7.2 / 99.0));
  CHECK(g4.dt == doctest::Approx(0.02));
}

TEST_CASE("degenerate grids are rejected") {
  CHECK_THROWS_AS(build_grid(0.0, 1.0, 2, 1.0, 1), InvalidGrid);
  CHECK_THROWS_AS(build_grid(1.0, 1.0, 10, 1.0, 1), InvalidGrid);
  CHECK_THROWS_AS(build_grid(0.0, 1.0, 10, 1.0, 0), InvalidGrid);
  CHECK_THROWS_AS(build_grid(0.0, 1.0, 10, 0.0, 5), InvalidGrid);
  CHECK_THROWS_AS(build_grid(0.0, std::nan(""), 10, 1.0, 5), InvalidGrid);
}

TEST_CASE("cells are half open") {
  const Grid1D g = build_grid(0.0, 1.0, 11, 1.0, 1);
  CHECK(g.cell_of(0.0) == 0);
  CHECK(g.cell_of(0.05) == 1);  // right edge of cell 0 belongs to cell 1
  CHECK(g.cell_of(0.0499) == 0);
  CHECK(g.cell_of(-0.06) == -1);
  CHECK(g.cell_of(1.05) == 11);
}

TEST_CASE("published Courant numbers are reproduced after rounding") {
  auto unit = [](double) { return 0.0; };
  const Problem a20 = Problem::advection([](double x) { return x; }, 20.0, unit);
  CHECK(courant_number(build_grid(0.0, 20.0, 1200, 2.3, 3000), a20) == doctest::Approx(0.9194).epsilon(1e-3));
  CHECK(round2(courant_number(build_grid(0.0, 20.0, 1200, 2.3, 3000), a20)) == doctest::Approx(0.92));
  const Problem one = Problem::constant_advection(1.0, unit);
  CHECK(courant_number(build_grid(-0.2, 7.0, 100, 4.0, 200), one) == doctest::Approx(0.275).epsilon(1e-3));
  CHECK(round2(courant_number(build_grid(-0.2, 7.0, 100, 4.0, 200), one)) == doctest::Approx(0.28));
  // Test 3 prints 0.96; this convention gives 0.95.
  CHECK(round2(courant_number(build_grid(0.0, M_PI, 600, 1.0, 200), one)) == doctest::Approx(0.95));
  // Example 2: 0.1869 with this convention.
  CHECK(courant_number(build_grid(0.0, 20.0, 300, 10.0, 800), one) == doctest::Approx(0.1869).epsilon(1e-3));
  // dt = dx and unit speed.
  CHECK(courant_number(build_grid(0.0, 1.0, 11, 1.0, 10), one) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("projection of constants and linear data") {
  const Grid1D g = build_grid(0.0, 2.0, 21, 1.0, 1);
  const CellField c = project_function([](double) { return 3.5; }, g);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(c[i] == doctest::Approx(3.5).epsilon(1e-14));
  const CellField lin = project_function([](double x) { return x; }, g);
  for (std::size_t i = 0; i < lin.size(); ++i) CHECK(lin[i] == doctest::Approx(g.node(i)).epsilon(1e-13));
  const CellField cubic = project_function([](double x) { return x * x * x; }, g, 2);
  // cell average of x^3 over [a, b] = (b^4 - a^4) / (4 (b - a))
  for (std::size_t i = 0; i < cubic.size(); ++i) {
    const double a = g.node(i) - 0.5 * g.dx, b = g.node(i) + 0.5 * g.dx;
    CHECK(cubic[i] == doctest::Approx((b * b * b * b - a * a * a * a) / (4.0 * g.dx)).epsilon(1e-12));
  }
}

TEST_CASE("projection rejects odd or zero subinterval counts") {
  const Grid1D g = build_grid(0.0, 1.0, 5, 1.0, 1);
  auto f = [](double x) { return x; };
  CHECK_THROWS_AS(project_function(f, g, 0), std::invalid_argument);
  CHECK_THROWS_AS(project_function(f, g, 3), std::invalid_argument);
  CHECK_NOTHROW(project_function(f, g, 4));
}

TEST_CASE("mass of a projected indicator") {
  const Grid1D g = build_grid(0.0, 20.0, 1200, 2.3, 3000);
  auto chi = [](double x) { return (x >= 0.5 && x <= 1.5) ? 1.0 : 0.0; };
  const double oracle = fine_integral(chi, g.left_edge(), g.right_edge(), 1200 * 100);
  CHECK(oracle == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(std::abs(total_mass(project_function(chi, g)) - oracle) <= 2.0 * g.dx);
}

TEST_CASE("total mass sums cell values times dx") {
  const Grid1D g = build_grid(0.0, 20.0, 1200, 1.0, 1);
  CHECK(total_mass(CellField::zeros(g)) == 0.0);
  CellField ones = CellField::zeros(g);
  for (auto& v : ones.values) v = 1.0;
  CHECK(total_mass(ones) == doctest::Approx(1200.0 * 20.0 / 1199.0).epsilon(1e-13));
  CHECK(total_mass(ones) == doctest::Approx(20.0167).epsilon(1e-5));
}

TEST_CASE("projection is linear") {
  const Grid1D g = build_grid(-1.0, 3.0, 57, 1.0, 1);
  auto p = [](double x) { return std::sin(3.0 * x); };
  auto q = [](double x) { return x > 0.7 ? std::exp(-x) : 0.25; };
  const double a = 1.7, b = -0.4;
  const CellField lhs = project_function([&](double x) { return a * p(x) + b * q(x); }, g);
  const CellField fp = project_function(p, g), fq = project_function(q, g);
  for (std::size_t i = 0; i < g.n_cells; ++i) CHECK(std::abs(lhs[i] - (a * fp[i] + b * fq[i])) <= 1e-13);
}

TEST_CASE("projected mass matches a fine oracle within 2 dx TV") {
  const Grid1D g = build_grid(0.0, 4.0, 81, 1.0, 1);
  // piecewise smooth, TV = 1 + 2 (jump and a monotone ramp of height 1 up and down)
  auto h = [](double x) {
    if (x < 1.0) return 0.0;
    if (x < 2.0) return 1.0;
    if (x < 3.0) return 3.0 - x;
    return 0.0;
  };
  const double tv = 2.0;
  const double oracle = fine_integral(h, g.left_edge(), g.right_edge(), g.n_cells * 100);
  CHECK(std::abs(total_mass(project_function(h, g)) - oracle) <= 2.0 * g.dx * tv);
}

TEST_CASE("ghost rules") {
  const std::vector<double> v{1.0, 2.0, 3.0};
  const BoundaryPolicy zl{GhostRule::zero_value, GhostRule::copy_nearest};
  CHECK(ghost_access(v, -1, zl) == 0.0);
  CHECK(ghost_access(v, -5, zl) == 0.0);
  CHECK(ghost_access(v, 1, zl) == 2.0);
  CHECK(ghost_access(v, 3, zl) == 3.0);
  CHECK(ghost_access(v, 9, zl) == 3.0);
  const BoundaryPolicy cz{GhostRule::copy_nearest, GhostRule::zero_value};
  CHECK(ghost_access(v, -2, cz) == 1.0);
  CHECK(ghost_access(v, 4, cz) == 0.0);
  const std::vector<double> padded = with_ghosts(v, 2, zl);
  CHECK(padded == std::vector<double>{0.0, 0.0, 1.0, 2.0, 3.0, 3.0, 3.0});
}

TEST_CASE("sampling rules") {
  const Grid1D g = build_grid(0.0, 1.0, 11, 1.0, 1);
  auto sq = [](double x) { return x * x; };
  const CellField pts = discretize(sq, g, Sampling::pointwise);
  const CellField avg = discretize(sq, g, Sampling::cell_average);
  CHECK(pts[3] == doctest::Approx(0.09));
  CHECK(avg[3] == doctest::Approx(0.09 + g.dx * g.dx / 12.0));
  CHECK(parse_sampling("pointwise") == Sampling::pointwise);
  CHECK(parse_sampling(to_string(Sampling::cell_average)) == Sampling::cell_average);
  CHECK_THROWS_AS(parse_sampling("nearest"), std::invalid_argument);
}

TEST_CASE("problem validation and the guarded particle speed") {
  auto u0 = [](double) { return 0.0; };
  CHECK_THROWS_AS(Problem::constant_advection(1.0, u0).speed_of_density(0.3), std::invalid_argument);
  Problem bad = Problem::constant_advection(1.0, u0);
  bad.speed_bound = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  const Problem quotient = Problem::conservation_law([](double u) { return u * (1.0 - u); }, 1.0, u0);
  CHECK(quotient.speed_of_density(0.5) == doctest::Approx(0.5));
  CHECK(quotient.speed_of_density(0.0) == doctest::Approx(1.0).epsilon(1e-8));  // f'(0)
  const Problem linear = Problem::conservation_law([](double u) { return u; }, 1.0, u0);
  CHECK(linear.speed_of_density(0.37) == doctest::Approx(1.0));
  CHECK(linear.speed_of_density(0.0) == doctest::Approx(1.0));
}

TEST_CASE("exact field needs an exact solution") {
  const Grid1D g = build_grid(0.0, 1.0, 11, 1.0, 1);
  const Problem p = Problem::constant_advection(1.0, [](double x) { return x; });
  CHECK_THROWS_AS(exact_field(p, g, 0.5, Sampling::pointwise), std::invalid_argument);
  const Problem q = Problem::constant_advection(1.0, [](double x) { return x; },
                                                [](double x, double t) { return x - t; });
  CHECK(exact_field(q, g, 0.5, Sampling::pointwise)[10] == doctest::Approx(0.5));
}
