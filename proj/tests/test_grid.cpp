#include <cmath>

#include "doctest.h"
#include "gpme/errors.hpp"
#include "gpme/grid.hpp"

using namespace gpme;

TEST_SUITE("grid_state") {

TEST_CASE("uniform grid basics") {
  const Grid1D g = Grid1D::uniform(50);
  CHECK(g.n_nodes() == 51);
  CHECK(g.dx == doctest::Approx(0.02));
  CHECK(g.node(0) == 0.0);
  CHECK(g.node(50) == 1.0);
  CHECK(g.nearest_node(0.12) == 6);
  CHECK(g.node(6) == doctest::Approx(0.12).epsilon(1e-15));
  CHECK_THROWS_AS(Grid1D::uniform(3), ConfigError);
  CHECK_THROWS_AS(Grid1D::uniform(10, 1.0, 0.0), ConfigError);
}

TEST_CASE("nested grids share node coordinates exactly") {
  const Grid1D fine = Grid1D::uniform(3200);
  for (int n : {50, 100, 200, 400, 800, 1600}) {
    const Grid1D coarse = Grid1D::uniform(n);
    const int stride = coarse.stride_to(fine);
    CHECK(stride == 3200 / n);
    for (int i = 0; i <= n; ++i) {
      CHECK(coarse.node(i) == fine.node(i * stride));  // bitwise equality
    }
  }
  CHECK_THROWS_AS(Grid1D::uniform(300).stride_to(fine), std::invalid_argument);
}

TEST_CASE("tlp initial profile and boundary") {
  const ProblemSetup setup = make_tlp_problem(50);
  const Field f = build_initial(setup);
  CHECK(f.values.front() == 0.0);  // (3*0)^(1/3)
  CHECK(f.values.back() == doctest::Approx(1e-3));
  for (int i = 1; i < 50; ++i) CHECK(f.values[i] == doctest::Approx(1e-3));

  Field g = f;
  apply_bc(g, setup, 0.5);
  CHECK(g.values.front() == doctest::Approx(std::cbrt(1.5)).epsilon(1e-15));
  for (int i = 1; i < 50; ++i) CHECK(g.values[i] == f.values[i]);  // interior untouched
}

TEST_CASE("linear preset is the line through the boundary values") {
  const ProblemSetup setup = make_linear_problem(CoefficientModel::pme(3.0), 50, 2.0, 0.1);
  const Field f = build_initial(setup);
  for (int i = 0; i <= 50; ++i) {
    CHECK(f.values[i] == doctest::Approx(2.0 - 1.9 * setup.grid.node(i)).epsilon(1e-14));
  }
}

TEST_CASE("front preset matches boundary data and background") {
  const ProblemSetup setup = make_front_problem(CoefficientModel::pme(3.0), 50);
  const Field f = build_initial(setup);
  CHECK(f.values.front() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(f.values.back() == doctest::Approx(0.1).epsilon(1e-15));
  // excess above the background has compact support
  for (int i = 0; i <= 50; ++i) {
    if (setup.grid.node(i) >= setup.initial.front_support) {
      CHECK(f.values[i] == doctest::Approx(0.1));
    }
  }
  CHECK(f.values[1] > f.values[2]);  // steep near the left boundary
}

TEST_CASE("build_initial then apply_bc at t=0 is idempotent") {
  for (const auto& setup :
       {make_front_problem(CoefficientModel::pme(2.0), 64), make_tlp_problem(64),
        make_linear_problem(CoefficientModel::linear(), 64)}) {
    Field f = build_initial(setup);
    Field g = f;
    apply_bc(g, setup, 0.0);
    CHECK(g.values == f.values);
  }
}

TEST_CASE("preset inconsistent with boundary data is rejected") {
  ProblemSetup setup = make_front_problem(CoefficientModel::pme(3.0), 50);
  setup.bc_left = [](double) { return 1.5; };  // preset starts at 2.0
  CHECK_THROWS_AS(build_initial(setup), ConfigError);
}

}  // TEST_SUITE
