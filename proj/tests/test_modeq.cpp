#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "gpme/grid.hpp"
#include "gpme/modeq.hpp"

using namespace gpme;

TEST_SUITE("modeq") {

TEST_CASE("harmonic shifts reproduce the simplified m=2 and m=3 forms") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> dist(1e-6, 2.0);
  const double dx = 0.02, dt = 2.5e-5;
  const auto m2 = CoefficientModel::pme(2.0);
  const auto m3 = CoefficientModel::pme(3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double p = dist(rng);
    const auto c2 = modified_equation_coefficients(m2, p, dt, dx, AveragingRule::Harmonic);
    CHECK(c2.b == doctest::Approx(-1.5 * dx * dx).epsilon(1e-12));
    CHECK(std::abs(c2.f) <= 1e-12 * dx * dx);

    const auto c3 = modified_equation_coefficients(m3, p, dt, dx, AveragingRule::Harmonic);
    CHECK(c3.b == doctest::Approx(-2.25 * dx * dx * p).epsilon(1e-12));
    CHECK(c3.f == doctest::Approx(-1.25 * dx * dx).epsilon(1e-12));

    const auto bf2 = mhm_term_coefficients(m2, p, dx);
    CHECK(bf2.b_h == doctest::Approx(c2.b).epsilon(1e-14));
    const auto bf3 = mhm_term_coefficients(m3, p, dx);
    CHECK(bf3.f_h == doctest::Approx(c3.f).epsilon(1e-14));
  }
}

TEST_CASE("m=1 closed forms") {
  const double dx = 0.05, dt = 1e-4;
  for (double p : {0.2, 0.7, 1.9}) {
    const auto c =
        modified_equation_coefficients(CoefficientModel::pme(1.0), p, dt, dx, AveragingRule::Harmonic);
    CHECK(c.e == 0.0);
    CHECK(c.a == doctest::Approx(-3.5 * dt).epsilon(1e-14));
    CHECK(c.delta_b_harmonic == doctest::Approx(-0.75 * dx * dx / p).epsilon(1e-13));
    CHECK(c.delta_f_harmonic == doctest::Approx(0.25 * dx * dx / (p * p)).epsilon(1e-13));
    CHECK(c.b == doctest::Approx(c.delta_b_harmonic));  // b vanishes for k = p
    CHECK(c.g == doctest::Approx(p * (-0.5 * p * dt + dx * dx / 12.0)).epsilon(1e-13));
  }
}

TEST_CASE("only b and f depend on the averaging rule") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(0.05, 2.0);
  for (const auto& model : {CoefficientModel::pme(3.0), CoefficientModel::pme(1.405),
                            CoefficientModel::superslow()}) {
    for (int trial = 0; trial < 50; ++trial) {
      const double p = dist(rng);
      const auto arith =
          modified_equation_coefficients(model, p, 1e-4, 0.01, AveragingRule::Arithmetic);
      const auto harm =
          modified_equation_coefficients(model, p, 1e-4, 0.01, AveragingRule::Harmonic);
      CHECK(arith.a == harm.a);
      CHECK(arith.c == harm.c);
      CHECK(arith.d == harm.d);
      CHECK(arith.e == harm.e);
      CHECK(arith.g == harm.g);
      CHECK(harm.b == doctest::Approx(arith.b + arith.delta_b_harmonic).epsilon(1e-14));
      CHECK(harm.f == doctest::Approx(arith.f + arith.delta_f_harmonic).epsilon(1e-14));
    }
  }
}

TEST_CASE("the harmonic b-shift is anti-diffusive for positive k") {
  for (const auto& model : {CoefficientModel::pme(1.0), CoefficientModel::pme(2.0),
                            CoefficientModel::pme(3.0), CoefficientModel::superslow()}) {
    for (double p = 0.05; p <= 2.0; p += 0.05) {
      const auto c = modified_equation_coefficients(model, p, 1e-4, 0.01, AveragingRule::Harmonic);
      CHECK(c.delta_b_harmonic < 0.0);
    }
  }
}

TEST_CASE("superslow underflow keeps the shifts finite") {
  // exp(-1/p) underflows to zero near p = 1e-3; the shift ratios continue by 0
  const auto c = modified_equation_coefficients(CoefficientModel::superslow(), 1e-4, 1e-4, 0.01,
                                                AveragingRule::Harmonic);
  CHECK(std::isfinite(c.b));
  CHECK(std::isfinite(c.f));
  CHECK(c.delta_b_harmonic == 0.0);
  CHECK(c.delta_f_harmonic == 0.0);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(
      modified_equation_coefficients(CoefficientModel::pme(2.0), 0.0, 1e-4, 0.01,
                                     AveragingRule::Harmonic),
      std::domain_error);
  CHECK_THROWS_AS(mhm_term_coefficients(CoefficientModel::pme(2.0), -1.0, 0.01),
                  std::domain_error);
}

TEST_CASE("oscillation predictor") {
  SUBCASE("constant field has effective diffusion k(c) and no violations") {
    Field f;
    f.values.assign(21, 0.6);
    const auto report = oscillation_predictor(f, CoefficientModel::pme(3.0), 1e-4, 0.05);
    CHECK(report.violating_nodes.empty());
    CHECK(report.min_effective_diffusion == doctest::Approx(0.216).epsilon(1e-13));
  }
  SUBCASE("a sharp drop at small k flags nodes") {
    // steep gradient into a near-degenerate state: anti-diffusion wins
    Field f;
    f.values.assign(21, 1.0);
    for (int i = 10; i <= 20; ++i) f.values[i] = 1e-3;
    const auto report = oscillation_predictor(f, CoefficientModel::pme(3.0), 2.5e-5, 0.05);
    CHECK(report.violating_nodes.size() >= 1);
    CHECK(report.min_effective_diffusion < 0.0);
  }
}

}  // TEST_SUITE
