#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "gpme/errors.hpp"
#include "gpme/flux.hpp"
#include "gpme/modeq.hpp"

using namespace gpme;

namespace {

Field field_from(const Grid1D& g, double (*f)(double)) {
  Field out;
  out.values.resize(g.n_nodes());
  for (int i = 0; i <= g.n_intervals; ++i) out.values[i] = f(g.node(i));
  return out;
}

}  // namespace

TEST_SUITE("flux") {

TEST_CASE("face averages") {
  CHECK(face_average(AveragingRule::Arithmetic, 1.0, 3.0) == 2.0);
  CHECK(face_average(AveragingRule::Harmonic, 0.7, 0.7) == doctest::Approx(0.7));
  CHECK(face_average(AveragingRule::Harmonic, 0.0, 5.0) == 0.0);
  CHECK(face_average(AveragingRule::Harmonic, 5.0, 0.0) == 0.0);
  // a tiny coefficient dominates the harmonic mean but not the arithmetic one
  CHECK(face_average(AveragingRule::Harmonic, 1.0, 1e-6) == doctest::Approx(2e-6).epsilon(1e-5));
  CHECK(face_average(AveragingRule::Arithmetic, 1.0, 1e-6) == doctest::Approx(0.5).epsilon(1e-5));
  CHECK_THROWS_AS(face_average(AveragingRule::Harmonic, -0.1, 1.0), std::domain_error);
  CHECK_THROWS_AS(face_average(AveragingRule::Arithmetic, 1.0, -2.0), std::domain_error);
}

TEST_CASE("harmonic <= geometric <= arithmetic, equality iff equal") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(0.0, 10.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double a = dist(rng), b = dist(rng);
    const double h = face_average(AveragingRule::Harmonic, a, b);
    const double g = std::sqrt(a * b);
    const double ar = face_average(AveragingRule::Arithmetic, a, b);
    CHECK(h <= g + 1e-15 * g);
    CHECK(g <= ar + 1e-15 * ar);
    if (a != b) CHECK(h < ar);
  }
  const double k = 1.37;
  CHECK(face_average(AveragingRule::Harmonic, k, k) == doctest::Approx(k).epsilon(1e-15));
  CHECK(face_average(AveragingRule::Arithmetic, k, k) == k);
}

TEST_CASE("face velocity") {
  CHECK(face_velocity(1.0, 1.0, 0.1) == 0.0);
  CHECK(face_velocity(1.0, 0.5, 0.1) == doctest::Approx(5.0));
  CHECK(face_velocity(0.5, 1.0, 0.1) == doctest::Approx(-5.0));
}

TEST_CASE("spatial operator vanishes on constant fields") {
  const ProblemSetup setup = make_linear_problem(CoefficientModel::pme(3.0), 32, 0.7, 0.7);
  Field f;
  f.values.assign(33, 0.7);
  for (auto avg : {AveragingRule::Arithmetic, AveragingRule::Harmonic}) {
    SpatialOperatorConfig cfg;
    cfg.averaging = avg;
    const auto L = spatial_operator(f, setup, cfg);
    for (double v : L) CHECK(v == 0.0);
  }
}

TEST_CASE("flux difference of unit-coefficient faces is the exact second difference") {
  // With both face coefficients equal to 1, the flux difference over dx is the
  // central second difference, which is exact (= 2) on p(x) = x^2.
  const double dx = 0.05;
  for (double x : {0.3, 0.55}) {
    const double pm = (x - dx) * (x - dx), pc = x * x, pp = (x + dx) * (x + dx);
    const double k_face = face_average(AveragingRule::Harmonic, 1.0, 1.0);
    const double flux_right = k_face * face_velocity(pc, pp, dx);
    const double flux_left = k_face * face_velocity(pm, pc, dx);
    CHECK((flux_left - flux_right) / dx == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("spatial operator converges to (k p_x)_x on smooth data") {
  // k = p, p(x) = x^2 + 1 => (k p_x)_x = (p p_x)_x = 6x^2 + 2(x^2+1) ... computed below.
  auto p_of = [](double x) { return x * x + 1.0; };
  auto exact = [](double x) { return 6.0 * x * x + 2.0; };  // d/dx[(x^2+1)(2x)]
  double prev_err = 0.0;
  for (int n : {64, 128, 256}) {
    const ProblemSetup setup = make_linear_problem(CoefficientModel::linear(), n, 1.0, 2.0);
    Field f;
    f.values.resize(n + 1);
    for (int i = 0; i <= n; ++i) f.values[i] = p_of(setup.grid.node(i));
    SpatialOperatorConfig cfg;
    cfg.averaging = AveragingRule::Arithmetic;
    const auto L = spatial_operator(f, setup, cfg);
    double err = 0.0;
    for (int i = 1; i < n; ++i) err = std::max(err, std::abs(L[i] - exact(setup.grid.node(i))));
    if (prev_err > 0.0) CHECK(prev_err / err > 3.5);  // second order
    prev_err = err;
  }
}

TEST_CASE("interior flux differences telescope to the boundary fluxes") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(0.05, 2.0);
  const int n = 40;
  const ProblemSetup setup = make_linear_problem(CoefficientModel::pme(3.0), n, 1.0, 1.0);
  Field f;
  f.values.resize(n + 1);
  for (double& v : f.values) v = dist(rng);

  for (auto avg : {AveragingRule::Arithmetic, AveragingRule::Harmonic}) {
    SpatialOperatorConfig cfg;
    cfg.averaging = avg;
    const auto L = spatial_operator(f, setup, cfg);
    double sum = 0.0;
    for (int i = 1; i < n; ++i) sum += L[i];
    const auto k_at = [&](int i) { return setup.model.k(f.values[i]); };
    const double dx = setup.grid.dx;
    const double flux_first =
        face_average(avg, k_at(0), k_at(1)) * face_velocity(f.values[0], f.values[1], dx);
    const double flux_last =
        face_average(avg, k_at(n - 1), k_at(n)) * face_velocity(f.values[n - 1], f.values[n], dx);
    CHECK(dx * sum == doctest::Approx(flux_first - flux_last).epsilon(1e-12));
  }
}

TEST_CASE("mhm correction closed forms") {
  const double dx = 0.02;
  SUBCASE("constant state gives zero") {
    CHECK(mhm_correction(0.7, 0.7, 0.7, dx, CoefficientModel::pme(3.0)) == 0.0);
  }
  SUBCASE("m=2 reduces to (3 dx^2/2) px^2 pxx") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(0.05, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
      const double pm = dist(rng), pc = dist(rng), pp = dist(rng);
      const double grad = (pc - pm) / dx;
      const double curv = (pp - 2.0 * pc + pm) / (dx * dx);
      const double expected = 1.5 * dx * dx * grad * grad * curv;
      const double got = mhm_correction(pm, pc, pp, dx, CoefficientModel::pme(2.0));
      CHECK(got == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  SUBCASE("m=3 reduces to (dx^2/4)[9 p px^2 pxx + 5 px^4]") {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> dist(0.05, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
      const double pm = dist(rng), pc = dist(rng), pp = dist(rng);
      const double grad = (pc - pm) / dx;
      const double curv = (pp - 2.0 * pc + pm) / (dx * dx);
      const double expected =
          dx * dx / 4.0 * (9.0 * pc * grad * grad * curv + 5.0 * grad * grad * grad * grad);
      const double got = mhm_correction(pm, pc, pp, dx, CoefficientModel::pme(3.0));
      CHECK(got == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  SUBCASE("modes split the two terms") {
    const auto model = CoefficientModel::pme(3.0);
    const double full = mhm_correction(0.4, 0.3, 0.25, dx, model, MhmMode::Full);
    const double t1 = mhm_correction(0.4, 0.3, 0.25, dx, model, MhmMode::TermIOnly);
    const double t2 = mhm_correction(0.4, 0.3, 0.25, dx, model, MhmMode::TermIIOnly);
    CHECK(full == doctest::Approx(t1 + t2).epsilon(1e-14));
  }
}

TEST_CASE("mhm correction scales as dx^2 at fixed location") {
  // smooth positive profile with nonzero slope and curvature
  auto p_of = [](double x) { return 2.0 - x * x; };
  const auto model = CoefficientModel::pme(2.0);
  const double x = 0.4;
  double prev = 0.0;
  for (const double dx : {0.02, 0.01, 0.005}) {
    const double c = mhm_correction(p_of(x - dx), p_of(x), p_of(x + dx), dx, model);
    if (prev != 0.0) CHECK(prev / c == doctest::Approx(4.0).epsilon(0.05));
    prev = c;
  }
}

TEST_CASE("corrected harmonic operator approaches the arithmetic one on smooth data") {
  // p(x) = 2 - 1.9x with k = p: the correction cancels the harmonic-average
  // error terms, so the two operators agree to second order.
  double prev_err = 0.0;
  for (int n : {50, 100, 200, 400}) {
    const ProblemSetup setup = make_linear_problem(CoefficientModel::linear(), n, 2.0, 0.1);
    const Field f = build_initial(setup);
    SpatialOperatorConfig harm;
    harm.averaging = AveragingRule::Harmonic;
    harm.mhm = true;
    SpatialOperatorConfig arith;
    arith.averaging = AveragingRule::Arithmetic;
    const auto a = spatial_operator(f, setup, harm);
    const auto b = spatial_operator(f, setup, arith);
    double err = 0.0;
    for (int i = 1; i < n; ++i) err = std::max(err, std::abs(a[i] - b[i]));
    if (prev_err > 0.0) {
      const double rate = std::log2(prev_err / err);
      CHECK(rate > 1.9);
    }
    prev_err = err;
  }
}

TEST_CASE("truncation error of the face averages") {
  SUBCASE("constant profile: both zero") {
    const KProfile flat{[](double) { return 1.3; }, [](double) { return 0.0; },
                        [](double) { return 0.0; }};
    for (auto rule : {AveragingRule::Arithmetic, AveragingRule::Harmonic}) {
      const auto s = truncation_leading(rule, flat, 0.4, 0.05);
      CHECK(s.measured == 0.0);
      CHECK(s.predicted == 0.0);
    }
  }
  SUBCASE("linear profile: arithmetic mean of a line is its midpoint") {
    const KProfile lin{[](double x) { return 2.0 + 3.0 * x; }, [](double) { return 3.0; },
                       [](double) { return 0.0; }};
    const auto s = truncation_leading(AveragingRule::Arithmetic, lin, 0.4, 0.05);
    CHECK(s.measured == doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("measured minus predicted decays at fourth order") {
    const KProfile expk{[](double x) { return std::exp(x); }, [](double x) { return std::exp(x); },
                        [](double x) { return std::exp(x); }};
    for (auto rule : {AveragingRule::Arithmetic, AveragingRule::Harmonic}) {
      double prev = 0.0;
      for (double dx : {0.1, 0.05, 0.025}) {
        const auto s = truncation_leading(rule, expk, 0.0, dx);
        const double err = std::abs(s.measured - s.predicted);
        if (prev > 0.0) CHECK(std::log2(prev / err) > 3.9);
        prev = err;
      }
    }
  }
}

TEST_CASE("mhm requires the harmonic base scheme") {
  SpatialOperatorConfig cfg;
  cfg.averaging = AveragingRule::Arithmetic;
  cfg.mhm = true;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("non-finite flux reports the node") {
  const int n = 16;
  const ProblemSetup setup = make_linear_problem(CoefficientModel::linear(), n, 1.0, 1.0);
  Field f;
  f.values.assign(n + 1, 1.0);
  f.values[5] = std::numeric_limits<double>::quiet_NaN();
  SpatialOperatorConfig cfg;
  cfg.averaging = AveragingRule::Arithmetic;
  try {
    spatial_operator(f, setup, cfg);
    FAIL("expected NumericalError");
  } catch (const NumericalError& err) {
    CHECK(err.node() >= 4);
    CHECK(err.node() <= 6);
  }
}

}  // TEST_SUITE
