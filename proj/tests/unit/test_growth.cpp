#include <doctest.h>

#include <cmath>

#include "zk/bourgain.hpp"
#include "zk/error.hpp"
#include "zk/growth.hpp"

using namespace zk;

namespace {
GridPtr grid() { return make_grid(64, 64, 16 * M_PI, 16 * M_PI); }

RealField2D data(std::uint64_t seed, double amp) {
  RealField2D u = band_limit(random_smooth_field(grid(), seed, 1.0));
  u.values_mut() *= amp;
  return u;
}
}  // namespace

TEST_CASE("local theory parameters") {
  LocalTheoryParams p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.b() == doctest::Approx(0.5 + 1.0 / 24));
  CHECK(p.bprime() == doctest::Approx(2 * p.b() - 1.5));
  CHECK(p.eps() == doctest::Approx(p.rho / (p.s - 1)));
  p.rho = 0.4;
  CHECK_THROWS_AS(p.validate(), Error);
  p.rho = 0.2;
  p.s = 1;
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("existence time") {
  LocalTheoryParams p;
  CHECK(existence_time(1.0, p) == doctest::Approx(std::pow(8.0, -24.0)).epsilon(1e-12));
  CHECK(existence_time(0.01, p) == 1.0);
  CHECK_THROWS_AS(existence_time(0.0, p), Error);
}

TEST_CASE("I0 vanishes and the pairings add up to the direct derivative") {
  const RealField2D u = data(1, 2.0);
  for (int s : {2, 3}) {
    const IncrementReport r = increment_decomposition(u, s);
    CHECK(std::abs(r.I0) <= 1e-12 * r.scale);
    CHECK(r.total == doctest::Approx(r.hs_derivative).epsilon(1e-9));
  }
}

TEST_CASE("increment total matches a finite difference of the norm") {
  const RealField2D u = data(2, 2.0);
  const IncrementReport r = increment_decomposition(u, 2);
  SolverOptions o;
  const double h = 1e-3;
  Solver f(u, o), b(u, o);
  f.step_exact(h);
  b.step_exact(-h);
  const double fd = (hs_norm_sq(u.grid(), f.spectrum(), 2) - hs_norm_sq(u.grid(), b.spectrum(), 2)) / (2 * h);
  CHECK(r.total == doctest::Approx(fd).epsilon(1e-4));
}

TEST_CASE("unresolved data is refused") {
  const GridPtr g = grid();
  RealArray v(64, 64);
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) v(i, j) = std::cos(2 * M_PI * 30 * g->x(i) / g->box_length_x());
  const RealField2D u(g, v);
  CHECK_THROWS_AS(increment_decomposition(u, 2), Error);
}

TEST_CASE("growth envelope certifies a sample of parameters") {
  for (double K1 : {0.1, 10.0})
    for (double eps : {0.3, 0.9}) {
      const double d = 2.0 / eps;
      const GrowthEnvelope env = lemma13_constants(K1, eps, d);
      CHECK(env.N >= 1);
      CHECK(lemma13_verify(env, 20000));
    }
}

TEST_CASE("an envelope that is too small is caught") {
  GrowthEnvelope env = lemma13_constants(1.0, 0.5, 4.0);
  env.log_K2 = -5;
  const auto fail = lemma13_first_failure(env, 1000, 0);
  REQUIRE(fail.has_value());
  CHECK(*fail >= 0);
}

TEST_CASE("convexity step holds exactly when d >= 1") {
  CHECK(verify_convexity(1.0, 100000));
  CHECK(verify_convexity(3.7, 100000));
  CHECK_FALSE(verify_convexity(0.5, 10));
}

TEST_CASE("fit on a synthetic power law") {
  std::vector<GrowthSample> h;
  for (int k = 0; k <= 400; ++k) {
    const double t = 0.25 * k;
    h.push_back({t, std::pow(1 + t, 0.7)});
  }
  const GrowthFit f = fit_growth(h, default_beta_grid());
  CHECK(f.beta_best >= 0.7 - 1e-12);
  CHECK(f.beta_best < 0.8);
  CHECK(f.stabilized);
}

TEST_CASE("constant history selects the smallest beta") {
  std::vector<GrowthSample> h;
  for (int k = 0; k <= 100; ++k) h.push_back({double(k), 3.0});
  const auto grid = default_beta_grid();
  const GrowthFit f = fit_growth(h, grid);
  CHECK(f.beta_best == grid.front());
  CHECK(f.envelope_C == doctest::Approx(3.0 / 4.0));
}

TEST_CASE("short histories are refused") {
  std::vector<GrowthSample> h{{0.0, 1.0}, {1.0, 1.1}, {2.0, 1.2}};
  try {
    fit_growth(h, default_beta_grid());
    FAIL("expected InsufficientSpan");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InsufficientSpan);
  }
}

TEST_CASE("linear flow has no H^s increment") {
  SolverOptions o;
  o.nonlinear = false;
  const RealField2D u = data(4, 1.0);
  CHECK(window_increment(u, 2, 0.5, o, 10) < 1e-12 * std::pow(sobolev_norm(u, 2.0), 2));
}

TEST_CASE("amplification of small data") {
  LocalTheoryParams p;
  SolverOptions o;
  o.dt = 0.01;
  const RealField2D z(grid(), RealArray::Zero(64, 64));
  CHECK_FALSE(measure_amplification(z, p, o).has_value());
  const auto a = measure_amplification(data(5, 0.5), p, o, 0.25, 32);
  REQUIRE(a.has_value());
  CHECK(a->T == 0.25);
  CHECK(a->C_meas >= 1.0);
  CHECK(a->C_meas < 1.5);
  CHECK(a->tame_meas > 0);
}
