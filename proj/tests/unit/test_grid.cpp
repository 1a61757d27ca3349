#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "zk/error.hpp"
#include "zk/grid.hpp"
#include "zk/snapshot.hpp"

using namespace zk;

namespace {
RealField2D fill(const GridPtr& g, auto f) {
  RealArray v(g->nx(), g->ny());
  for (int i = 0; i < g->nx(); ++i)
    for (int j = 0; j < g->ny(); ++j) v(i, j) = f(g->x(i), g->y(j));
  return RealField2D(g, v);
}
}  // namespace

TEST_CASE("forward then inverse is the identity") {
  const GridPtr g = make_grid(32, 48, 10.0, 7.0);
  const RealField2D f = fill(g, [](double x, double y) { return std::sin(x) * std::cos(3 * y) + 0.1 * x * y; });
  RealArray back;
  g->inverse(f.spectrum(), back);
  CHECK((back - f.values()).abs().maxCoeff() < 1e-12);
}

TEST_CASE("Parseval: spectral L2 equals point quadrature") {
  const GridPtr g = make_grid(64, 32, 2 * M_PI, 4 * M_PI);
  const RealField2D f = fill(g, [](double x, double y) { return std::exp(std::sin(x) + 0.5 * std::cos(y)); });
  const double direct = f.values().square().sum() * g->dx() * g->dy();
  CHECK(spectral_l2_sq(*g, f.spectrum()) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("partial_x differentiates a trigonometric polynomial exactly") {
  const double L = 6 * M_PI;
  const GridPtr g = make_grid(48, 48, L, L);
  const double k = 2 * M_PI * 3 / L;
  const RealField2D f = fill(g, [k](double x, double y) { return std::sin(k * x) * std::cos(y / 3); });
  const RealField2D df = apply_multiplier(f, multipliers::partial_x(*g));
  const RealField2D want = fill(g, [k](double x, double y) { return k * std::cos(k * x) * std::cos(y / 3); });
  CHECK((df.values() - want.values()).abs().maxCoeff() < 1e-11);
}

TEST_CASE("Sobolev norm of a single mode") {
  const double L = 8 * M_PI;
  const GridPtr g = make_grid(32, 32, L, L);
  const double xi = 2 * M_PI * 2 / L, mu = 2 * M_PI * 5 / L;
  const RealField2D f = fill(g, [&](double x, double y) { return std::cos(xi * x + mu * y); });
  const double bracket = std::sqrt(1 + 3 * xi * xi + mu * mu);
  const double l2 = std::sqrt(0.5 * L * L);
  CHECK(l2_norm(f) == doctest::Approx(l2).epsilon(1e-12));
  CHECK(sobolev_norm(f, 2.0) == doctest::Approx(bracket * bracket * l2).epsilon(1e-12));
  CHECK(sobolev_norm(f, -1.0) == doctest::Approx(l2 / bracket).epsilon(1e-12));
}

TEST_CASE("negative powers of K(D) refuse data on the singular set") {
  const GridPtr g = make_grid(16, 16, 2 * M_PI, 2 * M_PI);
  const RealField2D c = fill(g, [](double, double) { return 1.0; });
  CHECK_THROWS_AS(apply_multiplier(c, multipliers::k_power(*g, -0.5)), Error);
  try {
    apply_multiplier(c, multipliers::k_power(*g, -0.5));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroModeSingularity);
  }
  const RealField2D s = fill(g, [](double x, double) { return std::sin(2 * x); });
  CHECK_NOTHROW(apply_multiplier(s, multipliers::k_power(*g, -0.5)));
}

TEST_CASE("hermitianize produces a real inverse and kills the Nyquist lines") {
  const GridPtr g = make_grid(16, 16, 1.0, 1.0);
  Spectrum s = Spectrum::Constant(16, 9, Complex(1.0, 2.0));
  hermitianize(*g, s);
  CHECK(std::imag(s(0, 0)) == 0.0);
  for (int r = 1; r < 16; ++r) CHECK(s(r, 0) == std::conj(s(16 - r, 0)));
  for (int c = 0; c < 9; ++c) CHECK(s(8, c) == Complex(0.0));
  for (int r = 0; r < 16; ++r) CHECK(s(r, 8) == Complex(0.0));
  RealArray v;
  g->inverse(s, v);
  Spectrum back;
  g->forward(v, back);
  CHECK((back - s).abs().maxCoeff() < 1e-12);
}

TEST_CASE("dealias keeps exactly the 2/3 band") {
  const GridPtr g = make_grid(12, 12, 1.0, 1.0);
  Spectrum s = Spectrum::Ones(12, 7);
  dealias(*g, s);
  for (int r = 0; r < 12; ++r)
    for (int c = 0; c < 7; ++c) {
      const bool keep = 3 * std::abs(g->kx_index(r)) < 12 && 3 * c < 12;
      CHECK((s(r, c) != Complex(0.0)) == keep);
    }
  CHECK(energy_outside_band(*g, s) == 0.0);
}

TEST_CASE("snapshot round trip is bitwise") {
  const GridPtr g = make_grid(8, 10, 3.0, 2.0);
  const RealField2D f = fill(g, [](double x, double y) { return x - 2 * y + 1e-300; });
  const auto path = (std::filesystem::temp_directory_path() / "zk_snapshot_test.zk2d").string();
  write_snapshot(path, f);
  const RealField2D r = read_snapshot(path);
  CHECK(r.grid().nx() == 8);
  CHECK(r.grid().ny() == 10);
  CHECK(r.grid().box_length_x() == 3.0);
  CHECK((r.values() == f.values()).all());
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_snapshot(path), Error);
}
