#include <doctest.h>

#include <cmath>

#include "zk/error.hpp"
#include "zk/lab.hpp"
#include "zk/rng.hpp"
#include "zk/symbols.hpp"

using namespace zk;
using namespace zk::lab;

namespace {
// Direct O(n^2) convolution of two sparse fields, independent of the column
// bookkeeping in convolve().
Complex brute_at(const LabField& a, const LabField& b, int i, int j, long m) {
  Complex sum = 0;
  for (const auto& ca : a.columns())
    for (std::size_t p = 0; p < ca.v.size(); ++p) {
      const Column* cb = b.find(i - ca.i, j - ca.j);
      if (!cb) continue;
      const long mb = m - (ca.m0 + long(p)) - cb->m0;
      if (mb < 0 || mb >= long(cb->v.size())) continue;
      sum += ca.v[p] * cb->v[std::size_t(mb)];
    }
  return sum * a.cell();
}
}  // namespace

TEST_CASE("resonance identity") {
  const double x1 = 0.3, y1 = -1.1, x2 = 2.0, y2 = 0.7;
  CHECK(resonance(x1, y1, x2, y2) == doctest::Approx(omega(x1 + x2, y1 + y2) - omega(x1, y1) - omega(x2, y2)));
  const double h = 1e-6;
  const double dmu = (resonance(x1, y1 + h, x2, y2 - h) - resonance(x1, y1 - h, x2, y2 + h)) / (2 * h);
  CHECK(dmu == doctest::Approx(resonance_dmu1(x1, y1, x2, y2)).epsilon(1e-6));
  const double dxi = (resonance(x1 + h, y1, x2 - h, y2) - resonance(x1 - h, y1, x2 + h, y2)) / (2 * h);
  CHECK(dxi == doctest::Approx(resonance_dxi1(x1, y1, x2, y2)).epsilon(1e-6));
}

TEST_CASE("sparse convolution matches a brute-force sum") {
  const Lattice lat = adapted_lattice(12, 1, 1);
  const LabField a = make_block({1, 1, SignSet::None}, lat, 1);
  const LabField b = make_block({1, 1, SignSet::None}, lat, 2);
  const LabField w = convolve(a, b);
  int checked = 0;
  for (const auto& c : w.columns())
    for (std::size_t p = 0; p < c.v.size(); p += 5) {
      CHECK(std::abs(c.v[p] - brute_at(a, b, c.i, c.j, c.m0 + long(p))) < 1e-12);
      ++checked;
    }
  CHECK(checked > 10);
}

TEST_CASE("adjoint identity <a*b, w> = <a, adj(w, b)>") {
  const Lattice lat = adapted_lattice(12, 1, 1);
  const DyadicBlockSpec s{1, 1, SignSet::S1};
  const LabField a = make_block(s, lat, 3), b = make_block(s, lat, 4);
  const PairMask mask = sign_mask(SignSet::S1);
  const LabField ab = convolve(a, b, &mask);
  LabField w = ab;
  for (auto& c : w.columns())
    for (auto& z : c.v) z = z * Complex(0.3, -1.0) + Complex(0.1, 0.2);
  const PairMask swapped = [&](double x1, double m1, double x2, double m2) { return mask(x2, m2, x1, m1); };
  const LabField adj = convolve_adjoint(w, b, a, &swapped);
  CHECK(std::abs(w.dot(ab) - adj.dot(a)) < 1e-10 * std::abs(w.dot(ab)));
}

TEST_CASE("blocks are Hermitian with unit norm") {
  const Lattice lat = adapted_lattice(16, 2, 1);
  const LabField f = make_block({2, 1, SignSet::None}, lat, 9);
  CHECK(f.l2_norm() == doctest::Approx(1.0));
  for (const auto& c : f.columns()) {
    const Column* m = f.find(-c.i, -c.j);
    REQUIRE(m != nullptr);
    for (std::size_t p = 0; p < c.v.size(); ++p) {
      const long tau = c.m0 + long(p);
      const long q = -tau - m->m0;
      REQUIRE(q >= 0);
      REQUIRE(q < long(m->v.size()));
      CHECK(std::abs(c.v[p] - std::conj(m->v[std::size_t(q)])) < 1e-14);
    }
  }
}

TEST_CASE("dense FFT convolution matches direct summation") {
  const int K = 3;
  DenseField a(0.5, K), b(0.5, K);
  Rng rng(5, 1);
  for (auto& z : a.data()) z = rng.complex_normal();
  for (auto& z : b.data()) z = rng.complex_normal();
  const DenseField c = convolve(a, b);
  CHECK(c.K() == 2 * K);
  Complex want = 0;
  const int m = 1, i = -2, j = 3;
  for (int m1 = -K; m1 <= K; ++m1)
    for (int i1 = -K; i1 <= K; ++i1)
      for (int j1 = -K; j1 <= K; ++j1) {
        const int m2 = m - m1, i2 = i - i1, j2 = j - j1;
        if (std::abs(m2) > K || std::abs(i2) > K || std::abs(j2) > K) continue;
        want += a.at(m1, i1, j1) * b.at(m2, i2, j2);
      }
  want *= std::pow(0.5, 3);
  CHECK(std::abs(c.at(m, i, j) - want) < 1e-12);
}

TEST_CASE("block bound preconditions") {
  CHECK_THROWS_AS(block_bound({1, 1, SignSet::None}, {2, 1, SignSet::None}, BlockMode::Measure2), Error);
  CHECK_THROWS_AS(block_bound({1, 1, SignSet::None}, {1, 1, SignSet::None}, BlockMode::Measure3), Error);
  CHECK_THROWS_AS(block_bound({1, 1, SignSet::S1}, {4, 1, SignSet::S1}, BlockMode::Measure3), Error);
  CHECK(block_bound({4, 2, SignSet::S1}, {4, 8, SignSet::S1}, BlockMode::Measure3) == doctest::Approx(2.0));
}

TEST_CASE("random trials never beat the exhaustive maximum by much") {
  const DyadicBlockSpec s{1, 1, SignSet::None};
  const double trial = block_product_ratio(s, s, BlockMode::Measure, 6, 12, 1).max_ratio;
  const double exh = block_product_exhaustive(s, s, BlockMode::Measure, 12, 1);
  CHECK(trial > 0);
  CHECK(trial <= exh * 1.05);
}

TEST_CASE("bilinear parameter ranges") {
  BilinearParams p;
  p.s = 0.4;
  CHECK_THROWS_AS(check_bilinear_params(Bilinear::B1, p), Error);
  p.s = 0.9;
  CHECK_NOTHROW(check_bilinear_params(Bilinear::B1, p));
  CHECK_THROWS_AS(check_bilinear_params(Bilinear::B3, p), Error);
  p.rho = 0.4;
  CHECK_THROWS_AS(check_bilinear_params(Bilinear::B2, p), Error);
  p.allow_outside_range = true;
  CHECK_NOTHROW(check_bilinear_params(Bilinear::B2, p));
  p.delta = 0.1;
  CHECK_THROWS_AS(check_bilinear_params(Bilinear::B2, p), Error);
}

TEST_CASE("bilinear constants are finite on a small corpus") {
  const BilinearResult r = bilinear_constant(Bilinear::B2, BilinearParams{}, 6, 12, 3);
  CHECK(r.trials.size() == 6);
  CHECK(std::isfinite(r.max_ratio));
  CHECK(r.max_ratio >= r.median_ratio);
}

TEST_CASE("modulation shell extents") {
  for (double L : {1.0, 2.0, 8.0}) {
    CHECK(chi_N(L, japanese(sigma_max(L))) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(chi_N(L, japanese(0.98 * sigma_max(L))) > 0);
    CHECK(chi_N(L, japanese(1.1 * sigma_min(L))) > 0);
  }
}

TEST_CASE("measure counts respect set inclusion and resolution limits") {
  MeasureQuery q;
  q.N1 = q.N2 = 2;
  q.xi = 2.5;
  q.mu = 0.5;
  q.tau = omega(q.xi, q.mu);
  q.sign = SignSet::None;
  const auto all = count_measure_A(q);
  q.sign = SignSet::S1;
  const auto s1 = count_measure_A(q);
  q.sign = SignSet::S2;
  const auto s2 = count_measure_A(q);
  CHECK(all.count_A > 0);
  CHECK(s1.count_A <= all.count_A);
  CHECK(s2.count_A <= all.count_A - s1.count_A);
  CHECK(all.estimate_A == doctest::Approx(all.count_A * std::pow(2.0 / 16, 3)));
  q.h = 1.0;
  CHECK_THROWS_AS(count_measure_A(q), Error);
}

TEST_CASE("S2 derivative probe is positive inside the cone") {
  CHECK(probe_s2_derivative(4, 0.05, 200, 1) > 0);
}
