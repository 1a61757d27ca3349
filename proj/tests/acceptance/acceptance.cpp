// Acceptance run: one PASS/FAIL line per criterion. Optional arguments select
// a subset, e.g. `acceptance 3 7`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "zk/bourgain.hpp"
#include "zk/config.hpp"
#include "zk/dyadic.hpp"
#include "zk/dynamics.hpp"
#include "zk/growth.hpp"
#include "zk/invariants.hpp"
#include "zk/lab.hpp"
#include "zk/rng.hpp"
#include "zk/symbols.hpp"

using namespace zk;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... xs) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, xs...);
  return buf;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// 1. Linear exactness.
Outcome linear_exactness() {
  const GridPtr g = make_grid(128, 128, 32 * M_PI, 32 * M_PI);
  const RealField2D u0 = band_limit(random_smooth_field(g, 11, 1.0));
  SolverOptions so;
  so.nonlinear = false;
  Solver solver(u0, so);
  for (int k = 0; k < 1000; ++k) solver.step_exact(1e-3);
  const Spectrum exact = linear_propagate(*g, u0.spectrum(), solver.t());
  const double err = std::sqrt((solver.spectrum() - exact).abs2().sum() / exact.abs2().sum());
  return {err <= 1e-12, fmt("rel L2 error %.3e (limit 1e-12)", err)};
}

// 2. Conservation of mass and energy.
Outcome conservation() {
  SimulationConfig cfg;
  const RealField2D u0 = make_initial(cfg);
  SolverOptions so = cfg.solver_options();
  so.dt = 1e-3;
  const double M0 = mass(u0), E0 = energy(u0);
  Solver solver(u0, so);
  double dM = 0, dE = 0;
  for (int k = 1; k <= 100; ++k) {
    solver.advance_to(0.1 * k);
    const RealField2D u = solver.field();
    dM = std::max(dM, std::abs(mass(u) - M0) / std::abs(M0));
    dE = std::max(dE, std::abs(energy(u) - E0) / std::abs(E0));
  }
  return {dM <= 1e-8 && dE <= 1e-6,
          fmt("max |dM|/M %.3e (limit 1e-8), max |dE|/|E| %.3e (limit 1e-6)", dM, dE)};
}

// 3. Exact-equality identity for the truncated linear flow.
Outcome bourgain_identity() {
  const GridPtr g = make_grid(64, 64, 16 * M_PI, 16 * M_PI);
  const RealField2D f = random_smooth_field(g, 3, 1.0);
  const TimeWindow w{-2.0, 3.0, 256};
  double worst = 0;
  std::string where;
  for (double s : {0.0, 1.0, 2.0})
    for (double b : {0.0, 5.0 / 12.0, 0.5, 0.6})
      for (double T : {1.0, 0.5, 0.25}) {
        const double q = linear_identity_ratio(f, s, b, T, w).value_or(NAN);
        const double dev = std::isfinite(q) ? std::abs(q - 1.0) : INFINITY;
        if (dev >= worst) {
          worst = dev;
          where = fmt("s=%g b=%.4g T=%g ratio=%.6f", s, b, T, q);
        }
      }
  return {worst <= 0.02, fmt("worst |ratio-1| %.3e at %s (limit 0.02)", worst, where.c_str())};
}

// 4. Partition of unity.
Outcome partition() {
  SimulationConfig cfg;
  const GridPtr g = make_grid(cfg.nx, cfg.ny, cfg.box_x, cfg.box_y);
  const double dev = partition_deviation(*g);
  return {dev <= 1e-12, fmt("max deviation %.3e (limit 1e-12)", dev)};
}

// 5. I0 vanishes; increment total matches a finite difference.
Outcome increments() {
  SimulationConfig cfg;
  const RealField2D u0 = make_initial(cfg);
  SolverOptions so = cfg.solver_options();
  Solver solver(u0, so);
  const GridPtr g = make_grid(cfg.nx, cfg.ny, cfg.box_x, cfg.box_y);
  double i0 = 0, fd_err = 0;
  // t = 0 is skipped: even-in-x data makes every pairing vanish there.
  for (double t : {0.5, 1.0, 2.0, 4.0}) {
    solver.advance_to(t);
    const RealField2D u = solver.field();
    const IncrementReport r = increment_decomposition(u, 2, t);
    i0 = std::max(i0, std::abs(r.I0) / r.scale);
    const double h = 1e-3;
    Solver fwd(u, so), bwd(u, so);
    fwd.step_exact(h);
    bwd.step_exact(-h);
    const double fd = (hs_norm_sq(*g, fwd.spectrum(), 2) - hs_norm_sq(*g, bwd.spectrum(), 2)) / (2 * h);
    fd_err = std::max(fd_err, std::abs(r.total - fd) / std::abs(fd));
  }
  return {i0 <= 1e-10 && fd_err <= 1e-4,
          fmt("max |I0|/scale %.3e (limit 1e-10), max total vs FD rel %.3e (limit 1e-4)", i0, fd_err)};
}

// 6. Growth-envelope certification of the recurrence.
Outcome lemma13() {
  int failures = 0, total = 0;
  std::string first;
  for (double K1 : {0.1, 1.0, 10.0})
    for (double eps : {0.3, 0.5, 0.9})
      for (double f : {1.1, 2.0, 5.0}) {
        const double d = f / eps;
        const GrowthEnvelope env = lemma13_constants(K1, eps, d);
        const bool ok = lemma13_verify(env, 100000, 0) && verify_convexity(d, 1000000);
        ++total;
        if (!ok) {
          if (failures++ == 0) first = fmt(" first: K1=%g eps=%g d=%g", K1, eps, d);
        }
      }
  return {failures == 0, fmt("%d/%d grid points certified%s", total - failures, total, first.c_str())};
}

// 7. Bilinear (negative regularity) ratio stability under refinement.
Outcome bilinear() {
  lab::BilinearParams p;
  p.rho = 0.4;
  p.delta = 1.0 / 24.0;
  p.allow_outside_range = true;
  const auto r32 = lab::bilinear_constant(lab::Bilinear::B2, p, 200, 32, 7);
  const auto r48 = lab::bilinear_constant(lab::Bilinear::B2, p, 200, 48, 7);
  const double growth = r48.max_ratio / r32.max_ratio;
  return {std::isfinite(r32.max_ratio) && r32.max_ratio > 0 && growth <= 1.25,
          fmt("max ratio %.4f at 32^3, %.4f at 48^3, growth %.4f (limit 1.25)", r32.max_ratio,
              r48.max_ratio, growth)};
}

// 8. Block bounds: random trials vs exhaustive maximum, and the N-sweep.
Outcome block_bounds() {
  using lab::BlockMode;
  struct Case {
    BlockMode m;
    DyadicBlockSpec a, b;
  };
  const std::vector<Case> cases{
      {BlockMode::Measure, {1, 1, SignSet::None}, {1, 1, SignSet::None}},
      {BlockMode::Measure2, {1, 1, SignSet::None}, {4, 1, SignSet::None}},
      {BlockMode::Measure3, {1, 1, SignSet::S1}, {1, 1, SignSet::S1}},
  };
  bool ok = true;
  std::ostringstream os;
  for (const Case& c : cases) {
    const double trial = lab::block_product_ratio(c.a, c.b, c.m, 100, 24, 5).max_ratio;
    const double exh = lab::block_product_exhaustive(c.a, c.b, c.m, 16, 5);
    const double q = std::max(trial / exh, exh / trial);
    ok = ok && q <= 2.0;
    os << lab::to_string(c.m) << fmt(" trials %.4f exhaustive %.4f factor %.3f; ", trial, exh, q);
  }
  std::vector<double> lx, ly;
  for (double N : {1.0, 2.0, 4.0}) {
    const DyadicBlockSpec s{N, 1, SignSet::S1};
    const double r = lab::block_product_ratio(s, s, BlockMode::Measure3, 100, 24, 9).max_ratio;
    lx.push_back(std::log(N));
    ly.push_back(std::log(r));
  }
  const double sl = slope(lx, ly);
  ok = ok && sl <= 0.05;
  os << fmt("measure3 N-sweep slope %.4f (limit 0.05)", sl);
  return {ok, os.str()};
}

// 9. Measure counting: estimate N1 / (L1 L2) across a parameter sample.
Outcome measure_counting() {
  Rng rng(2024, 9);
  std::vector<double> c;
  double worst_change = 0;
  int empty = 0;
  const double Ns[] = {1, 2, 4}, Ls[] = {1, 2, 4};
  auto shell_point = [&](double N) {
    const double r = std::sqrt(std::pow(rng.uniform(1.25 * N, 3.2 * N), 2) - 1.0);
    const double th = rng.uniform(0, 2 * M_PI);
    return std::pair{r * std::cos(th) / std::sqrt(3.0), r * std::sin(th)};
  };
  for (int k = 0; k < 50; ++k) {
    lab::MeasureQuery q;
    q.sign = SignSet::S1;
    q.N1 = Ns[k % 3];
    q.N2 = (k / 3) % 2 ? q.N1 : std::max(1.0, q.N1 / 2);
    q.L1 = Ls[(k / 6) % 3];
    q.L2 = Ls[(k / 18) % 3];
    // Target built from an admissible pair so the set is nonempty.
    for (;;) {
      const auto [x1, y1] = shell_point(q.N1);
      const auto [x2, y2] = shell_point(q.N2);
      if (!in_sign_set(SignSet::S1, x1, y1, x2, y2)) continue;
      q.xi = x1 + x2;
      q.mu = y1 + y2;
      const double s1 = rng.uniform(lab::sigma_min(q.L1), lab::sigma_max(q.L1)) * (rng.uniform() < 0.5 ? -1 : 1);
      const double s2 = rng.uniform(lab::sigma_min(q.L2), lab::sigma_max(q.L2)) * (rng.uniform() < 0.5 ? -1 : 1);
      q.tau = omega(x1, y1) + s1 + omega(x2, y2) + s2;
      break;
    }
    const double h = std::min(q.N1, q.N2) / 16.0;
    q.h = h;
    const auto coarse = lab::count_measure_A(q);
    q.h = h / 2;
    const auto fine = lab::count_measure_A(q);
    if (fine.count_A == 0 || coarse.count_A == 0) {
      ++empty;
      continue;
    }
    c.push_back(fine.estimate_A * q.N1 / (q.L1 * q.L2));
    worst_change = std::max(worst_change, std::max(fine.estimate_A / coarse.estimate_A,
                                                   coarse.estimate_A / fine.estimate_A));
  }
  const double mx = *std::max_element(c.begin(), c.end());
  const double spread = mx / median(c);
  return {empty == 0 && spread <= 10.0 && worst_change <= 2.0,
          fmt("%zu nonempty of 50; chain max %.4f median %.4f spread %.3f (limit 10); worst "
              "resolution change %.3f (limit 2)",
              c.size(), mx, median(c), spread, worst_change)};
}

// 10. Per-window H^2 increment grows sub-linearly in ||u0||_{H^2}^2 at fixed H^1.
Outcome amplification() {
  const GridPtr g = make_grid(512, 512, 16 * M_PI, 16 * M_PI);
  const double cx = 0.5 * g->box_length_x(), cy = 0.5 * g->box_length_y();
  const RealField2D bg = band_limit(gaussian(g, 0.3, 2.0, 2.0, cx, cy));
  const double target_h1 = 5.0 * sobolev_norm(bg, 1.0);
  std::vector<double> lx, ly, h1s;
  std::ostringstream os;
  for (double k0 : {0.0, 0.5, 1.0, 2.0, 3.5, 6.0, 10.0, 18.0}) {
    // packet travelling along x, carrier along y, placed left of the background
    RealArray p(g->nx(), g->ny());
    for (int i = 0; i < g->nx(); ++i)
      for (int j = 0; j < g->ny(); ++j) {
        const double x = g->x(i) - (cx - 6.0), y = g->y(j) - cy;
        p(i, j) = std::exp(-(x * x + y * y) / 4.0) * std::cos(k0 * y);
      }
    const RealField2D packet = band_limit(RealField2D(g, p));
    // choose the packet amplitude a so ||bg + a packet||_{H^1} = target
    const double pp = std::pow(sobolev_norm(packet, 1.0), 2), bb = std::pow(sobolev_norm(bg, 1.0), 2);
    const double a = std::sqrt((target_h1 * target_h1 - bb) / pp);
    RealArray v = bg.values() + a * packet.values();
    const RealField2D u0(g, v);
    SolverOptions so;
    so.dt = 2e-3;
    const double inc = window_increment(u0, 2, 1.0, so, 50);
    const double h2 = sobolev_norm(u0, 2.0);
    h1s.push_back(sobolev_norm(u0, 1.0));
    lx.push_back(std::log(h2 * h2));
    ly.push_back(std::log(inc));
    os << fmt("k0=%g H2=%.3g inc=%.3g; ", k0, h2, inc);
  }
  const double span = std::exp(0.5 * (lx.back() - lx.front()));
  const auto [lo, hi] = std::minmax_element(h1s.begin(), h1s.end());
  const bool h1_ok = *hi / target_h1 <= 1.05 && *lo / target_h1 >= 0.95;
  const double sl = slope(lx, ly);
  os << fmt("H2 span %.2fx, H1 within [%.3f, %.3f] of target, slope %.4f (limit < 1)", span,
            *lo / target_h1, *hi / target_h1, sl);
  return {h1_ok && span >= 10.0 && sl < 1.0, os.str()};
}

// 11. Growth envelope over a long run.
Outcome growth_envelope() {
  SimulationConfig cfg;
  const RealField2D u0 = make_initial(cfg);
  SolverOptions so = cfg.solver_options();
  so.dt = 5e-3;
  Solver solver(u0, so);
  std::vector<GrowthSample> hist;
  const double E0 = energy(u0);
  double dE = 0;
  for (int k = 0; k <= 200; ++k) {
    if (k > 0) solver.advance_to(0.5 * k);
    const RealField2D u = solver.field();
    hist.push_back({solver.t(), sobolev_norm(u, 2.0)});
    dE = std::max(dE, std::abs(energy(u) - E0) / std::abs(E0));
  }
  const GrowthFit fit = fit_growth(hist, default_beta_grid());
  bool inside = true;
  for (const auto& s : hist)
    inside = inside && s.hs <= fit.envelope_C * std::pow(1 + s.t, fit.beta_best) * (1 + hist[0].hs) * (1 + 1e-12);
  const bool finite = std::isfinite(fit.beta_best) && std::isfinite(fit.envelope_C);
  return {finite && inside,
          fmt("beta_best %.2f, C %.4f, stabilized %d, history inside envelope %d, energy drift "
              "%.1e (threshold (s-1)/2 = 0.5 is asymptotic, informational only)",
              fit.beta_best, fit.envelope_C, int(fit.stabilized), int(inside), dE)};
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all{
      {1, 10, linear_exactness},  {2, 300, conservation},       {3, 60, bourgain_identity},
      {4, 60, partition},         {5, 300, increments},         {6, 60, lemma13},
      {7, 600, bilinear},         {8, 900, block_bounds},       {9, 600, measure_counting},
      {10, 1800, amplification},  {11, 1800, growth_envelope},
  };
  std::set<int> pick;
  for (int i = 1; i < argc; ++i) pick.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& c : all) {
    if (!pick.empty() && !pick.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("CRITERION %2d: %s  %s [%.1f s, budget %.0f s]\n", c.id, pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs, c.budget_s);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
