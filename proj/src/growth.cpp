#include "zk/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zk/bourgain.hpp"
#include "zk/dyadic.hpp"

namespace zk {

void LocalTheoryParams::validate() const {
  if (!(C0 > 0)) throw Error(ErrorKind::ParameterRange, "C0 must be positive");
  if (!(delta > 0 && delta < 1.0 / 12.0)) throw Error(ErrorKind::ParameterRange, "delta must lie in (0, 1/12)");
  if (s < 2) throw Error(ErrorKind::ParameterRange, "s must be an integer >= 2");
  if (!(rho > 0 && rho < 0.5 - 6 * delta))
    throw Error(ErrorKind::ParameterRange, "rho must lie in (0, 1/2 - 6 delta)");
}

double existence_time(double A, const LocalTheoryParams& p) {
  if (!(A > 0)) throw Error(ErrorKind::InvalidArgument, "A must be positive");
  const double lg = std::log(8.0 * p.C0 * p.C0 * A);
  if (lg <= 0) return 1.0;
  return std::exp(-lg / p.delta);
}

std::optional<Amplification> measure_amplification(const RealField2D& u0,
                                                   const LocalTheoryParams& p,
                                                   const SolverOptions& opts,
                                                   std::optional<double> window, int nt) {
  const double h1 = sobolev_norm(u0, 1.0);
  const double hs0 = sobolev_norm(u0, p.s);
  if (h1 == 0.0 || hs0 == 0.0) return std::nullopt;
  Amplification out;
  out.T = window ? *window : existence_time(h1, p);
  const double T = out.T;
  const TimeWindow w{-1.25 * T, 2.25 * T, nt};
  SpaceTimeField traj(u0.grid_ptr(), w);
  const auto& g = u0.grid();

  double sup = 0.0;
  Solver fwd(u0, opts), bwd(u0, opts);
  for (int k = nt - 1; k >= 0; --k) {
    if (w.t(k) > 0) continue;
    bwd.advance_to(w.t(k));
    g.inverse(bwd.spectrum(), traj.slice(k));
  }
  for (int k = 0; k < nt; ++k) {
    if (w.t(k) <= 0) continue;
    if (w.t(k) > T && fwd.t() < T) {
      fwd.advance_to(T);
      sup = std::max(sup, sobolev_norm(g, fwd.spectrum(), p.s));
    }
    fwd.advance_to(w.t(k));
    g.inverse(fwd.spectrum(), traj.slice(k));
    if (w.t(k) <= T) sup = std::max(sup, sobolev_norm(g, fwd.spectrum(), p.s));
  }
  sup = std::max(sup, sobolev_norm(g, Solver(u0, opts).spectrum(), p.s));
  out.C_meas = sup / hs0;
  for (int k = 0; k < nt; ++k) traj.slice(k) *= phi_T(w.t(k), T);
  out.tame_meas = xsb_norm(traj, 1.0, p.b()) / h1;
  return out;
}

double hs_norm_sq(const SpectralGrid& g, const Spectrum& s, int order) {
  const RealArray w = g.bracket_sq_table().pow(order);
  return spectral_weighted_l2_sq(g, s, w);
}

namespace {
double factorial(int n) { return std::tgamma(n + 1.0); }
double binom(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

/// quad * sum_k colweight * Re(conj(a) b): the real inner product of two fields.
double inner(const SpectralGrid& g, const Spectrum& a, const Spectrum& b) {
  double sum = 0.0;
  for (int r = 0; r < g.nx(); ++r)
    for (int c = 0; c < g.nky(); ++c) sum += g.column_weight(c) * std::real(std::conj(a(r, c)) * b(r, c));
  return g.spectral_quadrature() * sum;
}
}  // namespace

IncrementReport increment_decomposition(const RealField2D& u, int s, double t) {
  if (s < 2) throw Error(ErrorKind::InvalidArgument, "s must be an integer >= 2");
  const auto& g = u.grid();
  const Spectrum& uh = u.spectrum();
  const double outside = energy_outside_band(g, uh);
  if (outside > 1e-20)
    throw Error(ErrorKind::Unresolved, "field has content outside the dealiased band");

  IncrementReport rep;
  rep.t = t;
  const Multiplier dx = multipliers::partial_x(g);
  {
    const Spectrum N = nonlinear_term(g, uh);
    const RealArray w = g.bracket_sq_table().pow(s);
    rep.hs_derivative = 2.0 * inner(g, uh * w.cast<Complex>(), N);
  }
  for (int order = 0; order <= s; ++order)
    for (int i1 = 0; i1 <= order; ++i1) {
      const MultiIndex i{i1, order - i1};
      const double wi = factorial(s) / (factorial(s - order) * factorial(i.i1) * factorial(i.i2)) *
                        std::pow(3.0, i.i1);
      const Spectrum di = apply_multiplier(g, uh, multipliers::partial(g, i));
      for (int j1 = 0; j1 <= i.i1; ++j1)
        for (int j2 = 0; j2 <= i.i2; ++j2) {
          const MultiIndex j{j1, j2}, rest{i.i1 - j1, i.i2 - j2};
          RealArray a, b;
          g.inverse(apply_multiplier(g, uh, multipliers::partial(g, j)), a);
          g.inverse(apply_multiplier(g, uh, multipliers::partial(g, rest)), b);
          Spectrum p;
          g.forward(RealArray(a * b), p);
          dealias(g, p);
          const double term = -2.0 * wi * binom(i.i1, j1) * binom(i.i2, j2) *
                              inner(g, di, apply_multiplier(g, p, dx));
          rep.scale += std::abs(term);
          if (order == 0)
            rep.I0 += term;
          else if (order < s)
            rep.I_mid += term;
          else if (j.order() == 0 || j == i)
            rep.I_s2 += term;
          else
            rep.I_s1 += term;
        }
    }
  rep.total = rep.I0 + rep.I_mid + rep.I_s1 + rep.I_s2;
  return rep;
}

IncrementReport increment_decomposition(const SpaceTimeField& traj, int s, double t) {
  const double pos = (t - traj.window().t_min) / traj.window().dt();
  const int k = int(std::lround(pos));
  if (k < 0 || k >= traj.nt() || std::abs(pos - k) > 1e-9)
    throw Error(ErrorKind::InvalidArgument, "t is not a sample time of the trajectory");
  return increment_decomposition(traj.field_at(k), s, t);
}

long double GrowthEnvelope::K2() const { return std::exp(log_K2); }

long double GrowthEnvelope::log_bound(long k, long double u0) const {
  return log_K2 + (long double)d * std::log1p((long double)k) + std::log1p(u0);
}

GrowthEnvelope lemma13_constants(double K1, double eps, double d) {
  if (!(K1 > 0)) throw Error(ErrorKind::ParameterRange, "K1 must be positive");
  if (!(eps > 0 && eps < 1)) throw Error(ErrorKind::ParameterRange, "eps must lie in (0,1)");
  if (!(d * eps > 1)) throw Error(ErrorKind::ParameterRange, "need d * eps > 1");
  GrowthEnvelope env{K1, eps, d, 1, 0};
  const long double e = (long double)d * eps - 1;
  const long double bound = std::pow((long double)K1 / d, 1 / e);
  if (!std::isfinite(bound)) throw Error(ErrorKind::Overflow, "N exceeds the extended range");
  env.N = std::max(1.0L, std::ceil(bound));
  auto secondary = [&](long double N) {
    return (long double)d - K1 * std::pow(1.0L + N, -e) >= 1.0L;
  };
  if (!secondary(env.N)) {
    // (1+N)^{-e} <= (d-1)/K1 in closed form, then step past rounding.
    if (d <= 1) throw Error(ErrorKind::ParameterRange, "d - K1 (1+N)^{1 - d eps} >= 1 needs d > 1");
    long double N = std::ceil(std::pow((long double)K1 / (d - 1), 1 / e) - 1);
    if (!std::isfinite(N)) throw Error(ErrorKind::Overflow, "N exceeds the extended range");
    N = std::max(N, env.N);
    for (int guard = 0; guard < 64 && N > env.N && secondary(N - 1); ++guard) N -= 1;
    for (int guard = 0; guard < 64 && !secondary(N); ++guard) N += 1;
    if (!secondary(N)) throw Error(ErrorKind::Overflow, "cannot resolve N in extended precision");
    env.N = N;
  }
  const long double a = env.N * std::log(2.0L * K1 + 1);
  const long double b = std::log((long double)K1) - (long double)(d - 1) * std::log((long double)env.N);
  env.log_K2 = std::max(a, b);
  return env;
}

std::optional<long> lemma13_first_failure(const GrowthEnvelope& env, long k_max, long double u0) {
  long double u = u0;
  const long double K1 = env.K1, p = 1.0L - env.eps;
  for (long k = 0; k <= k_max; ++k) {
    if (u > 0 && std::log(u) > env.log_bound(k, u0)) return k;
    u = u + K1 * (1.0L + std::pow(u, p));
    if (!std::isfinite(u)) throw Error(ErrorKind::Overflow, "iterate left the extended range");
  }
  return std::nullopt;
}

bool lemma13_verify(const GrowthEnvelope& env, long k_max, long double u0) {
  return !lemma13_first_failure(env, k_max, u0).has_value();
}

bool verify_convexity(double d, long k_max) {
  for (long k = 0; k <= k_max; ++k) {
    const long double x = 1.0L / (1.0L + k);
    // a few ulps of slack so the equality case d = 1 is not lost to rounding
    const long double rhs = (long double)d * x * (1.0L - 8 * std::numeric_limits<long double>::epsilon());
    if (std::expm1(d * std::log1p(x)) < rhs) return false;
  }
  return true;
}

std::vector<double> default_beta_grid() {
  std::vector<double> g;
  for (int k = 1; k <= 30; ++k) g.push_back(0.1 * k);
  return g;
}

GrowthFit fit_growth(const std::vector<GrowthSample>& h, const std::vector<double>& grid, double tol) {
  if (h.empty()) throw Error(ErrorKind::InvalidArgument, "empty history");
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty beta grid");
  for (std::size_t k = 1; k < h.size(); ++k)
    if (!(h[k].t > h[k - 1].t)) throw Error(ErrorKind::InvalidArgument, "history must be ascending");
  if (h.front().t < 0) throw Error(ErrorKind::InvalidArgument, "history must start at t >= 0");
  double tmin = 0;
  for (const auto& s : h)
    if (s.t > 0) {
      tmin = s.t;
      break;
    }
  if (!(tmin > 0) || h.back().t < 10 * tmin)
    throw Error(ErrorKind::InsufficientSpan, "t_max < 10 t_min");

  const double t_half = 0.5 * (h.front().t + h.back().t);
  GrowthFit fit;
  std::optional<std::size_t> best;
  for (std::size_t q = 0; q < grid.size(); ++q) {
    const double beta = grid[q];
    double all = 0, first = 0, second = 0;
    for (const auto& s : h) {
      const double r = s.hs / (std::pow(1 + s.t, beta) * (1 + h.front().hs));
      all = std::max(all, r);
      (s.t <= t_half ? first : second) = std::max(s.t <= t_half ? first : second, r);
    }
    fit.C.push_back(all);
    if (!best && second <= first * (1 + tol)) best = q;
  }
  fit.stabilized = best.has_value();
  const std::size_t q = best ? *best : grid.size() - 1;
  fit.beta_best = grid[q];
  fit.envelope_C = fit.C[q];
  return fit;
}

double window_increment(const RealField2D& u0, int s, double T, const SolverOptions& opts,
                        int samples) {
  Solver solver(u0, opts);
  const auto& g = u0.grid();
  const double base = hs_norm_sq(g, solver.spectrum(), s);
  double worst = 0.0;
  for (int k = 1; k <= samples; ++k) {
    solver.advance_to(T * k / samples);
    worst = std::max(worst, std::abs(hs_norm_sq(g, solver.spectrum(), s) - base));
  }
  return worst;
}

}  // namespace zk
