#include "zk/dynamics.hpp"

#include <cmath>

namespace zk {

namespace {
Spectrum phases(const SpectralGrid& g, double t) {
  Spectrum e(g.nx(), g.nky());
  for (int r = 0; r < g.nx(); ++r)
    for (int c = 0; c < g.nky(); ++c) {
      const double a = t * g.omega_table()(r, c);
      e(r, c) = g.nyquist(r, c) ? Complex(0.0) : Complex(std::cos(a), std::sin(a));
    }
  return e;
}

RealArray i_xi(const SpectralGrid& g) {
  RealArray k(g.nx(), g.nky());
  for (int r = 0; r < g.nx(); ++r)
    for (int c = 0; c < g.nky(); ++c) k(r, c) = g.nyquist(r, c) ? 0.0 : g.xi(r);
  return k;
}

/// -i xi F[u^2], band-limited. Reports max|u| when asked.
Spectrum nonlinear_impl(const SpectralGrid& g, const Spectrum& uh, double* max_abs) {
  RealArray u;
  g.inverse(uh, u);
  if (max_abs) *max_abs = u.abs().maxCoeff();
  RealArray u2 = u.square();
  Spectrum w;
  g.forward(u2, w);
  const RealArray k = i_xi(g) * g.dealias_mask();
  return w * (k.cast<Complex>() * Complex(0.0, -1.0));
}
}  // namespace

Spectrum linear_propagate(const SpectralGrid& g, const Spectrum& s, double t) {
  return s * phases(g, t);
}

RealField2D linear_propagate(const RealField2D& f, double t) {
  return RealField2D::from_spectrum(f.grid_ptr(), linear_propagate(f.grid(), f.spectrum(), t));
}

Spectrum nonlinear_term(const SpectralGrid& g, const Spectrum& uh) {
  return nonlinear_impl(g, uh, nullptr);
}

RealField2D nonlinear_term(const RealField2D& u) {
  return RealField2D::from_spectrum(u.grid_ptr(), nonlinear_term(u.grid(), u.spectrum()));
}

RealField2D band_limit(const RealField2D& f) {
  Spectrum s = f.spectrum();
  dealias(f.grid(), s);
  return RealField2D::from_spectrum(f.grid_ptr(), s);
}

Solver::Solver(const RealField2D& u0, SolverOptions opts) : grid_(u0.grid_ptr()), opts_(opts) {
  if (!(opts_.dt > 0) || !(opts_.cfl > 0) || opts_.cfl > 1)
    throw Error(ErrorKind::InvalidArgument, "dt must be positive and cfl in (0,1]");
  uh_ = u0.spectrum();
  dealias(*grid_, uh_);
  refresh_max();
  ceiling_ = opts_.ceiling ? *opts_.ceiling : 1e6 * std::max(max_abs_, 1e-300);
}

RealField2D Solver::field() const { return RealField2D::from_spectrum(grid_, uh_); }

double Solver::allowed_dt() const {
  const double h = std::min(grid_->dx(), grid_->dy());
  return std::min(opts_.dt, opts_.cfl * h / std::max(1.0, max_abs_));
}

void Solver::update_phases(double dt) {
  if (dt == phase_dt_) return;
  e_full_ = phases(*grid_, dt);
  e_half_ = phases(*grid_, 0.5 * dt);
  phase_dt_ = dt;
}

void Solver::refresh_max() {
  RealArray u;
  grid_->inverse(uh_, u);
  max_abs_ = u.abs().maxCoeff();
}

double Solver::step() { return step_exact(allowed_dt()); }

double Solver::step_exact(double dt) {
  update_phases(dt);
  const auto& g = *grid_;
  if (!opts_.nonlinear) {
    uh_ = uh_ * e_full_;
  } else {
    const Spectrum a = nonlinear_impl(g, uh_, nullptr);
    const Spectrum b = nonlinear_impl(g, e_half_ * (uh_ + (0.5 * dt) * a), nullptr);
    const Spectrum c = nonlinear_impl(g, e_half_ * uh_ + (0.5 * dt) * b, nullptr);
    const Spectrum d = nonlinear_impl(g, e_full_ * uh_ + dt * (e_half_ * c), nullptr);
    uh_ = e_full_ * uh_ + (dt / 6.0) * (e_full_ * a + 2.0 * (e_half_ * (b + c)) + d);
  }
  t_ += dt;
  ++steps_;
  last_dt_ = dt;
  refresh_max();
  if (!std::isfinite(max_abs_) || max_abs_ > ceiling_)
    throw Error(ErrorKind::BlowUp, "max|u| = " + std::to_string(max_abs_) + " at t = " +
                                       std::to_string(t_));
  return dt;
}

void Solver::advance_to(double t_target) {
  const double sign = t_target >= t_ ? 1.0 : -1.0;
  while (sign * (t_target - t_) > 1e-14 * std::max(1.0, std::abs(t_target))) {
    double dt = allowed_dt();
    const double remaining = std::abs(t_target - t_);
    // Split the remainder evenly rather than leaving a sliver step.
    const long n = long(std::ceil(remaining / dt - 1e-12));
    dt = remaining / double(std::max(1L, n));
    step_exact(sign * dt);
  }
  t_ = t_target;
}

SpaceTimeField run_trajectory(const RealField2D& u0, const SolverOptions& opts, double sample_dt,
                              int nt) {
  SpaceTimeField out(u0.grid_ptr(), TimeWindow{0.0, sample_dt * nt, nt});
  Solver solver(u0, opts);
  for (int k = 0; k < nt; ++k) {
    solver.advance_to(k * sample_dt);
    u0.grid().inverse(solver.spectrum(), out.slice(k));
  }
  return out;
}

double duhamel_residual(const SpaceTimeField& traj, double T, bool with_integral) {
  const auto& g = traj.grid();
  const double h = traj.window().dt();
  if (traj.window().t_min != 0.0)
    throw Error(ErrorKind::InvalidArgument, "trajectory must start at t = 0");
  if (T > traj.t(traj.nt() - 1) + 1e-12 * std::max(1.0, T))
    throw Error(ErrorKind::WindowTooShort, "T exceeds the sampled span");
  const int K = int(std::floor(T / h + 1e-9));

  std::vector<Spectrum> gk;
  Spectrum u0;
  g.forward(traj.slice(0), u0);
  if (with_integral) {
    gk.reserve(K + 3);
    for (int k = 0; k <= std::min(K + 2, traj.nt() - 1); ++k) {
      Spectrum s;
      g.forward(traj.slice(k), s);
      // d_x(u^2) = -nonlinear_term
      gk.push_back(linear_propagate(g, Spectrum(-nonlinear_term(g, s)), -traj.t(k)));
    }
  }

  auto integral = [&](int k) -> Spectrum {
    Spectrum acc = Spectrum::Zero(g.nx(), g.nky());
    if (k == 0) return acc;
    if (k == 1) {
      if (gk.size() < 3) return (0.5 * h) * (gk[0] + gk[1]);
      return (h / 12.0) * (5.0 * gk[0] + 8.0 * gk[1] - gk[2]);
    }
    int even = (k % 2 == 0) ? k : k - 3;
    for (int i = 0; i + 2 <= even; i += 2)
      acc += (h / 3.0) * (gk[i] + 4.0 * gk[i + 1] + gk[i + 2]);
    if (even != k)
      acc += (3.0 * h / 8.0) * (gk[k - 3] + 3.0 * gk[k - 2] + 3.0 * gk[k - 1] + gk[k]);
    return acc;
  };

  double worst = 0.0;
  for (int k = 0; k <= K; ++k) {
    Spectrum s;
    g.forward(traj.slice(k), s);
    Spectrum v = linear_propagate(g, s, -traj.t(k)) - u0 * phases(g, 0.0);
    if (with_integral) v += integral(k);
    worst = std::max(worst, std::sqrt(spectral_l2_sq(g, v)));
  }
  return worst;
}

}  // namespace zk
