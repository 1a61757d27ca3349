#pragma once

#include <limits>
#include <optional>

#include "zk/grid.hpp"
#include "zk/spacetime.hpp"

namespace zk {

/// Exact linear flow W(t): multiplies every mode by exp(i t omega).
Spectrum linear_propagate(const SpectralGrid& g, const Spectrum& s, double t);
RealField2D linear_propagate(const RealField2D& f, double t);

/// -d_x(u^2) with the square truncated to the 2/3 band.
Spectrum nonlinear_term(const SpectralGrid& g, const Spectrum& uh);
RealField2D nonlinear_term(const RealField2D& u);

struct SolverOptions {
  double dt = 1e-3;
  double cfl = 0.5;
  bool nonlinear = true;
  /// Blow-up ceiling; defaults to 1e6 times the initial max|u|.
  std::optional<double> ceiling;
};

/// Integrating-factor RK4 on v = W(-t) u. The state is kept in spectral form
/// and projected onto the 2/3 band.
class Solver {
 public:
  Solver(const RealField2D& u0, SolverOptions opts);

  double t() const { return t_; }
  long step_count() const { return steps_; }
  double last_dt() const { return last_dt_; }
  const Spectrum& spectrum() const { return uh_; }
  RealField2D field() const;
  double max_abs() const { return max_abs_; }
  const SpectralGrid& grid() const { return *grid_; }

  /// Largest dt allowed by the CFL rule for the current state.
  double allowed_dt() const;
  /// One step of length min(dt, allowed_dt()) (or exactly `dt_override`).
  double step();
  double step_exact(double dt);
  /// Step until t reaches t_target exactly; the last step is shortened.
  void advance_to(double t_target);

 private:
  void update_phases(double dt);
  void refresh_max();

  GridPtr grid_;
  SolverOptions opts_;
  Spectrum uh_;
  double t_ = 0.0;
  long steps_ = 0;
  double last_dt_ = 0.0;
  double max_abs_ = 0.0;
  double ceiling_ = 0.0;
  double phase_dt_ = std::numeric_limits<double>::quiet_NaN();
  Spectrum e_full_, e_half_;
};

/// Project data onto the band the solver evolves.
RealField2D band_limit(const RealField2D& f);

/// Samples the solution from u0 at t_k = k * sample_dt, k < nt.
SpaceTimeField run_trajectory(const RealField2D& u0, const SolverOptions& opts, double sample_dt,
                              int nt);

/// sup over samples t in [0, T] of
/// ||u(t) - W(t) u0 + int_0^t W(t - t') d_x(u^2)(t') dt'||_{L^2}
/// with the integral by composite Simpson on the sample lattice. With
/// `with_integral` false the integral term is dropped.
double duhamel_residual(const SpaceTimeField& trajectory, double T, bool with_integral = true);

}  // namespace zk
