#pragma once

#include <optional>
#include <vector>

#include "zk/dynamics.hpp"
#include "zk/grid.hpp"
#include "zk/spacetime.hpp"

namespace zk {

struct LocalTheoryParams {
  double C0 = 1.0;
  double delta = 1.0 / 24.0;
  int s = 2;
  double rho = 0.2;

  double b() const { return 0.5 + delta; }
  double bprime() const { return -0.5 + 2.0 * delta; }
  double eps() const { return rho / (s - 1); }
  /// Throws ParameterRange naming the violated constraint.
  void validate() const;
};

/// T(A) = (8 C0^2 A)^{-1/delta}, capped at 1.
double existence_time(double A, const LocalTheoryParams& p);

struct Amplification {
  double T = 0;
  double C_meas = 0;     ///< sup_t ||u(t)||_{H^s} / ||u0||_{H^s} on [0, T]
  double tame_meas = 0;  ///< ||phi_T u||_{X^{1,b}} / ||u0||_{H^1}
};

/// Runs the solver around [0, T] with T = existence_time(||u0||_{H^1}) unless
/// `window` overrides it. Empty for zero data.
std::optional<Amplification> measure_amplification(const RealField2D& u0,
                                                   const LocalTheoryParams& p,
                                                   const SolverOptions& opts,
                                                   std::optional<double> window = std::nullopt,
                                                   int nt = 128);

struct IncrementReport {
  double t = 0;
  double I0 = 0;
  double I_mid = 0;
  double I_s1 = 0;
  double I_s2 = 0;
  double total = 0;
  double hs_derivative = 0;  ///< d/dt ||u||_{H^s}^2 from the equation directly
  double scale = 0;          ///< sum of |individual terms|, for relative checks
};

/// Splits d/dt ||u||_{H^s}^2 into the multi-index pairings. Throws Unresolved
/// if u has content outside the 2/3 band.
IncrementReport increment_decomposition(const RealField2D& u, int s, double t = 0.0);
IncrementReport increment_decomposition(const SpaceTimeField& trajectory, int s, double t);

/// ||u||_{H^s}^2 computed from a spectrum.
double hs_norm_sq(const SpectralGrid& g, const Spectrum& s, int order);

struct GrowthEnvelope {
  double K1 = 0;
  double eps = 0;
  double d = 0;
  long double N = 0;  ///< integer valued; may exceed 64-bit range
  long double log_K2 = 0;  ///< K2 itself can exceed every floating range

  long double K2() const;
  /// ln of the certified bound K2 (1+k)^d (1+u0).
  long double log_bound(long k, long double u0) const;
};

/// Constants from the constructive proof. N starts at
/// max(1, ceil((K1/d)^{1/(d eps - 1)})) and is raised until
/// d - K1 (1+N)^{1 - d eps} >= 1.
GrowthEnvelope lemma13_constants(double K1, double eps, double d);

/// Iterates u_{k+1} = u_k + K1 (1 + u_k^{1-eps}) and checks the bound for
/// k <= k_max. Returns the first failing k, or empty when all pass.
std::optional<long> lemma13_first_failure(const GrowthEnvelope& env, long k_max, long double u0);
bool lemma13_verify(const GrowthEnvelope& env, long k_max, long double u0 = 0);

/// (2+k)^d >= (1+k)^d + d (1+k)^{d-1} for every integer k in [0, k_max].
bool verify_convexity(double d, long k_max);

struct GrowthSample {
  double t;
  double hs;
};

struct GrowthFit {
  double beta_best = 0;
  double envelope_C = 0;
  bool stabilized = false;
  /// C(beta) for each grid value.
  std::vector<double> C;
};

std::vector<double> default_beta_grid();

/// C(beta) = max_t hs(t) / ((1+t)^beta (1 + hs(0))). beta_best is the smallest
/// grid value whose ratio does not rise over the second half of the history
/// (max over the later half <= (1 + tol) max over the earlier half).
GrowthFit fit_growth(const std::vector<GrowthSample>& history, const std::vector<double>& beta_grid,
                     double tol = 1e-6);

/// sup over samples in [0, T] of | ||u(t)||_{H^s}^2 - ||u0||_{H^s}^2 |.
double window_increment(const RealField2D& u0, int s, double T, const SolverOptions& opts,
                        int samples = 50);

}  // namespace zk
