#pragma once

#include <vector>

#include "zk/grid.hpp"

namespace zk {

/// C-infinity step: 0 for x <= 0, 1 for x >= 1.
double smoothstep(double x);

/// Base cutoff: 1 on r <= 5/4, 0 on r >= 8/5, non-increasing.
double chi0(double r);
/// chi(r) = chi0(r/2) - chi0(r), supported in [5/4, 16/5].
double chi(double r);
/// chi_j(r) = chi(r / 2^j).
double chi_j(int j, double r);
/// Shell cutoff for dyadic N = 2^j.
double chi_N(double N, double r);

/// Time cutoff: 1 on [0,1], 0 outside [-1,2].
double phi(double t);
double phi_T(double t, double T);

/// log2 of a dyadic integer; throws unless N is a power of two >= 1.
int dyadic_log2(double N);

enum class SignSet { None, S1, S2 };

struct DyadicBlockSpec {
  double N = 1;
  double L = 1;
  SignSet sign = SignSet::None;
};

/// True iff (xi1, mu1), (xi2, mu2) lie in the sign set. Points on an axis
/// belong to neither set.
bool in_sign_set(SignSet s, double xi1, double mu1, double xi2, double mu2);

/// Multiplier by chi_N(<|(xi,mu)|>). N = 2^j selects chi_j.
Multiplier shell_multiplier(const SpectralGrid& g, double N);
/// Multiplier by chi0(<|(xi,mu)|>).
Multiplier low_multiplier(const SpectralGrid& g);

RealField2D project_P(const RealField2D& f, double N);
RealField2D project_P_low(const RealField2D& f);

/// Largest shell index needed so that chi0 plus shells 0..J cover every
/// bracket value on the grid.
int shell_count(const SpectralGrid& g);
/// max over the lattice of |chi0 + sum_{j<=J} chi_j - 1|.
double partition_deviation(const SpectralGrid& g);

struct ShellEnergy {
  double N;  ///< 0 labels the low block
  double energy;
};

/// ||P_N u||^2 for the low block and every shell. With `sharp`, the weights
/// chi^2 / sum chi^2 are used so the energies add up to ||u||^2.
std::vector<ShellEnergy> shell_spectrum(const RealField2D& u, bool sharp = false);

}  // namespace zk
