#pragma once

#include <cmath>

// Scalar symbols of the Zakharov-Kuznetsov linear flow. Everything here is a
// plain function of frequencies, templated on the scalar so the same formulas
// serve double-precision grids and long-double certification code.

namespace zk {

/// Dispersion relation w(xi, mu) = xi (xi^2 + mu^2).
template <typename Scalar>
constexpr Scalar omega(Scalar xi, Scalar mu) {
  return xi * (xi * xi + mu * mu);
}

/// Anisotropic modulus |(xi, mu)| = sqrt(3 xi^2 + mu^2).
template <typename Scalar>
Scalar aniso_modulus(Scalar xi, Scalar mu) {
  using std::sqrt;
  return sqrt(Scalar(3) * xi * xi + mu * mu);
}

template <typename Scalar>
constexpr Scalar aniso_modulus_sq(Scalar xi, Scalar mu) {
  return Scalar(3) * xi * xi + mu * mu;
}

/// Japanese bracket <a> = (1 + a^2)^{1/2}.
template <typename Scalar>
Scalar japanese(Scalar a) {
  using std::sqrt;
  return sqrt(Scalar(1) + a * a);
}

/// <|(xi, mu)|>, the weight of the anisotropic Sobolev scale.
template <typename Scalar>
Scalar sobolev_bracket(Scalar xi, Scalar mu) {
  using std::sqrt;
  return sqrt(Scalar(1) + aniso_modulus_sq(xi, mu));
}

/// |3 xi^2 - mu^2|; a quarter of |det Hess w|.
template <typename Scalar>
Scalar k_symbol(Scalar xi, Scalar mu) {
  using std::abs;
  return abs(Scalar(3) * xi * xi - mu * mu);
}

/// Resonance H = w(k1 + k2) - w(k1) - w(k2).
template <typename Scalar>
Scalar resonance(Scalar xi1, Scalar mu1, Scalar xi2, Scalar mu2) {
  return omega(xi1 + xi2, mu1 + mu2) - omega(xi1, mu1) - omega(xi2, mu2);
}

/// d/dmu1 of H(xi1, xi - xi1, mu1, mu - mu1) at fixed output (xi, mu).
/// Equals -(2 xi1 mu1 - 2 xi2 mu2) with (xi2, mu2) = (xi - xi1, mu - mu1).
template <typename Scalar>
Scalar resonance_dmu1(Scalar xi1, Scalar mu1, Scalar xi2, Scalar mu2) {
  return Scalar(2) * xi2 * mu2 - Scalar(2) * xi1 * mu1;
}

/// d/dxi1 of H(xi1, xi - xi1, mu1, mu - mu1) at fixed output:
/// |(xi2, mu2)|^2 - |(xi1, mu1)|^2.
template <typename Scalar>
Scalar resonance_dxi1(Scalar xi1, Scalar mu1, Scalar xi2, Scalar mu2) {
  return aniso_modulus_sq(xi2, mu2) - aniso_modulus_sq(xi1, mu1);
}

}  // namespace zk
