#include "zk/invariants.hpp"

namespace zk {

double mass(const RealField2D& u) { return 0.5 * spectral_l2_sq(u.grid(), u.spectrum()); }

double gradient_energy(const RealField2D& u) {
  const auto& g = u.grid();
  RealArray k2(g.nx(), g.nky());
  for (int r = 0; r < g.nx(); ++r)
    for (int c = 0; c < g.nky(); ++c) k2(r, c) = g.xi(r) * g.xi(r) + g.mu(c) * g.mu(c);
  return 0.5 * spectral_weighted_l2_sq(g, u.spectrum(), k2);
}

double cubic_energy(const RealField2D& u) {
  const auto& g = u.grid();
  const double cell = g.dx() * g.dy();
  return -cell * u.values().cube().sum() / 3.0;
}

double energy(const RealField2D& u) { return gradient_energy(u) + cubic_energy(u); }

std::optional<double> gn_h1_bound_check(const RealField2D& u) {
  const double m = mass(u);
  const double den = 1.0 + energy(u) + m * m;
  if (!(den > 0)) return std::nullopt;
  const double h1 = sobolev_norm(u, 1.0);
  return h1 * h1 / den;
}

ConservedRecord conserved_record(const RealField2D& u, double t, double s) {
  ConservedRecord rec;
  rec.t = t;
  rec.mass = mass(u);
  rec.energy = energy(u);
  rec.h1 = sobolev_norm(u, 1.0);
  rec.hs = sobolev_norm(u, s);
  rec.gn_ratio = gn_h1_bound_check(u);
  return rec;
}

}  // namespace zk
