#pragma once

#include <optional>

#include "zk/grid.hpp"

namespace zk {

/// M(u) = 1/2 int u^2.
double mass(const RealField2D& u);
/// E(u) = 1/2 int |grad u|^2 - 1/3 int u^3, the Hamiltonian of the flow.
double energy(const RealField2D& u);
/// The two parts of E separately: 1/2 ||grad u||^2 and -1/3 int u^3.
double gradient_energy(const RealField2D& u);
double cubic_energy(const RealField2D& u);

/// ||u||_{H^1}^2 / (1 + E + M^2); empty when the denominator is <= 0.
std::optional<double> gn_h1_bound_check(const RealField2D& u);

struct ConservedRecord {
  double t = 0;
  double mass = 0;
  double energy = 0;
  double h1 = 0;
  double hs = 0;
  std::optional<double> gn_ratio;
};

ConservedRecord conserved_record(const RealField2D& u, double t, double s);

}  // namespace zk
