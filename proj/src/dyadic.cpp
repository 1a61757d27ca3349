#include "zk/dyadic.hpp"

#include <cmath>

#include "zk/symbols.hpp"

namespace zk {

namespace {
double g_exp(double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; }
constexpr double kLo = 5.0 / 4.0;
constexpr double kHi = 8.0 / 5.0;
}  // namespace

double smoothstep(double x) {
  if (x <= 0) return 0.0;
  if (x >= 1) return 1.0;
  const double a = g_exp(x), b = g_exp(1.0 - x);
  return a / (a + b);
}

double chi0(double r) { return 1.0 - smoothstep((r - kLo) / (kHi - kLo)); }

double chi(double r) { return chi0(r / 2.0) - chi0(r); }

double chi_j(int j, double r) { return chi(std::ldexp(r, -j)); }

double chi_N(double N, double r) { return chi_j(dyadic_log2(N), r); }

double phi(double t) { return smoothstep(t + 1.0) * (1.0 - smoothstep(t - 1.0)); }

double phi_T(double t, double T) { return phi(t / T); }

int dyadic_log2(double N) {
  int e = 0;
  const double m = std::frexp(N, &e);
  if (!(N >= 1) || m != 0.5) throw Error(ErrorKind::InvalidArgument, "N must be a power of two >= 1");
  return e - 1;
}

bool in_sign_set(SignSet s, double xi1, double mu1, double xi2, double mu2) {
  const double px = xi1 * xi2, pm = mu1 * mu2;
  switch (s) {
    case SignSet::None: return true;
    case SignSet::S1: return (px > 0 && pm < 0) || (px < 0 && pm > 0);
    case SignSet::S2: return px < 0 && pm < 0;
  }
  return false;
}

namespace {
template <typename F>
Multiplier radial(const SpectralGrid& g, F&& f) {
  Multiplier m;
  m.values.resize(g.nx(), g.nky());
  m.singular.setConstant(g.nx(), g.nky(), false);
  for (int r = 0; r < g.nx(); ++r)
    for (int c = 0; c < g.nky(); ++c) m.values(r, c) = f(std::sqrt(g.bracket_sq_table()(r, c)));
  return m;
}
}  // namespace

Multiplier shell_multiplier(const SpectralGrid& g, double N) {
  const int j = dyadic_log2(N);
  return radial(g, [j](double b) { return chi_j(j, b); });
}

Multiplier low_multiplier(const SpectralGrid& g) {
  return radial(g, [](double b) { return chi0(b); });
}

RealField2D project_P(const RealField2D& f, double N) {
  return apply_multiplier(f, shell_multiplier(f.grid(), N));
}

RealField2D project_P_low(const RealField2D& f) {
  return apply_multiplier(f, low_multiplier(f.grid()));
}

int shell_count(const SpectralGrid& g) {
  const double bmax = std::sqrt(g.bracket_sq_table().maxCoeff());
  int J = 0;
  while (kLo * std::ldexp(1.0, J + 1) < bmax) ++J;
  return J;
}

double partition_deviation(const SpectralGrid& g) {
  const int J = shell_count(g);
  double dev = 0.0;
  for (int r = 0; r < g.nx(); ++r)
    for (int c = 0; c < g.nky(); ++c) {
      const double b = std::sqrt(g.bracket_sq_table()(r, c));
      double sum = chi0(b);
      for (int j = 0; j <= J; ++j) sum += chi_j(j, b);
      dev = std::max(dev, std::abs(sum - 1.0));
    }
  return dev;
}

std::vector<ShellEnergy> shell_spectrum(const RealField2D& u, bool sharp) {
  const auto& g = u.grid();
  const int J = shell_count(g);
  const auto& spec = u.spectrum();
  std::vector<double> energy(J + 2, 0.0);
  std::vector<double> w(J + 2);
  for (int r = 0; r < g.nx(); ++r)
    for (int c = 0; c < g.nky(); ++c) {
      const double b = std::sqrt(g.bracket_sq_table()(r, c));
      w[0] = chi0(b);
      for (int j = 0; j <= J; ++j) w[j + 1] = chi_j(j, b);
      double norm = 0.0;
      for (double x : w) norm += x * x;
      const double a = g.column_weight(c) * std::norm(spec(r, c));
      for (int k = 0; k < J + 2; ++k) energy[k] += a * (sharp ? w[k] * w[k] / norm : w[k] * w[k]);
    }
  std::vector<ShellEnergy> out;
  out.reserve(J + 2);
  for (int k = 0; k < J + 2; ++k)
    out.push_back({k == 0 ? 0.0 : std::ldexp(1.0, k - 1), g.spectral_quadrature() * energy[k]});
  return out;
}

}  // namespace zk
