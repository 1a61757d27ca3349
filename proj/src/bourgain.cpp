#include "zk/bourgain.hpp"

#include <fftw3.h>

#include <cmath>
#include <vector>

#include "zk/dyadic.hpp"
#include "zk/dynamics.hpp"
#include "zk/rng.hpp"
#include "zk/symbols.hpp"

namespace zk {

double xsb_norm(const SpaceTimeSpectrum& F, double s, double b) {
  const auto& g = F.grid();
  const int nk = g.nky();
  double sum = 0.0;
  for (int m = 0; m < F.nt(); ++m)
    for (int q = 0; q < F.modes(); ++q) {
      const Complex v = F(m, q);
      if (v == Complex(0.0)) continue;
      const int r = q / nk, c = q % nk;
      const double sig = F.modulation(m, q);
      double w = g.column_weight(c);
      if (s != 0) w *= std::pow(g.bracket_sq_table()(r, c), s);
      if (b != 0) w *= std::pow(1.0 + sig * sig, b);
      sum += w * std::norm(v);
    }
  const double n = double(g.nx()) * g.ny();
  return std::sqrt(g.area() * F.window().dt() / (F.nt() * n * n) * sum);
}

double xsb_norm(const SpaceTimeField& f, double s, double b, bool periodic) {
  if (!periodic) {
    const double top = f.max_abs();
    const double edge =
        std::max(f.slice(0).abs().maxCoeff(), f.slice(f.nt() - 1).abs().maxCoeff());
    if (edge > 1e-10 * top)
      throw Error(ErrorKind::SupportLeakage, "field does not vanish at the window edges");
  }
  return xsb_norm(transform(f), s, b);
}

double phi_T_hb_norm(double T, double b, const TimeWindow& w, int refine) {
  const int n = w.nt * refine;
  const double h = w.dt() / refine;
  std::vector<Complex> buf(n);
  for (int k = 0; k < n; ++k) buf[k] = phi_T(w.t_min + k * h, T);
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_plan plan = fftw_plan_dft_1d(n, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  const double period = n * h;
  double sum = 0.0;
  for (int m = 0; m < n; ++m) {
    const double tau = 2.0 * M_PI * (m < n / 2 ? m : m - n) / period;
    sum += std::pow(1.0 + tau * tau, b) * std::norm(buf[m]);
  }
  return std::sqrt(h / n * sum);
}

SpaceTimeField truncated_linear_flow(const RealField2D& f0, double T, const TimeWindow& w) {
  SpaceTimeField out(f0.grid_ptr(), w);
  const auto& g = f0.grid();
  for (int k = 0; k < w.nt; ++k) {
    Spectrum s = linear_propagate(g, f0.spectrum(), w.t(k)) * phi_T(w.t(k), T);
    g.inverse(s, out.slice(k));
  }
  return out;
}

SpaceTimeField truncated_duhamel(const SpaceTimeField& gfield, double T) {
  const auto& g = gfield.grid();
  const TimeWindow& w = gfield.window();
  SpaceTimeSpectrum F = transform(gfield);
  const int nt = F.nt(), S = F.modes(), nk = g.nky();
  std::vector<Complex> tail(S, 0.0), resonant(S, 0.0);
  SpaceTimeSpectrum H(gfield.grid_ptr(), w);
  for (int m = 0; m < nt; ++m)
    for (int q = 0; q < S; ++q) {
      const double sig = F.modulation(m, q);
      const double tau = F.tau(m, q);
      const Complex c = F(m, q) * std::polar(1.0 / nt, -tau * w.t_min);
      if (std::abs(sig) * (w.t_max - w.t_min) < 1e-9) {
        resonant[q] += c;
      } else {
        H(m, q) = F(m, q) / Complex(0.0, sig);
        tail[q] += c / Complex(0.0, sig);
      }
    }
  temporal_fft(H, +1);
  SpaceTimeField out(gfield.grid_ptr(), w);
  Spectrum sp(g.nx(), nk);
  for (int k = 0; k < nt; ++k) {
    const double t = w.t(k);
    const double cut = phi_T(t, T);
    for (int q = 0; q < S; ++q) {
      const int r = q / nk, c = q % nk;
      if (cut == 0.0 || g.nyquist(r, c)) {
        sp(r, c) = 0.0;
        continue;
      }
      const Complex e = std::polar(1.0, g.omega_table()(r, c) * t);
      sp(r, c) = cut * (H(k, q) / double(nt) - e * tail[q] + resonant[q] * t * e);
    }
    g.inverse(sp, out.slice(k));
  }
  return out;
}

std::optional<double> linear_identity_ratio(const RealField2D& f0, double s, double b, double T,
                                            const TimeWindow& w) {
  const double hs = sobolev_norm(f0, s);
  if (hs == 0.0) return std::nullopt;
  return xsb_norm(truncated_linear_flow(f0, T, w), s, b) / (phi_T_hb_norm(T, b, w) * hs);
}

std::optional<double> check_linear_estimate(const RealField2D& f0, double s, double b, double T,
                                            const TimeWindow& w) {
  if (b < 0 || !(T > 0) || T > 1) throw Error(ErrorKind::ParameterRange, "need b >= 0, T in (0,1]");
  const double hs = sobolev_norm(f0, s);
  if (hs == 0.0) return std::nullopt;
  return xsb_norm(truncated_linear_flow(f0, T, w), s, b) / (std::pow(T, 0.5 - b) * hs);
}

std::optional<double> check_duhamel_estimate(const SpaceTimeField& g, double s, double b,
                                             double bprime, double T) {
  if (!(bprime > -0.5 && bprime < 0 && b > 0 && b <= 1 + bprime))
    throw Error(ErrorKind::ParameterRange, "need -1/2 < b' < 0 < b <= 1 + b'");
  if (g.max_abs() == 0.0) return std::nullopt;
  const double rhs = std::pow(T, 1 - b + bprime) * xsb_norm(g, s, bprime);
  if (rhs == 0.0) return std::nullopt;
  return xsb_norm(truncated_duhamel(g, T), s, b) / rhs;
}

std::optional<double> check_time_shrink(const SpaceTimeField& u, double s, double b, double bprime,
                                        double T) {
  if (!(b - bprime > 0 && b - bprime < 0.5))
    throw Error(ErrorKind::ParameterRange, "need 0 < b - b' < 1/2");
  SpaceTimeField v = u;
  for (int k = 0; k < v.nt(); ++k) v.slice(k) *= phi_T(v.t(k), T);
  if (v.max_abs() == 0.0) return std::nullopt;
  const SpaceTimeSpectrum F = transform(v);
  const double den = std::pow(T, b - bprime) * xsb_norm(F, s, b);
  if (den == 0.0) return std::nullopt;
  return xsb_norm(F, s, bprime) / den;
}

std::optional<double> check_L4_embedding(const SpaceTimeField& f, EmbeddingMode mode, double s) {
  const double top = f.max_abs();
  if (top == 0.0) return std::nullopt;
  const auto& g = f.grid();
  if (mode == EmbeddingMode::L4) {
    double sum = 0.0;
    for (int k = 0; k < f.nt(); ++k) sum += f.slice(k).square().square().sum();
    const double l4 = std::pow(f.window().dt() * g.dx() * g.dy() * sum, 0.25);
    return l4 / xsb_norm(f, 0.0, 5.0 / 12.0 + kPlus);
  }
  double sup = 0.0;
  for (int k = 0; k < f.nt(); ++k) sup = std::max(sup, sobolev_norm(f.field_at(k), s));
  return sup / xsb_norm(f, s, 0.5 + kPlus);
}

RealField2D random_smooth_field(const GridPtr& g, std::uint64_t seed, double spectral_width) {
  Rng rng(seed, 0x5eed);
  Spectrum s(g->nx(), g->nky());
  for (int r = 0; r < g->nx(); ++r)
    for (int c = 0; c < g->nky(); ++c) {
      const double k2 = g->xi(r) * g->xi(r) + g->mu(c) * g->mu(c);
      const Complex z = rng.complex_normal();
      s(r, c) = g->dealiased(r, c) ? z * std::exp(-0.5 * k2 / (spectral_width * spectral_width))
                                   : Complex(0.0);
    }
  s(0, 0) = 0.0;
  hermitianize(*g, s);
  const double n = std::sqrt(spectral_l2_sq(*g, s));
  if (n > 0) s /= n;
  return RealField2D::from_spectrum(g, s);
}

SpaceTimeField random_smooth_spacetime(const GridPtr& g, const TimeWindow& w, std::uint64_t seed,
                                       double spectral_width) {
  constexpr int kWaves = 3;
  Rng rng(seed, 0x71de);
  std::vector<Spectrum> a, b;
  std::vector<double> nu;
  for (int j = 0; j < kWaves; ++j) {
    a.push_back(random_smooth_field(g, seed * 7 + 2 * j + 1, spectral_width).spectrum());
    b.push_back(random_smooth_field(g, seed * 7 + 2 * j + 2, spectral_width).spectrum());
    nu.push_back(rng.uniform(-3.0, 3.0));
  }
  SpaceTimeField out(g, w);
  for (int k = 0; k < w.nt; ++k) {
    const double t = w.t(k);
    const double cut = phi(t);
    if (cut == 0.0) continue;
    Spectrum acc = Spectrum::Zero(g->nx(), g->nky());
    for (int j = 0; j < kWaves; ++j)
      acc += std::cos(nu[j] * t) * a[j] + std::sin(nu[j] * t) * b[j];
    g->inverse(linear_propagate(*g, acc, t) * cut, out.slice(k));
  }
  return out;
}

}  // namespace zk
