#include <fftw3.h>

#include <algorithm>
#include <cmath>

#include "zk/lab.hpp"
#include "zk/rng.hpp"
#include "zk/symbols.hpp"

namespace zk::lab {

Lattice adapted_lattice(int n, double N_max, double L_max) {
  return {6.4 * N_max / n, 6.4 * L_max / n};
}

void LabField::add_column(Column c) {
  const auto k = key(c.i, c.j);
  if (index_.count(k)) throw Error(ErrorKind::InvalidArgument, "duplicate lab column");
  index_[k] = cols_.size();
  cols_.push_back(std::move(c));
}

const Column* LabField::find(int i, int j) const {
  auto it = index_.find(key(i, j));
  return it == index_.end() ? nullptr : &cols_[it->second];
}

Column* LabField::find(int i, int j) {
  auto it = index_.find(key(i, j));
  return it == index_.end() ? nullptr : &cols_[it->second];
}

std::size_t LabField::size() const {
  std::size_t n = 0;
  for (const auto& c : cols_) n += c.v.size();
  return n;
}

double LabField::l2_norm() const { return xsb_norm(0.0, 0.0); }

double LabField::xsb_norm(double s, double b) const {
  double sum = 0.0;
  for (const auto& c : cols_) {
    const double x = xi(c.i), y = mu(c.j);
    const double ws = s == 0 ? 1.0 : std::pow(1.0 + aniso_modulus_sq(x, y), s);
    const double w0 = omega(x, y);
    for (std::size_t a = 0; a < c.v.size(); ++a) {
      const double sig = tau(c.m0 + long(a)) - w0;
      const double wb = b == 0 ? 1.0 : std::pow(1.0 + sig * sig, b);
      sum += ws * wb * std::norm(c.v[a]);
    }
  }
  return std::sqrt(cell() * sum);
}

Complex LabField::dot(const LabField& other) const {
  Complex sum = 0.0;
  for (const auto& c : cols_) {
    const Column* d = other.find(c.i, c.j);
    if (!d) continue;
    const long lo = std::max(c.m0, d->m0);
    const long hi = std::min(c.m0 + long(c.v.size()), d->m0 + long(d->v.size()));
    for (long m = lo; m < hi; ++m) sum += std::conj(c.v[m - c.m0]) * d->v[m - d->m0];
  }
  return cell() * sum;
}

void LabField::scale(Complex a) {
  for (auto& c : cols_)
    for (auto& x : c.v) x *= a;
}

LabField LabField::zeros_like() const {
  LabField out(lat_);
  for (const auto& c : cols_) out.add_column({c.i, c.j, c.m0, std::vector<Complex>(c.v.size())});
  return out;
}

void LabField::hermitianize() {
  const LabField orig = *this;
  for (auto& c : cols_) {
    const Column* d = orig.find(-c.i, -c.j);
    for (std::size_t a = 0; a < c.v.size(); ++a) {
      const long m = c.m0 + long(a);
      Complex mirror = 0.0;
      if (d) {
        const long mm = -m - d->m0;
        if (mm >= 0 && mm < long(d->v.size())) mirror = std::conj(d->v[mm]);
      }
      c.v[a] = d ? 0.5 * (c.v[a] + mirror) : Complex(0.0);
    }
  }
}

bool in_cone(double xi, double mu, double alpha) {
  const double a = std::sqrt(3.0) * std::abs(xi);
  const double m = std::abs(mu);
  return std::sqrt(1.0 - alpha) * a <= m && m <= a / std::sqrt(1.0 - alpha);
}

PairMask sign_mask(SignSet s, std::optional<double> cone_alpha) {
  return [s, cone_alpha](double x1, double m1, double x2, double m2) {
    if (!in_sign_set(s, x1, m1, x2, m2)) return false;
    if (cone_alpha && !(in_cone(x1, m1, *cone_alpha) && in_cone(x2, m2, *cone_alpha)))
      return false;
    return true;
  };
}

namespace {
std::int64_t pack(int i, int j) { return (std::int64_t(i) << 32) ^ std::uint32_t(j); }
}  // namespace

LabField convolve(const LabField& a, const LabField& b, const PairMask* mask) {
  LabField out(a.lattice());
  struct Range {
    int i, j;
    long lo, hi;
  };
  std::unordered_map<std::int64_t, Range> ranges;
  auto allowed = [&](const Column& c1, const Column& c2) {
    return !mask || (*mask)(a.xi(c1.i), a.mu(c1.j), a.xi(c2.i), a.mu(c2.j));
  };
  for (const auto& c1 : a.columns())
    for (const auto& c2 : b.columns()) {
      if (c1.v.empty() || c2.v.empty() || !allowed(c1, c2)) continue;
      const int i = c1.i + c2.i, j = c1.j + c2.j;
      const long lo = c1.m0 + c2.m0;
      const long hi = lo + long(c1.v.size() + c2.v.size()) - 1;
      auto [it, fresh] = ranges.try_emplace(pack(i, j), Range{i, j, lo, hi});
      if (!fresh) {
        it->second.lo = std::min(it->second.lo, lo);
        it->second.hi = std::max(it->second.hi, hi);
      }
    }
  for (const auto& [k, r] : ranges)
    out.add_column({r.i, r.j, r.lo, std::vector<Complex>(std::size_t(r.hi - r.lo))});
  for (const auto& c1 : a.columns())
    for (const auto& c2 : b.columns()) {
      if (c1.v.empty() || c2.v.empty() || !allowed(c1, c2)) continue;
      Column* o = out.find(c1.i + c2.i, c1.j + c2.j);
      Complex* base = o->v.data() + (c1.m0 + c2.m0 - o->m0);
      for (std::size_t p = 0; p < c1.v.size(); ++p) {
        const Complex x = c1.v[p];
        if (x == Complex(0.0)) continue;
        Complex* dst = base + p;
        for (std::size_t q = 0; q < c2.v.size(); ++q) dst[q] += x * c2.v[q];
      }
    }
  out.scale(a.cell());
  return out;
}

LabField convolve_adjoint(const LabField& w, const LabField& b, const LabField& support,
                          const PairMask* mask) {
  LabField out = support.zeros_like();
  for (auto& c1 : out.columns())
    for (const auto& c2 : b.columns()) {
      if (mask && !(*mask)(w.xi(c1.i), w.mu(c1.j), w.xi(c2.i), w.mu(c2.j))) continue;
      const Column* o = w.find(c1.i + c2.i, c1.j + c2.j);
      if (!o) continue;
      const long olen = long(o->v.size());
      for (std::size_t p = 0; p < c1.v.size(); ++p) {
        const long start = c1.m0 + long(p) + c2.m0 - o->m0;
        Complex acc = 0.0;
        for (std::size_t q = 0; q < c2.v.size(); ++q) {
          const long idx = start + long(q);
          if (idx < 0) continue;
          if (idx >= olen) break;
          acc += std::conj(c2.v[q]) * o->v[idx];
        }
        c1.v[p] += acc;
      }
    }
  out.scale(w.cell());
  return out;
}

double sigma_max(double L) {
  const double r = 3.2 * L;
  return std::sqrt(r * r - 1.0);
}

double sigma_min(double L) {
  const double r = 1.25 * L;
  return std::sqrt(r * r - 1.0);
}

LabField block_support(const DyadicBlockSpec& spec, const Lattice& lat) {
  LabField out(lat);
  const double rmax = 3.2 * spec.N;
  const int J = int(std::ceil(rmax / lat.h));
  const int I = int(std::ceil(rmax / std::sqrt(3.0) / lat.h));
  const double smax = sigma_max(spec.L);
  for (int i = -I; i <= I; ++i)
    for (int j = -J; j <= J; ++j) {
      const double x = lat.h * i, y = lat.h * j;
      const double cn = chi_N(spec.N, sobolev_bracket(x, y));
      if (cn <= 0) continue;
      const double w = omega(x, y);
      const long lo = long(std::ceil((w - smax) / lat.h_tau));
      const long hi = long(std::floor((w + smax) / lat.h_tau));
      if (hi < lo) continue;
      Column c{i, j, lo, std::vector<Complex>(std::size_t(hi - lo + 1))};
      bool any = false;
      for (long m = lo; m <= hi; ++m) {
        const double cl = chi_N(spec.L, japanese(lat.h_tau * m - w));
        c.v[m - lo] = cn * cl;
        any = any || cl > 0;
      }
      if (any) out.add_column(std::move(c));
    }
  return out;
}

LabField make_block(const DyadicBlockSpec& spec, const Lattice& lat, std::uint64_t seed,
                    BlockKind kind) {
  LabField f = block_support(spec, lat);
  Rng rng(seed, 0xb10c);
  double cx = 0, cy = 0, rad = 0;
  const std::size_t ncol = f.columns().size();
  if (kind == BlockKind::Cap && ncol > 0) {
    const auto& c = f.columns()[std::size_t(rng.uniform() * double(ncol)) % ncol];
    cx = f.xi(c.i);
    cy = f.mu(c.j);
    rad = 2 * lat.h * std::pow(spec.N / lat.h, rng.uniform());
  }
  for (auto& c : f.columns()) {
    bool keep = true;
    if (kind == BlockKind::Cap) {
      const double x = f.xi(c.i), y = f.mu(c.j);
      keep = std::hypot(x - cx, y - cy) <= rad || std::hypot(x + cx, y + cy) <= rad;
    }
    for (auto& x : c.v) {
      const Complex z = rng.complex_normal();
      x *= !keep ? Complex(0.0)
                 : kind == BlockKind::White   ? z
                 : kind == BlockKind::Aligned ? Complex(std::abs(z))
                                              : Complex(1.0);
    }
  }
  f.hermitianize();
  const double n = f.l2_norm();
  if (!(n > 0)) throw Error(ErrorKind::EmptyShell, "no lattice point in the block");
  f.scale(1.0 / n);
  return f;
}

DenseField::DenseField(double h, int K) : h_(h), K_(K) {
  const std::size_t n = side();
  data_.assign(n * n * n, Complex(0.0));
}

double DenseField::xsb_norm(double s, double b, int px) const {
  double sum = 0.0;
  for (int m = -K_; m <= K_; ++m)
    for (int i = -K_; i <= K_; ++i)
      for (int j = -K_; j <= K_; ++j) {
        const double a = std::norm(at(m, i, j));
        if (a == 0.0) continue;
        const double x = h_ * i, y = h_ * j, t = h_ * m;
        const double sig = t - omega(x, y);
        double w = std::pow(1.0 + aniso_modulus_sq(x, y), s) * std::pow(1.0 + sig * sig, b);
        if (px) w *= std::pow(x * x, px);
        sum += w * a;
      }
  return std::sqrt(h_ * h_ * h_ * sum);
}

void DenseField::hermitianize() {
  const std::vector<Complex> orig = data_;
  for (int m = -K_; m <= K_; ++m)
    for (int i = -K_; i <= K_; ++i)
      for (int j = -K_; j <= K_; ++j)
        at(m, i, j) = 0.5 * (orig[idx(m, i, j)] + std::conj(orig[idx(-m, -i, -j)]));
}

DenseField convolve(const DenseField& a, const DenseField& b) {
  if (a.K() != b.K() || a.h() != b.h())
    throw Error(ErrorKind::InvalidArgument, "dense convolution needs matching lattices");
  const int K = a.K(), n = a.side(), P = 4 * K + 2;
  const std::size_t total = std::size_t(P) * P * P;
  std::vector<Complex> A(total), B(total);
  auto place = [&](const DenseField& f, std::vector<Complex>& dst) {
    for (int m = 0; m < n; ++m)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          dst[(std::size_t(m) * P + i) * P + j] = f.at(m - K, i - K, j - K);
  };
  place(a, A);
  place(b, B);
  auto* pa = reinterpret_cast<fftw_complex*>(A.data());
  auto* pb = reinterpret_cast<fftw_complex*>(B.data());
  fftw_plan fwd = fftw_plan_dft_3d(P, P, P, pa, pa, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute_dft(fwd, pa, pa);
  fftw_execute_dft(fwd, pb, pb);
  fftw_destroy_plan(fwd);
  for (std::size_t q = 0; q < total; ++q) A[q] *= B[q];
  fftw_plan bwd = fftw_plan_dft_3d(P, P, P, pa, pa, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_execute_dft(bwd, pa, pa);
  fftw_destroy_plan(bwd);
  DenseField out(a.h(), 2 * K);
  const double scale = a.h() * a.h() * a.h() / double(total);
  for (int m = -2 * K; m <= 2 * K; ++m)
    for (int i = -2 * K; i <= 2 * K; ++i)
      for (int j = -2 * K; j <= 2 * K; ++j)
        out.at(m, i, j) = scale * A[(std::size_t(m + 2 * K) * P + (i + 2 * K)) * P + (j + 2 * K)];
  return out;
}

DenseField dense_smooth_field(double h, int K, std::uint64_t seed) {
  Rng rng(seed, 0x5a11);
  const double E = h * K;
  DenseField f(h, K);
  for (int bump = 0; bump < 3; ++bump) {
    const double xc = rng.uniform(-0.2, 0.2) * E;
    const double yc = rng.uniform(-0.25, 0.25) * E;
    double tc = omega(xc, yc) + rng.uniform(-1.0, 1.0);
    tc = std::clamp(tc, -0.7 * E, 0.7 * E);
    const double r = rng.uniform(0.25, 0.6);
    const Complex amp = rng.complex_normal();
    for (int m = -K; m <= K; ++m)
      for (int i = -K; i <= K; ++i)
        for (int j = -K; j <= K; ++j) {
          const double dx = h * i - xc, dy = h * j - yc, dt = h * m - tc;
          const double d2 = (dx * dx + dy * dy + dt * dt) / (2.0 * r * r);
          if (d2 < 40) f.at(m, i, j) += amp * std::exp(-d2);
        }
  }
  f.hermitianize();
  return f;
}

DenseField dense_block_field(double h, int K, const DyadicBlockSpec& spec, std::uint64_t seed,
                             bool aligned) {
  Rng rng(seed, 0xd0b1);
  DenseField f(h, K);
  bool any = false;
  for (int m = -K; m <= K; ++m)
    for (int i = -K; i <= K; ++i)
      for (int j = -K; j <= K; ++j) {
        const double x = h * i, y = h * j;
        const double c = chi_N(spec.N, sobolev_bracket(x, y)) *
                         chi_N(spec.L, japanese(h * m - omega(x, y)));
        const Complex z = rng.complex_normal();
        if (c <= 0) continue;
        any = true;
        f.at(m, i, j) = c * (aligned ? Complex(std::abs(z)) : z);
      }
  if (!any) throw Error(ErrorKind::EmptyShell, "no lattice point in the block");
  f.hermitianize();
  return f;
}

}  // namespace zk::lab
