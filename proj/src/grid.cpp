#include "zk/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "zk/symbols.hpp"

namespace zk {

namespace {
std::mutex planner_mutex;

fftw_plan as_plan(void* p) { return static_cast<fftw_plan>(p); }
}  // namespace

SpectralGrid::SpectralGrid(int nx, int ny, double box_length_x, double box_length_y)
    : nx_(nx), ny_(ny), lx_(box_length_x), ly_(box_length_y) {
  if (nx < 8 || ny < 8 || nx % 2 || ny % 2)
    throw Error(ErrorKind::InvalidArgument, "nx and ny must be even and >= 8");
  if (!(lx_ > 0) || !(ly_ > 0))
    throw Error(ErrorKind::InvalidArgument, "box lengths must be positive");

  const int nk = nky();
  omega_.resize(nx_, nk);
  bracket_sq_.resize(nx_, nk);
  mask_.resize(nx_, nk);
  for (int r = 0; r < nx_; ++r)
    for (int c = 0; c < nk; ++c) {
      omega_(r, c) = omega(xi(r), mu(c));
      bracket_sq_(r, c) = 1.0 + aniso_modulus_sq(xi(r), mu(c));
      mask_(r, c) = dealiased(r, c) ? 1.0 : 0.0;
    }

  RealArray rbuf(nx_, ny_);
  Spectrum cbuf(nx_, nk);
  auto* cptr = reinterpret_cast<fftw_complex*>(cbuf.data());
  std::lock_guard lock(planner_mutex);
  plan_r2c_ = fftw_plan_dft_r2c_2d(nx_, ny_, rbuf.data(), cptr, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_c2r_ = fftw_plan_dft_c2r_2d(nx_, ny_, cptr, rbuf.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
}

SpectralGrid::~SpectralGrid() {
  std::lock_guard lock(planner_mutex);
  if (plan_r2c_) fftw_destroy_plan(as_plan(plan_r2c_));
  if (plan_c2r_) fftw_destroy_plan(as_plan(plan_c2r_));
}

void SpectralGrid::forward(const RealArray& in, Spectrum& out) const {
  out.resize(nx_, nky());
  fftw_execute_dft_r2c(as_plan(plan_r2c_), const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void SpectralGrid::inverse(const Spectrum& in, RealArray& out) const {
  Spectrum scratch = in;  // c2r overwrites its input
  out.resize(nx_, ny_);
  fftw_execute_dft_c2r(as_plan(plan_c2r_), reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.data());
  out *= 1.0 / (double(nx_) * ny_);
}

double SpectralGrid::spectral_quadrature() const {
  const double n = double(nx_) * ny_;
  return area() / (n * n);
}

GridPtr make_grid(int nx, int ny, double box_length_x, double box_length_y) {
  return std::make_shared<const SpectralGrid>(nx, ny, box_length_x, box_length_y);
}

namespace multipliers {

namespace {
template <typename F>
Multiplier build(const SpectralGrid& g, F&& symbol) {
  Multiplier m;
  m.values.resize(g.nx(), g.nky());
  m.singular.setConstant(g.nx(), g.nky(), false);
  for (int r = 0; r < g.nx(); ++r)
    for (int c = 0; c < g.nky(); ++c) {
      bool sing = false;
      m.values(r, c) = symbol(g.xi(r), g.mu(c), sing);
      if (sing) {
        m.singular(r, c) = true;
        m.values(r, c) = 0.0;
      }
    }
  return m;
}

double real_power(double base, double p, bool& sing) {
  if (base == 0.0) {
    if (p < 0) sing = true;
    return p == 0 ? 1.0 : 0.0;
  }
  return std::pow(base, p);
}

void zero_nyquist(const SpectralGrid& g, Multiplier& m) {
  m.values.row(g.nx() / 2).setZero();
  m.values.col(g.ny() / 2).setZero();
}
}  // namespace

Multiplier sobolev(const SpectralGrid& g, double s) {
  return build(g, [s](double xi, double mu, bool&) {
    return Complex(std::pow(1.0 + aniso_modulus_sq(xi, mu), 0.5 * s));
  });
}

Multiplier k_power(const SpectralGrid& g, double theta) {
  return build(g, [theta](double xi, double mu, bool& sing) {
    return Complex(real_power(k_symbol(xi, mu), theta, sing));
  });
}

Multiplier dx_power(const SpectralGrid& g, double a) {
  return build(g, [a](double xi, double, bool& sing) {
    return Complex(real_power(std::abs(xi), a, sing));
  });
}

Multiplier dy_power(const SpectralGrid& g, double a) {
  return build(g, [a](double, double mu, bool& sing) {
    return Complex(real_power(std::abs(mu), a, sing));
  });
}

Multiplier modulus_derivative(const SpectralGrid& g, MultiIndex i) {
  return build(g, [i](double xi, double mu, bool&) {
    return Complex(std::pow(std::abs(xi), i.i1) * std::pow(std::abs(mu), i.i2));
  });
}

Multiplier partial_x(const SpectralGrid& g) { return partial(g, {1, 0}); }

Multiplier partial(const SpectralGrid& g, MultiIndex i) {
  Multiplier m = build(g, [i](double xi, double mu, bool&) {
    return std::pow(Complex(0, xi), i.i1) * std::pow(Complex(0, mu), i.i2);
  });
  if (i.order() > 0) zero_nyquist(g, m);
  return m;
}

}  // namespace multipliers

RealField2D::RealField2D(GridPtr grid)
    : grid_(std::move(grid)), values_(RealArray::Zero(grid_->nx(), grid_->ny())) {}

RealField2D::RealField2D(GridPtr grid, RealArray values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.rows() != grid_->nx() || values_.cols() != grid_->ny())
    throw Error(ErrorKind::InvalidArgument, "field shape does not match grid");
}

RealField2D RealField2D::from_spectrum(GridPtr grid, const Spectrum& spec) {
  RealArray v;
  grid->inverse(spec, v);
  RealField2D f(grid, std::move(v));
  f.spectrum_ = spec;
  return f;
}

const Spectrum& RealField2D::spectrum() const {
  if (!spectrum_) {
    Spectrum s;
    grid_->forward(values_, s);
    spectrum_ = std::move(s);
  }
  return *spectrum_;
}

double spectral_l2_sq(const SpectralGrid& g, const Spectrum& s) {
  double sum = 0.0;
  for (int r = 0; r < g.nx(); ++r)
    for (int c = 0; c < g.nky(); ++c) sum += g.column_weight(c) * std::norm(s(r, c));
  return g.spectral_quadrature() * sum;
}

double spectral_weighted_l2_sq(const SpectralGrid& g, const Spectrum& s, const RealArray& weight) {
  double sum = 0.0;
  for (int r = 0; r < g.nx(); ++r)
    for (int c = 0; c < g.nky(); ++c)
      sum += g.column_weight(c) * weight(r, c) * std::norm(s(r, c));
  return g.spectral_quadrature() * sum;
}

Spectrum apply_multiplier(const SpectralGrid& g, const Spectrum& s, const Multiplier& m) {
  if (m.singular.any()) {
    const double scale = s.abs().maxCoeff();
    for (int r = 0; r < g.nx(); ++r)
      for (int c = 0; c < g.nky(); ++c)
        if (m.singular(r, c) && std::abs(s(r, c)) > 1e-14 * scale)
          throw Error(ErrorKind::ZeroModeSingularity,
                      "negative power of a vanishing symbol on a nonzero mode");
  }
  return s * m.values;
}

RealField2D apply_multiplier(const RealField2D& f, const Multiplier& m) {
  return RealField2D::from_spectrum(f.grid_ptr(), apply_multiplier(f.grid(), f.spectrum(), m));
}

double l2_norm(const RealField2D& f) { return std::sqrt(spectral_l2_sq(f.grid(), f.spectrum())); }

double sobolev_norm(const SpectralGrid& g, const Spectrum& spec, double s) {
  if (s == 0.0) return std::sqrt(spectral_l2_sq(g, spec));
  RealArray w = g.bracket_sq_table().pow(s);
  return std::sqrt(spectral_weighted_l2_sq(g, spec, w));
}

double sobolev_norm(const RealField2D& f, double s) {
  return sobolev_norm(f.grid(), f.spectrum(), s);
}

void hermitianize(const SpectralGrid& g, Spectrum& s) {
  s.row(g.nx() / 2).setZero();
  s.col(g.ny() / 2).setZero();
  s(0, 0) = s(0, 0).real();
  for (int r = 1; r < g.nx() / 2; ++r) s(g.nx() - r, 0) = std::conj(s(r, 0));
}

void dealias(const SpectralGrid& g, Spectrum& s) { s *= g.dealias_mask().cast<Complex>(); }

double energy_outside_band(const SpectralGrid& g, const Spectrum& s) {
  const double total = spectral_l2_sq(g, s);
  if (total == 0.0) return 0.0;
  RealArray out = 1.0 - g.dealias_mask();
  return spectral_weighted_l2_sq(g, s, out) / total;
}

}  // namespace zk
