#include "zk/spacetime.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "zk/dyadic.hpp"
#include "zk/symbols.hpp"

namespace zk {

SpaceTimeField::SpaceTimeField(GridPtr grid, TimeWindow window)
    : grid_(std::move(grid)), window_(window) {
  if (window_.nt < 2 || window_.nt % 2 || !(window_.t_max > window_.t_min))
    throw Error(ErrorKind::InvalidArgument, "time window needs even nt and t_max > t_min");
  slices_.assign(window_.nt, RealArray::Zero(grid_->nx(), grid_->ny()));
}

double SpaceTimeField::max_abs() const {
  double m = 0.0;
  for (const auto& s : slices_) m = std::max(m, s.abs().maxCoeff());
  return m;
}

SpaceTimeSpectrum::SpaceTimeSpectrum(GridPtr grid, TimeWindow window)
    : grid_(std::move(grid)), window_(window) {
  data_.assign(std::size_t(window_.nt) * modes(), Complex(0.0));
}

double SpaceTimeSpectrum::modulation(int m, int s) const {
  const int nt = window_.nt;
  const double period = window_.t_max - window_.t_min;
  const double big = 2.0 * M_PI * nt / period;
  const int ms = m < nt / 2 ? m : m - nt;
  const double w = grid_->omega_table()(s / grid_->nky(), s % grid_->nky());
  double sigma = 2.0 * M_PI * ms / period - w;
  sigma -= big * std::floor(sigma / big + 0.5);
  return sigma;
}

double SpaceTimeSpectrum::tau(int m, int s) const {
  return modulation(m, s) + grid_->omega_table()(s / grid_->nky(), s % grid_->nky());
}

namespace {
std::mutex plan_mutex;
}

void temporal_fft(SpaceTimeSpectrum& F, int sign) {
  const int nt = F.nt(), S = F.modes();
  auto* p = reinterpret_cast<fftw_complex*>(F.data());
  fftw_plan plan;
  {
    std::lock_guard lock(plan_mutex);
    std::vector<Complex> tmp(std::size_t(nt) * S);
    auto* q = reinterpret_cast<fftw_complex*>(tmp.data());
    plan = fftw_plan_many_dft(1, &nt, S, q, nullptr, S, 1, q, nullptr, S, 1,
                              sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  fftw_execute_dft(plan, p, p);
  std::lock_guard lock(plan_mutex);
  fftw_destroy_plan(plan);
}

SpaceTimeSpectrum transform(const SpaceTimeField& f) {
  SpaceTimeSpectrum F(f.grid_ptr(), f.window());
  const int S = F.modes();
  Spectrum sp;
  for (int k = 0; k < f.nt(); ++k) {
    f.grid().forward(f.slice(k), sp);
    std::copy(sp.data(), sp.data() + S, F.data() + std::size_t(k) * S);
  }
  temporal_fft(F, -1);
  return F;
}

SpaceTimeField inverse_transform(const SpaceTimeSpectrum& F) {
  SpaceTimeSpectrum G = F;
  temporal_fft(G, +1);
  SpaceTimeField f(F.grid_ptr(), F.window());
  const int S = F.modes();
  const double inv_nt = 1.0 / F.nt();
  Spectrum sp(F.grid().nx(), F.grid().nky());
  for (int k = 0; k < F.nt(); ++k) {
    std::copy(G.data() + std::size_t(k) * S, G.data() + std::size_t(k + 1) * S, sp.data());
    sp *= inv_nt;
    F.grid().inverse(sp, f.slice(k));
  }
  return f;
}

SpaceTimeField project_P(const SpaceTimeField& f, double N) {
  const Multiplier m = shell_multiplier(f.grid(), N);
  SpaceTimeField out(f.grid_ptr(), f.window());
  Spectrum sp;
  for (int k = 0; k < f.nt(); ++k) {
    f.grid().forward(f.slice(k), sp);
    f.grid().inverse(apply_multiplier(f.grid(), sp, m), out.slice(k));
  }
  return out;
}

namespace {
template <typename F>
SpaceTimeField modulation_multiply(const SpaceTimeField& f, F&& cut) {
  SpaceTimeSpectrum S = transform(f);
  for (int m = 0; m < S.nt(); ++m)
    for (int s = 0; s < S.modes(); ++s) S(m, s) *= cut(japanese(S.modulation(m, s)));
  return inverse_transform(S);
}
}  // namespace

SpaceTimeField project_Q(const SpaceTimeField& f, double L) {
  const int j = dyadic_log2(L);
  return modulation_multiply(f, [j](double b) { return chi_j(j, b); });
}

SpaceTimeField project_Q_low(const SpaceTimeField& f) {
  return modulation_multiply(f, [](double b) { return chi0(b); });
}

}  // namespace zk
