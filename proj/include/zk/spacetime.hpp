#pragma once

#include <vector>

#include "zk/grid.hpp"

namespace zk {

/// Uniform time window: samples t_k = t_min + k dt, k < nt, treated as one
/// period of length nt dt for temporal transforms.
struct TimeWindow {
  double t_min = -2.0;
  double t_max = 3.0;
  int nt = 256;

  double dt() const { return (t_max - t_min) / nt; }
  double t(int k) const { return t_min + k * dt(); }
};

class SpaceTimeField {
 public:
  SpaceTimeField(GridPtr grid, TimeWindow window);

  const SpectralGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const TimeWindow& window() const { return window_; }
  int nt() const { return window_.nt; }
  double t(int k) const { return window_.t(k); }

  RealArray& slice(int k) { return slices_[k]; }
  const RealArray& slice(int k) const { return slices_[k]; }
  RealField2D field_at(int k) const { return RealField2D(grid_, slices_[k]); }

  double max_abs() const;

 private:
  GridPtr grid_;
  TimeWindow window_;
  std::vector<RealArray> slices_;
};

/// Space-time spectrum. Entry (m, s) is stored at m * modes() + s, where s
/// runs over the half spectrum row-major and m is the FFT-order time index.
class SpaceTimeSpectrum {
 public:
  SpaceTimeSpectrum(GridPtr grid, TimeWindow window);

  const SpectralGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const TimeWindow& window() const { return window_; }
  int nt() const { return window_.nt; }
  int modes() const { return grid_->nx() * grid_->nky(); }

  Complex& operator()(int m, int s) { return data_[std::size_t(m) * modes() + s]; }
  const Complex& operator()(int m, int s) const { return data_[std::size_t(m) * modes() + s]; }
  Complex* data() { return data_.data(); }
  const Complex* data() const { return data_.data(); }

  /// tau - omega for entry (m, s). The temporal lattice only fixes tau modulo
  /// 2 pi / dt; the representative closest to omega(xi, mu) is used.
  double modulation(int m, int s) const;
  double tau(int m, int s) const;

 private:
  GridPtr grid_;
  TimeWindow window_;
  std::vector<Complex> data_;
};

SpaceTimeSpectrum transform(const SpaceTimeField& f);
SpaceTimeField inverse_transform(const SpaceTimeSpectrum& F);

/// In-place temporal FFT over all spatial modes (sign -1 forward, +1 backward,
/// unnormalized).
void temporal_fft(SpaceTimeSpectrum& F, int sign);

/// P_N applied slice by slice.
SpaceTimeField project_P(const SpaceTimeField& f, double N);
/// Q_L: multiplication by chi_L(<tau - omega>).
SpaceTimeField project_Q(const SpaceTimeField& f, double L);
/// Q for the low modulation block chi0.
SpaceTimeField project_Q_low(const SpaceTimeField& f);

}  // namespace zk
