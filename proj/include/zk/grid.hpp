#pragma once

#include <Eigen/Core>
#include <complex>
#include <memory>
#include <optional>

#include "zk/error.hpp"

namespace zk {

using Complex = std::complex<double>;

/// Physical samples, nx rows by ny columns, y index fastest.
using RealArray = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
/// Half spectrum of a real field: nx rows by ny/2+1 columns.
using Spectrum = Eigen::Array<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct MultiIndex {
  int i1 = 0;
  int i2 = 0;

  int order() const { return i1 + i2; }
  bool operator<=(const MultiIndex& o) const { return i1 <= o.i1 && i2 <= o.i2; }
  bool operator==(const MultiIndex& o) const = default;
};

class SpectralGrid {
 public:
  SpectralGrid(int nx, int ny, double box_length_x, double box_length_y);
  ~SpectralGrid();
  SpectralGrid(const SpectralGrid&) = delete;
  SpectralGrid& operator=(const SpectralGrid&) = delete;

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nky() const { return ny_ / 2 + 1; }
  double box_length_x() const { return lx_; }
  double box_length_y() const { return ly_; }
  double area() const { return lx_ * ly_; }
  double dx() const { return lx_ / nx_; }
  double dy() const { return ly_ / ny_; }
  double x(int i) const { return i * dx(); }
  double y(int j) const { return j * dy(); }

  /// Signed wavenumber index of spectral row r; the Nyquist row maps to -nx/2.
  int kx_index(int r) const { return r < nx_ / 2 ? r : r - nx_; }
  int ky_index(int c) const { return c; }
  double xi(int r) const { return 2.0 * M_PI * kx_index(r) / lx_; }
  double mu(int c) const { return 2.0 * M_PI * c / ly_; }
  bool nyquist(int r, int c) const { return r == nx_ / 2 || c == ny_ / 2; }

  /// Multiplicity of a half-spectrum column in full-lattice sums.
  double column_weight(int c) const { return (c == 0 || c == ny_ / 2) ? 1.0 : 2.0; }
  /// 2/3 rule: keep the mode iff 3|k| < n on both axes.
  bool dealiased(int r, int c) const {
    return 3 * std::abs(kx_index(r)) < nx_ && 3 * c < ny_;
  }

  const RealArray& omega_table() const { return omega_; }
  const RealArray& bracket_sq_table() const { return bracket_sq_; }
  const RealArray& dealias_mask() const { return mask_; }

  /// Forward transform, unnormalized.
  void forward(const RealArray& in, Spectrum& out) const;
  /// Inverse transform including the 1/(nx ny) factor.
  void inverse(const Spectrum& in, RealArray& out) const;

  /// (Area / (nx ny))^2 times the weighted sum of |f_hat|^2 equals the
  /// quadrature of |f|^2.
  double spectral_quadrature() const;

 private:
  int nx_, ny_;
  double lx_, ly_;
  RealArray omega_, bracket_sq_, mask_;
  void* plan_r2c_ = nullptr;
  void* plan_c2r_ = nullptr;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

GridPtr make_grid(int nx, int ny, double box_length_x, double box_length_y);

/// A complex symbol on the half-spectrum lattice. `singular` marks lattice
/// points where the symbol is undefined (negative power of a vanishing base);
/// inputs must have no content there.
struct Multiplier {
  Spectrum values;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> singular;
};

namespace multipliers {
/// S(D)^s = <|(D_x, D_y)|>^s.
Multiplier sobolev(const SpectralGrid& g, double s);
/// K(D)^theta with K = |3 xi^2 - mu^2|.
Multiplier k_power(const SpectralGrid& g, double theta);
/// |D_x|^a and |D_y|^a.
Multiplier dx_power(const SpectralGrid& g, double a);
Multiplier dy_power(const SpectralGrid& g, double a);
/// D^i = |xi|^i1 |mu|^i2.
Multiplier modulus_derivative(const SpectralGrid& g, MultiIndex i);
/// Signed derivatives: d_x has symbol i xi; d^i has (i xi)^i1 (i mu)^i2.
/// Nyquist lines are zeroed.
Multiplier partial_x(const SpectralGrid& g);
Multiplier partial(const SpectralGrid& g, MultiIndex i);
}  // namespace multipliers

/// Real scalar field with a lazily cached spectrum.
class RealField2D {
 public:
  explicit RealField2D(GridPtr grid);
  RealField2D(GridPtr grid, RealArray values);
  static RealField2D from_spectrum(GridPtr grid, const Spectrum& spec);

  const SpectralGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const RealArray& values() const { return values_; }
  /// Mutable access drops the cached spectrum.
  RealArray& values_mut() {
    spectrum_.reset();
    return values_;
  }
  const Spectrum& spectrum() const;

 private:
  GridPtr grid_;
  RealArray values_;
  mutable std::optional<Spectrum> spectrum_;
};

/// Quadrature of |f|^2 computed from a half spectrum.
double spectral_l2_sq(const SpectralGrid& g, const Spectrum& s);
/// Same with a real weight table.
double spectral_weighted_l2_sq(const SpectralGrid& g, const Spectrum& s,
                               const RealArray& weight);

Spectrum apply_multiplier(const SpectralGrid& g, const Spectrum& s, const Multiplier& m);
RealField2D apply_multiplier(const RealField2D& f, const Multiplier& m);

double l2_norm(const RealField2D& f);
/// ||S(D)^s f||_{L^2} by Plancherel.
double sobolev_norm(const RealField2D& f, double s);
double sobolev_norm(const SpectralGrid& g, const Spectrum& spec, double s);

/// Make the self-conjugate column (and row) entries consistent with a real
/// field and zero the Nyquist lines.
void hermitianize(const SpectralGrid& g, Spectrum& s);

/// Zero every mode outside the 2/3 band.
void dealias(const SpectralGrid& g, Spectrum& s);
/// Fraction of L^2 mass outside the 2/3 band.
double energy_outside_band(const SpectralGrid& g, const Spectrum& s);

}  // namespace zk
