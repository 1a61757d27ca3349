#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "zk/dyadic.hpp"
#include "zk/grid.hpp"

// Frequency-space laboratory for bilinear interactions. Fields are given by
// samples of their space-time Fourier transform on a lattice
// (xi, mu, tau) = (h i, h j, h_tau m); products are exact discrete
// convolutions scaled by the cell volume h^2 h_tau.

namespace zk::lab {

struct Lattice {
  double h = 1.0;
  double h_tau = 1.0;
};

/// Spacing adapted to shells up to N_max and L_max with n points across the
/// spatial and modulation extents.
Lattice adapted_lattice(int n, double N_max, double L_max);

/// One spatial lattice point with a contiguous run of tau samples.
struct Column {
  int i = 0;
  int j = 0;
  long m0 = 0;
  std::vector<Complex> v;
};

class LabField {
 public:
  LabField() = default;
  explicit LabField(Lattice lat) : lat_(lat) {}

  const Lattice& lattice() const { return lat_; }
  double xi(int i) const { return lat_.h * i; }
  double mu(int j) const { return lat_.h * j; }
  double tau(long m) const { return lat_.h_tau * m; }
  double cell() const { return lat_.h * lat_.h * lat_.h_tau; }

  std::vector<Column>& columns() { return cols_; }
  const std::vector<Column>& columns() const { return cols_; }
  void add_column(Column c);
  const Column* find(int i, int j) const;
  Column* find(int i, int j);
  std::size_t size() const;

  double l2_norm() const;
  /// ||.||_{X^{s,b}} with weights <|(xi,mu)|>^{2s} <tau - omega>^{2b}.
  double xsb_norm(double s, double b) const;
  /// <this, other> = cell * sum conj(this) other, over common support.
  Complex dot(const LabField& other) const;

  void scale(Complex a);
  LabField zeros_like() const;
  /// Apply F(-k, -m) = conj F(k, m) by averaging each entry with its mirror.
  void hermitianize();

 private:
  static std::int64_t key(int i, int j) { return (std::int64_t(i) << 32) ^ std::uint32_t(j); }
  Lattice lat_;
  std::vector<Column> cols_;
  std::unordered_map<std::int64_t, std::size_t> index_;
};

/// Selects which (k1, k2) pairs contribute to a product.
using PairMask = std::function<bool(double xi1, double mu1, double xi2, double mu2)>;

/// Sign-set mask, optionally restricted to the cone
/// (1-a)^{1/2} sqrt3 |xi_i| <= |mu_i| <= (1-a)^{-1/2} sqrt3 |xi_i| for both inputs.
PairMask sign_mask(SignSet s, std::optional<double> cone_alpha = std::nullopt);
bool in_cone(double xi, double mu, double alpha);

/// Exact lattice convolution (a * b) scaled by the cell volume.
LabField convolve(const LabField& a, const LabField& b, const PairMask* mask = nullptr);
/// Adjoint of a -> convolve(a, b) evaluated on the support of `support`.
LabField convolve_adjoint(const LabField& w, const LabField& b, const LabField& support,
                          const PairMask* mask = nullptr);

/// Zero field covering every lattice point where chi_N(<|k|>) chi_L(<tau - omega>) > 0.
LabField block_support(const DyadicBlockSpec& spec, const Lattice& lat);
/// White: complex Gaussian coefficients. Aligned: their moduli. Cap: unit
/// coefficients on a random ball of spatial frequencies (and its mirror),
/// radius log-uniform in [2h, 2N]; a Knapp-type packet.
enum class BlockKind { White, Aligned, Cap };

/// chi_N chi_L times coefficients of the given kind, Hermitian, unit L^2
/// norm. Throws EmptyShell if the support is empty.
LabField make_block(const DyadicBlockSpec& spec, const Lattice& lat, std::uint64_t seed,
                    BlockKind kind = BlockKind::White);

enum class BlockMode { Measure, Measure2, Measure3 };
std::string to_string(BlockMode m);

/// Right-hand side factor of the block estimate (without the input norms).
/// Throws PreconditionViolated naming the failing shell relation.
double block_bound(const DyadicBlockSpec& s1, const DyadicBlockSpec& s2, BlockMode mode);

struct BlockResult {
  double max_ratio = 0.0;
  std::vector<double> ratios;
};

/// Max over trials of ||(block1)(block2)||_{L^2} / (bound ||block1|| ||block2||).
/// Trial t uses BlockKind t mod 3.
BlockResult block_product_ratio(const DyadicBlockSpec& s1, const DyadicBlockSpec& s2,
                                BlockMode mode, int trials, int n, std::uint64_t seed,
                                double alpha = 0.05);

/// sup of the same ratio over all fields supported in the two blocks,
/// estimated by alternating power iteration.
double block_product_exhaustive(const DyadicBlockSpec& s1, const DyadicBlockSpec& s2,
                                BlockMode mode, int n, std::uint64_t seed, double alpha = 0.05,
                                int restarts = 4, int sweeps = 40);

// Dense fields on a cube of half-width K in every direction, used for the
// bilinear estimates where inputs are not localized along the characteristic
// surface.
class DenseField {
 public:
  DenseField(double h, int K);

  double h() const { return h_; }
  int K() const { return K_; }
  int side() const { return 2 * K_ + 1; }
  Complex& at(int m, int i, int j) { return data_[idx(m, i, j)]; }
  const Complex& at(int m, int i, int j) const { return data_[idx(m, i, j)]; }
  std::vector<Complex>& data() { return data_; }
  const std::vector<Complex>& data() const { return data_; }

  /// Weighted norm: sum h^3 xi^{2 px} <|k|>^{2s} <tau - omega>^{2b} |F|^2.
  double xsb_norm(double s, double b, int px = 0) const;
  void hermitianize();

 private:
  std::size_t idx(int m, int i, int j) const {
    const int n = side();
    return (std::size_t(m + K_) * n + (i + K_)) * n + (j + K_);
  }
  double h_;
  int K_;
  std::vector<Complex> data_;
};

/// Linear convolution by zero-padded FFT; the output has half-width 2K.
DenseField convolve(const DenseField& a, const DenseField& b);

/// Sum of Gaussian bumps centred near the characteristic surface.
DenseField dense_smooth_field(double h, int K, std::uint64_t seed);
DenseField dense_block_field(double h, int K, const DyadicBlockSpec& spec, std::uint64_t seed,
                             bool aligned);

enum class Bilinear { B1, B3, B2 };
std::string to_string(Bilinear e);

struct BilinearParams {
  double s = 2.0;
  double delta = 1.0 / 24.0;
  double rho = 0.2;
  double extent = 6.4;
  /// Evaluate b2 even when rho >= 1/2 - 6 delta, where the estimate is not
  /// claimed; the ratio is still well defined.
  bool allow_outside_range = false;
};

struct TrialRecord {
  std::string estimate;
  std::string params;
  std::uint64_t seed = 0;
  double lhs = 0;
  double rhs = 0;
  std::optional<double> ratio;
};

struct BilinearResult {
  double max_ratio = 0.0;
  double median_ratio = 0.0;
  std::vector<TrialRecord> trials;
};

/// Checks preconditions, throwing ParameterRange with the violated one.
void check_bilinear_params(Bilinear e, const BilinearParams& p);

/// One trial: LHS / RHS for the pair (u, v); empty if RHS vanishes.
TrialRecord bilinear_trial(Bilinear e, const BilinearParams& p, const DenseField& u,
                           const DenseField& v, std::uint64_t seed);

/// The trial corpus at n points per axis: kind = trial mod 3 selects smooth
/// bumps, Gaussian blocks or phase-aligned blocks.
BilinearResult bilinear_constant(Bilinear e, const BilinearParams& p, int trials, int n,
                                 std::uint64_t seed);

/// sigma_max(L): largest |tau - omega| with chi_L(<tau - omega>) > 0.
double sigma_max(double L);
double sigma_min(double L);

struct MeasureQuery {
  double xi = 0, mu = 0, tau = 0;
  double N1 = 1, N2 = 1, L1 = 1, L2 = 1;
  double h = 0.0;  ///< 0 selects min(N1, N2) / 16
  SignSet sign = SignSet::S1;
  double alpha = 0.05;
};

struct MeasureResult {
  long count_A = 0;
  double estimate_A = 0;  ///< count_A h^3
  long count_B = 0;
  double estimate_B = 0;  ///< count_B h^2
};

/// Midpoint lattice count of the sets A and B around the target.
MeasureResult count_measure_A(const MeasureQuery& q);

/// min over sampled admissible S2-cone points of |dH/dxi1| / N1^2.
double probe_s2_derivative(double N1, double alpha, int samples, std::uint64_t seed);

}  // namespace zk::lab
