#include <algorithm>
#include <cmath>

#include "zk/lab.hpp"
#include "zk/rng.hpp"
#include "zk/symbols.hpp"

namespace zk::lab {

std::string to_string(BlockMode m) {
  switch (m) {
    case BlockMode::Measure: return "measure";
    case BlockMode::Measure2: return "measure2";
    case BlockMode::Measure3: return "measure3";
  }
  return "?";
}

std::string to_string(Bilinear e) {
  switch (e) {
    case Bilinear::B1: return "b1";
    case Bilinear::B3: return "b3";
    case Bilinear::B2: return "b2";
  }
  return "?";
}

double block_bound(const DyadicBlockSpec& s1, const DyadicBlockSpec& s2, BlockMode mode) {
  const double N1 = s1.N, N2 = s2.N, L1 = s1.L, L2 = s2.L;
  switch (mode) {
    case BlockMode::Measure:
      return std::sqrt(std::max(L1, L2)) * std::max(N1, N2);
    case BlockMode::Measure2:
      if (!(N2 >= 4 * N1 || N1 >= 4 * N2))
        throw Error(ErrorKind::PreconditionViolated, "measure2 needs N2 >= 4 N1 or N1 >= 4 N2");
      return std::sqrt(std::max(N1, N2)) / std::min(N1, N2) * std::sqrt(L1 * L2);
    case BlockMode::Measure3:
      if (!(N1 / 2 <= N2 && N2 <= 2 * N1))
        throw Error(ErrorKind::PreconditionViolated, "measure3 needs N1/2 <= N2 <= 2 N1");
      if (s1.sign == SignSet::None)
        throw Error(ErrorKind::PreconditionViolated, "measure3 needs a sign-set selector");
      return std::sqrt(L1 * L2 / N1);
  }
  return 0.0;
}

namespace {
std::optional<PairMask> mode_mask(const DyadicBlockSpec& s1, BlockMode mode, double alpha) {
  if (mode != BlockMode::Measure3) return std::nullopt;
  return sign_mask(s1.sign, s1.sign == SignSet::S2 ? std::optional<double>(alpha) : std::nullopt);
}

void restrict_to(LabField& f, const LabField& support) {
  for (std::size_t c = 0; c < f.columns().size(); ++c) {
    auto& col = f.columns()[c];
    const auto& sup = support.columns()[c];
    for (std::size_t a = 0; a < col.v.size(); ++a)
      if (sup.v[a] == Complex(0.0)) col.v[a] = 0.0;
  }
}

LabField random_on(const LabField& support, Rng& rng) {
  LabField f = support.zeros_like();
  for (std::size_t c = 0; c < f.columns().size(); ++c)
    for (std::size_t a = 0; a < f.columns()[c].v.size(); ++a)
      if (support.columns()[c].v[a] != Complex(0.0)) f.columns()[c].v[a] = rng.complex_normal();
  f.scale(1.0 / f.l2_norm());
  return f;
}
}  // namespace

BlockResult block_product_ratio(const DyadicBlockSpec& s1, const DyadicBlockSpec& s2,
                                BlockMode mode, int trials, int n, std::uint64_t seed,
                                double alpha) {
  const double bound = block_bound(s1, s2, mode);
  const Lattice lat = adapted_lattice(n, std::max(s1.N, s2.N), std::max(s1.L, s2.L));
  const auto mask = mode_mask(s1, mode, alpha);
  BlockResult res;
  for (int t = 0; t < trials; ++t) {
    const auto kind = BlockKind(t % 3);
    const std::uint64_t base = Rng::mix(seed + 0x9e37ULL * std::uint64_t(t));
    const LabField u1 = make_block(s1, lat, base, kind);
    const LabField u2 = make_block(s2, lat, base ^ 0x5555, kind);
    const LabField w = convolve(u1, u2, mask ? &*mask : nullptr);
    const double r = w.l2_norm() / (bound * u1.l2_norm() * u2.l2_norm());
    res.ratios.push_back(r);
    res.max_ratio = std::max(res.max_ratio, r);
  }
  return res;
}

double block_product_exhaustive(const DyadicBlockSpec& s1, const DyadicBlockSpec& s2,
                                BlockMode mode, int n, std::uint64_t seed, double alpha,
                                int restarts, int sweeps) {
  const double bound = block_bound(s1, s2, mode);
  const Lattice lat = adapted_lattice(n, std::max(s1.N, s2.N), std::max(s1.L, s2.L));
  const auto mask = mode_mask(s1, mode, alpha);
  const PairMask* mp = mask ? &*mask : nullptr;
  // convolve_adjoint takes the mask with the free factor first.
  std::optional<PairMask> swapped;
  if (mask) swapped = [m = *mask](double x1, double m1, double x2, double m2) { return m(x2, m2, x1, m1); };
  const PairMask* mq = swapped ? &*swapped : nullptr;
  const LabField sup1 = block_support(s1, lat), sup2 = block_support(s2, lat);
  if (sup1.size() == 0 || sup2.size() == 0) throw Error(ErrorKind::EmptyShell, "empty block");
  Rng rng(seed, 0xe4a);
  double best = 0.0;
  for (int r = 0; r < restarts; ++r) {
    LabField u1 = random_on(sup1, rng), u2 = random_on(sup2, rng);
    double value = 0.0;
    for (int s = 0; s < sweeps; ++s) {
      LabField g1 = convolve_adjoint(convolve(u1, u2, mp), u2, sup1, mp);
      restrict_to(g1, sup1);
      g1.scale(1.0 / g1.l2_norm());
      u1 = std::move(g1);
      LabField g2 = convolve_adjoint(convolve(u1, u2, mp), u1, sup2, mq);
      restrict_to(g2, sup2);
      g2.scale(1.0 / g2.l2_norm());
      u2 = std::move(g2);
      value = convolve(u1, u2, mp).l2_norm();
    }
    best = std::max(best, value);
  }
  return best / bound;
}

void check_bilinear_params(Bilinear e, const BilinearParams& p) {
  switch (e) {
    case Bilinear::B1:
      if (!(p.s > 0.5)) throw Error(ErrorKind::ParameterRange, "b1 needs s > 1/2");
      break;
    case Bilinear::B3:
      if (!(p.s > 1)) throw Error(ErrorKind::ParameterRange, "b3 needs s > 1");
      break;
    case Bilinear::B2:
      if (!(p.delta < 1.0 / 12.0)) throw Error(ErrorKind::ParameterRange, "b2 needs delta < 1/12");
      if (!(p.rho > 0 && (p.allow_outside_range || p.rho < 0.5 - 6 * p.delta)))
        throw Error(ErrorKind::ParameterRange, "b2 needs 0 < rho < 1/2 - 6 delta");
      break;
  }
  if (!(p.delta > 0)) throw Error(ErrorKind::ParameterRange, "delta must be positive");
}

TrialRecord bilinear_trial(Bilinear e, const BilinearParams& p, const DenseField& u,
                           const DenseField& v, std::uint64_t seed) {
  const double b = 0.5 + p.delta, bp = -0.5 + 2 * p.delta;
  TrialRecord rec;
  rec.estimate = to_string(e);
  rec.seed = seed;
  rec.params = "s=" + std::to_string(p.s) + ";delta=" + std::to_string(p.delta) +
               ";rho=" + std::to_string(p.rho);
  const DenseField w = convolve(u, v);
  switch (e) {
    case Bilinear::B1:
      rec.lhs = w.xsb_norm(p.s, bp, 1);
      rec.rhs = u.xsb_norm(p.s, b) * v.xsb_norm(p.s, b);
      break;
    case Bilinear::B3:
      rec.lhs = w.xsb_norm(p.s, bp, 1);
      rec.rhs = u.xsb_norm(p.s, b) * v.xsb_norm(1, b) + u.xsb_norm(1, b) * v.xsb_norm(p.s, b);
      break;
    case Bilinear::B2:
      rec.lhs = w.xsb_norm(-p.rho, bp);
      rec.rhs = u.xsb_norm(-p.rho, b) * v.xsb_norm(-p.rho, b);
      break;
  }
  if (rec.rhs > 0) rec.ratio = rec.lhs / rec.rhs;
  return rec;
}

namespace {
DenseField corpus_field(int kind, double h, int K, std::uint64_t seed) {
  if (kind == 0) return dense_smooth_field(h, K, seed);
  Rng rng(seed, 0xc0);
  const DyadicBlockSpec spec{rng.uniform() < 0.5 ? 1.0 : 2.0, rng.uniform() < 0.5 ? 1.0 : 2.0};
  try {
    return dense_block_field(h, K, spec, seed, kind == 2);
  } catch (const Error&) {
    return dense_smooth_field(h, K, seed);
  }
}
}  // namespace

BilinearResult bilinear_constant(Bilinear e, const BilinearParams& p, int trials, int n,
                                 std::uint64_t seed) {
  check_bilinear_params(e, p);
  const int K = n / 2;
  const double h = p.extent / K;
  BilinearResult res;
  std::vector<double> ratios;
  for (int t = 0; t < trials; ++t) {
    const int kind = t % 3;
    const std::uint64_t s = Rng::mix(seed + 0x51ULL * std::uint64_t(t + 1));
    const DenseField u = corpus_field(kind, h, K, s);
    const DenseField v = corpus_field(kind, h, K, Rng::mix(s + 1));
    TrialRecord rec = bilinear_trial(e, p, u, v, s);
    rec.params += ";n=" + std::to_string(n) + ";kind=" + std::to_string(kind);
    if (rec.ratio) {
      ratios.push_back(*rec.ratio);
      res.max_ratio = std::max(res.max_ratio, *rec.ratio);
    }
    res.trials.push_back(std::move(rec));
  }
  if (!ratios.empty()) {
    std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2, ratios.end());
    res.median_ratio = ratios[ratios.size() / 2];
  }
  return res;
}

MeasureResult count_measure_A(const MeasureQuery& q) {
  const double hmax = std::min(q.N1, q.N2) / 16.0;
  const double h = q.h > 0 ? q.h : hmax;
  if (h > hmax * (1 + 1e-12))
    throw Error(ErrorKind::Resolution, "lattice spacing exceeds min(N1, N2) / 16");
  const double s1max = sigma_max(q.L1), s2max = sigma_max(q.L2);
  const double w0 = omega(q.xi, q.mu);
  const double rmax = 3.2 * q.N1;
  const int J = int(std::ceil(rmax / h)), I = int(std::ceil(rmax / std::sqrt(3.0) / h));
  const std::optional<double> cone =
      q.sign == SignSet::S2 ? std::optional<double>(q.alpha) : std::nullopt;
  MeasureResult res;
  for (int i = -I - 1; i <= I; ++i)
    for (int j = -J - 1; j <= J; ++j) {
      const double x1 = h * (i + 0.5), y1 = h * (j + 0.5);
      const double x2 = q.xi - x1, y2 = q.mu - y1;
      if (!in_sign_set(q.sign, x1, y1, x2, y2)) continue;
      if (cone && !(in_cone(x1, y1, *cone) && in_cone(x2, y2, *cone))) continue;
      if (chi_N(q.N1, sobolev_bracket(x1, y1)) <= 0) continue;
      if (chi_N(q.N2, sobolev_bracket(x2, y2)) <= 0) continue;
      const double w1 = omega(x1, y1), w2 = omega(x2, y2);
      const double H = w0 - w1 - w2;
      if (std::abs(q.tau - w0 + H) <= s1max + s2max) ++res.count_B;
      const long mlo = long(std::floor((w1 - s1max) / h - 0.5));
      const long mhi = long(std::ceil((w1 + s1max) / h - 0.5));
      for (long m = mlo; m <= mhi; ++m) {
        const double t1 = h * (m + 0.5);
        if (chi_N(q.L1, japanese(t1 - w1)) <= 0) continue;
        if (chi_N(q.L2, japanese(q.tau - t1 - w2)) <= 0) continue;
        ++res.count_A;
      }
    }
  res.estimate_A = double(res.count_A) * h * h * h;
  res.estimate_B = double(res.count_B) * h * h;
  return res;
}

double probe_s2_derivative(double N1, double alpha, int samples, std::uint64_t seed) {
  Rng rng(seed, 0xd5);
  double worst = std::numeric_limits<double>::infinity();
  auto cone_point = [&](double N, double sx, double sy) {
    // bracket in the chi_N support, direction inside the alpha cone
    for (;;) {
      const double b = rng.uniform(1.25 * N, 3.2 * N);
      const double r = std::sqrt(b * b - 1.0);
      const double ratio = rng.uniform(std::sqrt(1 - alpha), 1 / std::sqrt(1 - alpha));
      // |mu| = ratio sqrt3 |xi| and 3 xi^2 + mu^2 = r^2
      const double ax = r / std::sqrt(3.0 * (1 + ratio * ratio));
      const double x = sx * ax, y = sy * ratio * std::sqrt(3.0) * ax;
      if (in_cone(x, y, alpha)) return std::pair{x, y};
    }
  };
  int found = 0;
  for (long tries = 0; found < samples && tries < 1000L * samples; ++tries) {
    const double N2 = N1 * std::pow(2.0, double(long(rng.uniform(0, 3)) - 1));
    const double sx = rng.uniform() < 0.5 ? -1 : 1, sy = rng.uniform() < 0.5 ? -1 : 1;
    const auto [x1, y1] = cone_point(N1, sx, sy);
    const auto [x2, y2] = cone_point(N2, -sx, -sy);
    if (sobolev_bracket(x1 + x2, y1 + y2) < 1.25 * N1 / 2) continue;
    ++found;
    worst = std::min(worst, std::abs(resonance_dxi1(x1, y1, x2, y2)) / (N1 * N1));
  }
  if (found == 0) throw Error(ErrorKind::EmptyShell, "no admissible S2 sample");
  return worst;
}

}  // namespace zk::lab
