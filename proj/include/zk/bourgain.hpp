#pragma once

#include <cstdint>
#include <optional>

#include "zk/grid.hpp"
#include "zk/spacetime.hpp"

namespace zk {

/// The "+" in exponents such as 1/2+ is realised as +0.01.
inline constexpr double kPlus = 0.01;

/// ||f||_{X^{s,b}}. Throws support leakage when the first or last time sample
/// exceeds 1e-10 of max|f|, unless `periodic`.
double xsb_norm(const SpaceTimeField& f, double s, double b, bool periodic = false);
double xsb_norm(const SpaceTimeSpectrum& F, double s, double b);

/// ||phi_T||_{H^b_t} on a lattice 4x finer than the window's.
double phi_T_hb_norm(double T, double b, const TimeWindow& w, int refine = 4);

/// phi_T(t) W(t) f0 sampled on the window.
SpaceTimeField truncated_linear_flow(const RealField2D& f0, double T, const TimeWindow& w);

/// phi_T(t) int_0^t W(t - t') g(t') dt', integrating the trigonometric
/// interpolant of g exactly.
SpaceTimeField truncated_duhamel(const SpaceTimeField& g, double T);

/// ||phi_T W f0||_{X^{s,b}} / (||phi_T||_{H^b} ||f0||_{H^s}).
std::optional<double> linear_identity_ratio(const RealField2D& f0, double s, double b, double T,
                                            const TimeWindow& w);

/// ||phi_T W f0||_{X^{s,b}} / (T^{1/2-b} ||f0||_{H^s}).
std::optional<double> check_linear_estimate(const RealField2D& f0, double s, double b, double T,
                                            const TimeWindow& w);

/// ||truncated_duhamel(g)||_{X^{s,b}} / (T^{1-b+b'} ||g||_{X^{s,b'}}).
std::optional<double> check_duhamel_estimate(const SpaceTimeField& g, double s, double b,
                                             double bprime, double T);

/// ||phi_T u||_{X^{s,b'}} / (T^{b-b'} ||phi_T u||_{X^{s,b}}).
std::optional<double> check_time_shrink(const SpaceTimeField& u, double s, double b, double bprime,
                                        double T);

enum class EmbeddingMode { L4, SupHs };

/// L4: ||f||_{L^4} / ||f||_{X^{0,5/12+}}. SupHs: sup_t ||f(t)||_{H^s} / ||f||_{X^{s,1/2+}}.
std::optional<double> check_L4_embedding(const SpaceTimeField& f, EmbeddingMode mode = EmbeddingMode::L4,
                                         double s = 0.0);

/// Smooth random real field: Gaussian spectral envelope of the given width
/// around the origin, band-limited and free of Nyquist content.
RealField2D random_smooth_field(const GridPtr& g, std::uint64_t seed, double spectral_width);

/// phi(t) times a random superposition of a few linear waves with detuned
/// frequencies, built from random_smooth_field data.
SpaceTimeField random_smooth_spacetime(const GridPtr& g, const TimeWindow& w, std::uint64_t seed,
                                       double spectral_width);

}  // namespace zk
