#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "ramanslab/susceptibility.hpp"

namespace ramanslab {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

enum class ThicknessKind { Resonant, AntiResonant, Explicit };

/// Slab thickness either as a multiple of the quarter wavelength in the host
/// (resonant: 2m, anti-resonant: 2m+1) or as an explicit length.
struct ThicknessRule {
  ThicknessKind kind = ThicknessKind::Resonant;
  int m = 1500;
  double d_meters = 0.0;  // Explicit only

  static ThicknessRule resonant(int m) { return {ThicknessKind::Resonant, m, 0.0}; }
  static ThicknessRule anti_resonant(int m) {
    return {ThicknessKind::AntiResonant, m, 0.0};
  }
  static ThicknessRule explicit_length(double d) {
    return {ThicknessKind::Explicit, 0, d};
  }
};

/// A (possibly complex) optical phase written as base + offset, where the
/// base is real and its cosine/sine are held exactly. The slab phase at the
/// carrier is thousands of radians; keeping it apart from the small,
/// frequency- and chi-dependent remainder keeps phase differences between
/// neighbouring frequencies accurate to rounding of the remainder only.
struct Phase {
  double base = 0.0;
  double cos_base = 1.0;
  double sin_base = 0.0;
  Complex offset{0.0, 0.0};

  static Phase plain(Complex theta) { return {0.0, 1.0, 0.0, theta}; }
  Complex value() const { return base + offset; }
};

Complex cos(const Phase& theta);
Complex sin(const Phase& theta);

struct SlabConfig {
  double eps_b = 4.0;
  double omega0 = 1.0e15;  // rad/s
  ThicknessRule thickness = ThicknessRule::resonant(1500);
  double delta_p_carrier = 50.0;  // units of gamma

  void validate() const;

  double lambda0() const;      // 2 pi c / omega0
  double thickness_m() const;  // d in meters
  double transit_time() const { return thickness_m() / kSpeedOfLight; }
  /// sqrt(eps_b) omega0 d / c, with exact cos/sin for the resonant rules.
  Phase carrier_phase() const;
};

struct TransferMatrix {
  Complex m11, m12, m21, m22;

  Complex det() const { return m11 * m22 - m12 * m21; }
};

/// Homogeneous-layer matrix [[cos, sin/n], [-n sin, cos]] with
/// theta = (omega / c) n dz.
TransferMatrix transfer_matrix(Complex n, double omega, double dz);
TransferMatrix transfer_matrix(Complex n, const Phase& theta);

struct SlabCoefficients {
  Complex r;
  Complex t;
};

/// Reflection and transmission of a layer bounded by vacuum on both sides.
/// Throws ZeroDenominator at a lasing pole.
SlabCoefficients slab_coefficients(const TransferMatrix& m);

Complex reflection_coefficient(Complex n, double omega, double d);
Complex transmission_coefficient(Complex n, double omega, double d);

struct SpectralPoint {
  double delta_p = 0.0;  // units of gamma
  double omega = 0.0;    // rad/s
  Complex chi;
  Complex n;
  Complex r;
  Complex t;
  double phi_r = 0.0;  // unwrapped, rad
  double phi_t = 0.0;
  double R = 0.0;
  double T = 0.0;
  // Local phase derivative d(phi)/d(delta_p), i.e. delay in units of 1/gamma.
  double tau_r_gamma = 0.0;
  double tau_t_gamma = 0.0;
};

struct SpectralResponse {
  std::vector<SpectralPoint> points;
  double gamma_unit = 1.0e6;
  double omega0 = 1.0e15;
  double delta_p_carrier = 50.0;
  double transit_time = 0.0;  // d / c, seconds

  std::size_t size() const { return points.size(); }
};

/// Probe-detuning grid description. Points are anchored at the carrier so
/// that the carrier and carrier +/- k*step are exact grid nodes.
struct SweepSpec {
  double lo = 40.0;
  double hi = 60.0;
  double step = 1.0e-3;
  double refine_halfwidth = 0.5;
  int refine_factor = 10;
  // Refinement is applied when the control field is below this value.
  double refine_below_omega_c = 2.0;
};

std::vector<double> make_grid(const SweepSpec& sweep, double carrier, double omega_c);

/// Evaluates chi, n, r, t and unwrapped phases on a strictly increasing
/// grid. Per-point errors are rethrown with the offending delta_p attached.
SpectralResponse build_spectral_response(const AtomicParams& params,
                                         const SlabConfig& slab,
                                         std::span<const double> grid);

enum class Channel { Reflection, Transmission };

struct PhaseTime {
  double gamma_units = 0.0;  // tau * gamma
  double seconds = 0.0;
  double richardson_gamma = 0.0;
  bool superluminal = false;
};

/// Phase delay d(phi)/d(omega) at a grid node, by central difference with
/// step h (units of gamma). The nodes at +/-h and +/-2h must be on the grid;
/// otherwise, or if Richardson extrapolation disagrees with the plain
/// difference by more than 1e-3 relative, throws GridTooCoarse.
PhaseTime phase_time(const SpectralResponse& response, double at, Channel which,
                     double h = 1.0e-3);

}  // namespace ramanslab
