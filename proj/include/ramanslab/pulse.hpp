#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "ramanslab/slab_optics.hpp"

namespace ramanslab {

/// Gaussian input pulse A0 exp(-t^2 / 2 t0^2) exp(-i omega0 t).
struct PulseConfig {
  double A0 = 1.0;
  double t0 = 20.0e-6;     // seconds
  double omega0 = 1.0e15;  // rad/s, same carrier as the slab
  double span = 8.0;       // half-width of the spectral window, units of 1/t0
  std::size_t n_samples = 1u << 14;  // time samples
  std::size_t n_spectral = 1025;     // quadrature nodes across the window
  double time_halfwidth = 6.0;       // time window is [-k t0, k t0]

  void validate() const;
};

/// Spectrum of the input pulse, (A0 t0 / 2 sqrt(pi)) exp(-t0^2 (omega-omega0)^2 / 2).
double gaussian_spectrum(double omega, const PulseConfig& cfg);
/// Same, as a function of the offset omega - omega0.
double gaussian_spectrum_offset(double delta_omega, const PulseConfig& cfg);

/// Uniform probe-detuning nodes (units of gamma) spanning carrier +/- span/t0.
std::vector<double> synthesis_grid(const PulseConfig& cfg, double gamma_unit,
                                   double carrier_delta_p);

/// Baseband envelope sum_k w_k E(delta_k) coef_k exp(-i delta_k t) by
/// trapezoidal quadrature over a uniform grid of offsets delta_k (rad/s).
std::vector<Complex> synthesize_envelope(std::span<const double> delta_omega,
                                         std::span<const Complex> coef,
                                         const PulseConfig& cfg,
                                         std::span<const double> times);

struct Trace {
  std::vector<Complex> envelope;
  std::vector<double> intensity;  // normalised to a peak of exactly 1
  double peak_time_gamma = 0.0;
  double rms_width_gamma = 0.0;
};

struct TimeSeries {
  std::vector<double> times_s;
  std::vector<double> times_gamma;
  Trace incident;
  Trace reflected;
  Trace transmitted;
};

/// Incident, reflected and transmitted traces from a response sampled on a
/// uniform grid covering the pulse window (see synthesis_grid).
TimeSeries synthesize(const SpectralResponse& response, const PulseConfig& cfg);

/// Time of the intensity maximum, refined by a three-point parabola.
/// Throws EdgePeak if the maximum is within two samples of either end.
double peak_time(std::span<const double> times, std::span<const double> intensity);

/// Intensity-weighted rms duration.
double rms_width(std::span<const double> times, std::span<const double> intensity);

/// |width(trace) - width(reference)| / width(reference).
double distortion_metric(const Trace& trace, const Trace& reference);

inline constexpr double kDistortionWarning = 0.1;

}  // namespace ramanslab
