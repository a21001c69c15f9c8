#include "ramanslab/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ramanslab/errors.hpp"

namespace ramanslab {

namespace {

constexpr double kEdgeAmplitude = 1e-6;
constexpr double kEdgeVariation = 1e-2;

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

Trace make_trace(std::vector<Complex> envelope, std::span<const double> times_gamma) {
  Trace tr;
  tr.intensity.resize(envelope.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < envelope.size(); ++i) {
    tr.intensity[i] = std::norm(envelope[i]);
    peak = std::max(peak, tr.intensity[i]);
  }
  if (peak > 0.0) {
    for (double& v : tr.intensity) v /= peak;
  }
  tr.envelope = std::move(envelope);
  tr.peak_time_gamma = peak_time(times_gamma, tr.intensity);
  tr.rms_width_gamma = rms_width(times_gamma, tr.intensity);
  return tr;
}

}  // namespace

void PulseConfig::validate() const {
  if (!(t0 > 0.0)) throw ValidationError("t0 > 0");
  if (!(omega0 > 0.0)) throw ValidationError("omega0 > 0");
  if (!(span >= 4.0)) throw ValidationError("span >= 4");
  if (n_samples < (1u << 10)) throw ValidationError("n_samples >= 1024");
  if (n_spectral < 3) throw ValidationError("n_spectral >= 3");
  if (!(time_halfwidth > 0.0)) throw ValidationError("time_halfwidth > 0");
}

double gaussian_spectrum_offset(double delta_omega, const PulseConfig& cfg) {
  const double x = cfg.t0 * delta_omega;
  return cfg.A0 * cfg.t0 / (2.0 * std::sqrt(std::numbers::pi)) * std::exp(-0.5 * x * x);
}

double gaussian_spectrum(double omega, const PulseConfig& cfg) {
  return gaussian_spectrum_offset(omega - cfg.omega0, cfg);
}

std::vector<double> synthesis_grid(const PulseConfig& cfg, double gamma_unit,
                                   double carrier_delta_p) {
  cfg.validate();
  const double half = cfg.span / (cfg.t0 * gamma_unit);
  std::vector<double> grid = linspace(-half, half, cfg.n_spectral);
  for (double& x : grid) x += carrier_delta_p;
  if (cfg.n_spectral % 2 == 1) grid[cfg.n_spectral / 2] = carrier_delta_p;
  return grid;
}

std::vector<Complex> synthesize_envelope(std::span<const double> delta_omega,
                                         std::span<const Complex> coef,
                                         const PulseConfig& cfg,
                                         std::span<const double> times) {
  const std::size_t nf = delta_omega.size();
  if (nf < 2 || coef.size() != nf) {
    throw ValidationError("spectral nodes and coefficients have matching size >= 2");
  }
  const double step = (delta_omega.back() - delta_omega.front()) /
                      static_cast<double>(nf - 1);

  std::vector<Complex> weighted(nf);
  for (std::size_t k = 0; k < nf; ++k) {
    const double w = (k == 0 || k == nf - 1) ? 0.5 * step : step;
    weighted[k] = w * gaussian_spectrum_offset(delta_omega[k], cfg) * coef[k];
  }

  std::vector<Complex> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    // exp(-i delta_k t) by recurrence along the uniform grid.
    Complex phasor = std::polar(1.0, -delta_omega.front() * t);
    const Complex advance = std::polar(1.0, -step * t);
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < nf; ++k) {
      acc += weighted[k] * phasor;
      phasor *= advance;
    }
    out[i] = acc;
  }
  return out;
}

TimeSeries synthesize(const SpectralResponse& response, const PulseConfig& cfg) {
  cfg.validate();
  const double gamma = response.gamma_unit;
  const double carrier = response.delta_p_carrier;
  const double half = cfg.span / (cfg.t0 * gamma);  // units of gamma
  const auto& pts = response.points;

  // Nodes inside the window.
  const double slack = 1e-9 * half;
  std::vector<std::size_t> inside;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (std::abs(pts[i].delta_p - carrier) <= half + slack) inside.push_back(i);
  }
  if (inside.size() < 3 ||
      pts[inside.front()].delta_p > carrier - half + slack ||
      pts[inside.back()].delta_p < carrier + half - slack) {
    throw WindowTooNarrow("spectral response does not cover carrier +/- span/t0");
  }
  const double step = (pts[inside.back()].delta_p - pts[inside.front()].delta_p) /
                      static_cast<double>(inside.size() - 1);
  for (std::size_t k = 1; k < inside.size(); ++k) {
    const double gap = pts[inside[k]].delta_p - pts[inside[k - 1]].delta_p;
    if (std::abs(gap - step) > 1e-6 * step) {
      throw ValidationError("synthesis grid uniform across the pulse window");
    }
  }

  // The window may only clip the spectrum where the response is flat.
  if (std::exp(-0.5 * cfg.span * cfg.span) > kEdgeAmplitude) {
    const std::size_t mid = inside[inside.size() / 2];
    for (std::size_t edge : {inside.front(), inside.back()}) {
      for (Channel ch : {Channel::Reflection, Channel::Transmission}) {
        const Complex ce = ch == Channel::Reflection ? pts[edge].r : pts[edge].t;
        const Complex cc = ch == Channel::Reflection ? pts[mid].r : pts[mid].t;
        if (std::abs(cc) > 0.0 &&
            std::abs(std::abs(ce) / std::abs(cc) - 1.0) > kEdgeVariation) {
          throw WindowTooNarrow("coefficient varies at the window edge while the "
                                "spectrum there is not negligible");
        }
      }
    }
  }

  std::vector<double> offsets(inside.size());
  std::vector<Complex> unit(inside.size(), Complex{1.0, 0.0});
  std::vector<Complex> refl(inside.size());
  std::vector<Complex> trans(inside.size());
  for (std::size_t k = 0; k < inside.size(); ++k) {
    const auto& p = pts[inside[k]];
    offsets[k] = (p.delta_p - carrier) * gamma;
    refl[k] = p.r;
    trans[k] = p.t;
  }

  TimeSeries ts;
  const double tmax = cfg.time_halfwidth * cfg.t0;
  ts.times_s = linspace(-tmax, tmax, cfg.n_samples);
  ts.times_gamma.resize(ts.times_s.size());
  std::transform(ts.times_s.begin(), ts.times_s.end(), ts.times_gamma.begin(),
                 [gamma](double t) { return t * gamma; });

  ts.incident = make_trace(synthesize_envelope(offsets, unit, cfg, ts.times_s), ts.times_gamma);
  ts.reflected = make_trace(synthesize_envelope(offsets, refl, cfg, ts.times_s), ts.times_gamma);
  ts.transmitted =
      make_trace(synthesize_envelope(offsets, trans, cfg, ts.times_s), ts.times_gamma);
  return ts;
}

double peak_time(std::span<const double> times, std::span<const double> intensity) {
  const std::size_t n = intensity.size();
  if (n != times.size() || n < 5) {
    throw ValidationError("trace has matching times and at least 5 samples");
  }
  const auto k = static_cast<std::size_t>(
      std::max_element(intensity.begin(), intensity.end()) - intensity.begin());
  if (k < 2 || k + 2 >= n) {
    throw EdgePeak("trace maximum lies at the edge of the time window");
  }
  const double a = intensity[k - 1];
  const double b = intensity[k];
  const double c = intensity[k + 1];
  const double curvature = a - 2.0 * b + c;
  if (curvature == 0.0) return times[k];
  const double dt = 0.5 * (times[k + 1] - times[k - 1]);
  return times[k] + dt * 0.5 * (a - c) / curvature;
}

double rms_width(std::span<const double> times, std::span<const double> intensity) {
  double w = 0.0;
  double m1 = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    w += intensity[i];
    m1 += intensity[i] * times[i];
  }
  if (w <= 0.0) return 0.0;
  const double mean = m1 / w;
  double m2 = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double d = times[i] - mean;
    m2 += intensity[i] * d * d;
  }
  return std::sqrt(m2 / w);
}

double distortion_metric(const Trace& trace, const Trace& reference) {
  if (reference.rms_width_gamma <= 0.0) {
    throw ValidationError("reference trace has positive width");
  }
  return std::abs(trace.rms_width_gamma - reference.rms_width_gamma) /
         reference.rms_width_gamma;
}

}  // namespace ramanslab
