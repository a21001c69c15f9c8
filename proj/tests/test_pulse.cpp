#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ramanslab/errors.hpp"
#include "ramanslab/pulse.hpp"

using namespace ramanslab;

namespace {

constexpr double kGamma = 1e6;

// A response whose r and t are both exp(i omega tau) on the pulse window.
SpectralResponse linear_phase_response(const PulseConfig& cfg, double tau_gamma) {
  SpectralResponse resp;
  resp.gamma_unit = kGamma;
  resp.omega0 = cfg.omega0;
  resp.delta_p_carrier = 50.0;
  for (double dp : synthesis_grid(cfg, kGamma, 50.0)) {
    SpectralPoint p;
    p.delta_p = dp;
    const double offset = (dp - 50.0) * kGamma;
    p.omega = cfg.omega0 + offset;
    p.r = std::polar(1.0, offset * tau_gamma / kGamma);
    p.t = p.r;
    resp.points.push_back(p);
  }
  return resp;
}

double time_step_gamma(const TimeSeries& ts) { return ts.times_gamma[1] - ts.times_gamma[0]; }

}  // namespace

TEST_CASE("gaussian_spectrum: peak value and width") {
  PulseConfig cfg;
  const double peak = cfg.A0 * cfg.t0 / (2.0 * std::sqrt(std::numbers::pi));
  CHECK(gaussian_spectrum(cfg.omega0, cfg) == doctest::Approx(peak).epsilon(1e-15));
  CHECK(gaussian_spectrum_offset(1.0 / cfg.t0, cfg) ==
        doctest::Approx(peak * std::exp(-0.5)).epsilon(1e-14));
}

TEST_CASE("gaussian_spectrum: window captures the spectral energy") {
  // Energy of exp(-t0^2 x^2) outside |x| < span/t0 is erfc(span) of the total.
  for (double span : {4.0, 8.0}) {
    PulseConfig cfg;
    cfg.span = span;
    const auto grid = synthesis_grid(cfg, kGamma, 50.0);
    double inside = 0.0;
    const double h = (grid[1] - grid[0]) * kGamma;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double s = gaussian_spectrum_offset((grid[k] - 50.0) * kGamma, cfg);
      inside += (k == 0 || k + 1 == grid.size() ? 0.5 : 1.0) * h * s * s;
    }
    const double amp = cfg.A0 * cfg.t0 / (2.0 * std::sqrt(std::numbers::pi));
    const double total = amp * amp * std::sqrt(std::numbers::pi) / cfg.t0;
    CHECK(inside / total >= 1.0 - 1e-3);
    CHECK(inside / total == doctest::Approx(std::erf(span)).epsilon(1e-9));
  }
}

TEST_CASE("synthesize: identity coefficient keeps the peak at zero") {
  PulseConfig cfg;
  const auto ts = synthesize(linear_phase_response(cfg, 0.0), cfg);
  const double dt = time_step_gamma(ts);
  CHECK(std::abs(ts.incident.peak_time_gamma) < dt);
  CHECK(std::abs(ts.reflected.peak_time_gamma) < dt);
  CHECK(*std::max_element(ts.reflected.intensity.begin(), ts.reflected.intensity.end()) == 1.0);
  // Intensity rms width of exp(-t^2/t0^2) is t0 / sqrt(2).
  CHECK(ts.incident.rms_width_gamma ==
        doctest::Approx(cfg.t0 * kGamma / std::sqrt(2.0)).epsilon(1e-6));
  CHECK(distortion_metric(ts.reflected, ts.incident) < 1e-12);
}

TEST_CASE("synthesize: linear spectral phase shifts the peak") {
  PulseConfig cfg;
  for (double tau : {-2.0, -0.5, 0.5, 1.0, 2.0}) {
    const auto ts = synthesize(linear_phase_response(cfg, tau), cfg);
    CAPTURE(tau);
    CHECK(std::abs(ts.reflected.peak_time_gamma - tau) < time_step_gamma(ts));
    CHECK(std::abs(ts.transmitted.peak_time_gamma - tau) < time_step_gamma(ts));
    CHECK(distortion_metric(ts.transmitted, ts.incident) < 1e-6);
  }
}

TEST_CASE("synthesize: response must cover the window") {
  PulseConfig cfg;
  auto resp = linear_phase_response(cfg, 0.0);
  resp.points.pop_back();
  CHECK_THROWS_AS(synthesize(resp, cfg), WindowTooNarrow);
}

TEST_CASE("synthesize: clipping a varying coefficient is rejected") {
  PulseConfig cfg;
  cfg.span = 4.0;  // edge amplitude exp(-8) is not negligible
  auto resp = linear_phase_response(cfg, 0.0);
  resp.points.front().r *= 1.5;
  CHECK_THROWS_AS(synthesize(resp, cfg), WindowTooNarrow);
}

TEST_CASE("peak_time: parabola vertex") {
  std::vector<double> t;
  std::vector<double> y;
  const double vertex = 0.37;
  for (int k = -10; k <= 10; ++k) {
    t.push_back(0.25 * k);
    y.push_back(5.0 - (0.25 * k - vertex) * (0.25 * k - vertex));
  }
  CHECK(peak_time(t, y) == doctest::Approx(vertex).epsilon(1e-12));
}

TEST_CASE("peak_time: symmetric gaussian and edge peaks") {
  std::vector<double> t;
  std::vector<double> y;
  for (int k = -50; k <= 50; ++k) {
    t.push_back(0.1 * k);
    y.push_back(std::exp(-t.back() * t.back()));
  }
  CHECK(std::abs(peak_time(t, y)) < 1e-12);

  std::vector<double> ramp(t.size());
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i);
  CHECK_THROWS_AS(peak_time(t, ramp), EdgePeak);
  std::reverse(ramp.begin(), ramp.end());
  CHECK_THROWS_AS(peak_time(t, ramp), EdgePeak);
}

TEST_CASE("PulseConfig validation") {
  PulseConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.span = 3.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = PulseConfig{};
  cfg.n_samples = 512;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = PulseConfig{};
  cfg.t0 = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("synthesize: Raman slab pulses stay narrowband") {
  AtomicParams p;
  SlabConfig slab;
  PulseConfig cfg;
  p.Omega_c = 1.5;
  const auto resp =
      build_spectral_response(p, slab, synthesis_grid(cfg, p.gamma_unit, slab.delta_p_carrier));
  const auto ts = synthesize(resp, cfg);
  CHECK(ts.reflected.peak_time_gamma > 0.0);
  CHECK(ts.transmitted.peak_time_gamma > 0.0);
  CHECK(distortion_metric(ts.reflected, ts.incident) < kDistortionWarning);
  CHECK(distortion_metric(ts.transmitted, ts.incident) < kDistortionWarning);

  // Quadrature and time-grid convergence.
  PulseConfig fine = cfg;
  fine.n_samples *= 2;
  const auto ts2 = synthesize(resp, fine);
  CHECK(std::abs(ts2.reflected.peak_time_gamma - ts.reflected.peak_time_gamma) < 1e-3);
  CHECK(std::abs(ts2.transmitted.peak_time_gamma - ts.transmitted.peak_time_gamma) < 1e-3);
}
