#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "ramanslab/errors.hpp"
#include "ramanslab/slab_optics.hpp"

using namespace ramanslab;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kOmega0 = 1e15;

AtomicParams undoped() {
  AtomicParams p;
  p.beta = 0.0;
  return p;
}

std::vector<double> window_grid(double lo, double hi, double step) {
  std::vector<double> g;
  const int n = static_cast<int>(std::lround((hi - lo) / step));
  for (int k = 0; k <= n; ++k) g.push_back(lo + k * step);
  return g;
}

}  // namespace

TEST_CASE("transfer_matrix: identity, explicit value, unit determinant") {
  const TransferMatrix id = transfer_matrix({1.7, 0.02}, kOmega0, 0.0);
  CHECK(id.m11 == Complex(1.0, 0.0));
  CHECK(id.m12 == Complex(0.0, 0.0));
  CHECK(id.m22 == Complex(1.0, 0.0));

  // n = 2, theta = pi/2.
  const TransferMatrix q = transfer_matrix(2.0, Phase::plain(kPi / 2));
  CHECK(std::abs(q.m11) < 1e-15);
  CHECK(std::abs(q.m12 - 0.5) < 1e-15);
  CHECK(std::abs(q.m21 + 2.0) < 1e-15);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mag(0.5, 5.0);
  std::uniform_real_distribution<double> loss(-0.1, 0.1);
  std::uniform_real_distribution<double> omega(1e14, 1e16);
  std::uniform_real_distribution<double> length(0.0, 2e-6);
  for (int k = 0; k < 1000; ++k) {
    const Complex n{mag(rng), loss(rng)};
    const TransferMatrix m = transfer_matrix(n, omega(rng), length(rng));
    CHECK(std::abs(m.det() - 1.0) < 1e-12 * std::abs(m.m11 * m.m22));
  }
}

TEST_CASE("coefficients: closed forms, vacuum, quarter-wave and resonant slabs") {
  // n = 2, theta = pi/2: r = -0.6, t = 0.8 i.
  const auto q = slab_coefficients(transfer_matrix(2.0, Phase::plain(kPi / 2)));
  CHECK(std::abs(q.r - Complex(-0.6, 0.0)) < 1e-15);
  CHECK(std::abs(q.t - Complex(0.0, 0.8)) < 1e-15);
  CHECK(std::norm(q.r) + std::norm(q.t) == doctest::Approx(1.0).epsilon(1e-15));

  // Vacuum: r = 0 exactly and t is the free-space phase.
  for (double d : {1e-7, 3.3e-6, 1e-3}) {
    const double phase = kOmega0 * d / kSpeedOfLight;
    CHECK(reflection_coefficient(1.0, kOmega0, d) == Complex(0.0, 0.0));
    const Complex t = transmission_coefficient(1.0, kOmega0, d);
    CHECK(std::abs(std::abs(t) - 1.0) < 1e-14);
    CHECK(std::abs(std::arg(t * std::polar(1.0, -phase))) < 1e-9);
  }

  // Real n with theta = m pi.
  for (int m : {1, 7, 1500}) {
    const auto c = slab_coefficients(transfer_matrix(2.0, Phase{m * kPi, m % 2 ? -1.0 : 1.0, 0.0, {}}));
    CHECK(c.r == Complex(0.0, 0.0));
    CHECK(std::norm(c.t) == doctest::Approx(1.0).epsilon(1e-15));
  }

  // Matrix route equals the closed forms for complex n.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.5, 4.0);
  std::uniform_real_distribution<double> v(-0.1, 0.1);
  std::uniform_real_distribution<double> th(0.0, 40.0);
  for (int k = 0; k < 200; ++k) {
    const Complex n{u(rng), v(rng)};
    const Complex theta = n * th(rng);
    const auto c = slab_coefficients(transfer_matrix(n, Phase::plain(theta)));
    CHECK(std::abs(c.r - oracle::closed_form_r(n, theta)) <=
          1e-12 * (1.0 + std::abs(c.r)));
    CHECK(std::abs(c.t - oracle::closed_form_t(n, theta)) <=
          1e-12 * (1.0 + std::abs(c.t)));
  }
}

TEST_CASE("coefficients: unitarity for lossless slabs") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> n(0.2, 6.0);
  std::uniform_real_distribution<double> theta(0.0, 1e4);
  for (int k = 0; k < 1000; ++k) {
    const auto c = slab_coefficients(transfer_matrix(n(rng), Phase::plain(theta(rng))));
    CHECK(std::abs(std::norm(c.r) + std::norm(c.t) - 1.0) < 1e-10);
  }
}

TEST_CASE("coefficients: zero denominator") {
  TransferMatrix m{{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
  CHECK_THROWS_AS(slab_coefficients(m), ZeroDenominator);
}

TEST_CASE("SlabConfig: thickness rules") {
  SlabConfig slab;
  CHECK(slab.lambda0() == doctest::Approx(2 * kPi * kSpeedOfLight / 1e15));
  const double d = slab.thickness_m();
  CHECK(std::abs(std::sqrt(slab.eps_b) * slab.omega0 * d / kSpeedOfLight / (1500 * kPi) - 1.0) <
        1e-9);
  CHECK(slab.carrier_phase().sin_base == 0.0);
  CHECK(slab.carrier_phase().cos_base == 1.0);

  slab.thickness = ThicknessRule::anti_resonant(1500);
  CHECK(std::abs(std::sqrt(slab.eps_b) * slab.omega0 * slab.thickness_m() / kSpeedOfLight /
                     (3001 * kPi / 2) -
                 1.0) < 1e-9);
  CHECK(slab.carrier_phase().cos_base == 0.0);

  slab.thickness = ThicknessRule::resonant(0);
  CHECK_THROWS_AS(slab.validate(), ValidationError);
  slab.thickness = ThicknessRule::explicit_length(-1.0);
  CHECK_THROWS_AS(slab.validate(), ValidationError);
  slab = SlabConfig{};
  slab.eps_b = -1.0;
  CHECK_THROWS_WITH_AS(slab.validate(), "eps_b > 0", ValidationError);
}

TEST_CASE("make_grid: anchored at the carrier, refined for weak control") {
  SweepSpec sweep;
  const auto coarse = make_grid(sweep, 50.0, 6.0);
  CHECK(coarse.size() == 20001);
  CHECK(coarse.front() == doctest::Approx(40.0));
  CHECK(coarse.back() == doctest::Approx(60.0));
  CHECK(std::find(coarse.begin(), coarse.end(), 50.0) != coarse.end());

  const auto fine = make_grid(sweep, 50.0, 1.5);
  CHECK(fine.size() == 20001 - 1001 + 10001);
  for (std::size_t i = 1; i < fine.size(); ++i) REQUIRE(fine[i] > fine[i - 1]);
  CHECK(std::find(fine.begin(), fine.end(), 50.0) != fine.end());
}

TEST_CASE("build_spectral_response: undoped slab") {
  SlabConfig slab;
  const auto grid = window_grid(40.0, 60.0, 1e-2);
  const auto resp = build_spectral_response(undoped(), slab, grid);
  for (const auto& p : resp.points) {
    CHECK(p.R < 1e-4);
    CHECK(std::abs(p.T - 1.0) < 1e-4);
    CHECK(std::abs(p.R + p.T - 1.0) < 1e-10);
  }

  slab.thickness = ThicknessRule::anti_resonant(1500);
  const auto anti = build_spectral_response(undoped(), slab, grid);
  const auto& mid = anti.points[grid.size() / 2];
  CHECK(mid.R == doctest::Approx(0.36).epsilon(1e-4));
  for (const auto& p : anti.points) CHECK(std::abs(p.R + p.T - 1.0) < 1e-10);
}

TEST_CASE("build_spectral_response: phases unwrap continuously") {
  AtomicParams p;
  for (double oc : {1.5, 4.0, 6.0, 8.0}) {
    p.Omega_c = oc;
    const auto resp = build_spectral_response(p, SlabConfig{}, make_grid(SweepSpec{}, 50.0, oc));
    for (std::size_t i = 1; i < resp.size(); ++i) {
      REQUIRE(std::abs(resp.points[i].phi_r - resp.points[i - 1].phi_r) < kPi);
      REQUIRE(std::abs(resp.points[i].phi_t - resp.points[i - 1].phi_t) < kPi);
    }
  }
}

TEST_CASE("build_spectral_response: gain spectrum shape") {
  AtomicParams p;
  p.Omega_c = 1.5;
  const auto resp = build_spectral_response(p, SlabConfig{}, make_grid(SweepSpec{}, 50.0, 1.5));
  const auto max_r = std::max_element(resp.points.begin(), resp.points.end(),
                                      [](auto& a, auto& b) { return a.R < b.R; });
  const auto max_t = std::max_element(resp.points.begin(), resp.points.end(),
                                      [](auto& a, auto& b) { return a.T < b.T; });
  CHECK(max_r->delta_p == doctest::Approx(50.0).epsilon(1e-6));
  CHECK(max_t->delta_p == doctest::Approx(50.0).epsilon(1e-6));
  CHECK(max_t->T > 1.0);  // gain
}

TEST_CASE("build_spectral_response: rejects non-increasing grids") {
  const std::vector<double> bad{1.0, 2.0, 2.0};
  CHECK_THROWS_AS(build_spectral_response(AtomicParams{}, SlabConfig{}, bad), ValidationError);
}

TEST_CASE("phase_time: vacuum transit") {
  AtomicParams p = undoped();
  SlabConfig slab;
  slab.eps_b = 1.0;
  slab.thickness = ThicknessRule::explicit_length(0.5);
  const auto resp = build_spectral_response(p, slab, window_grid(49.99, 50.01, 1e-3));
  const auto tt = phase_time(resp, 50.0, Channel::Transmission);
  CHECK(std::abs(tt.seconds / slab.transit_time() - 1.0) < 1e-9);
  const auto tr = phase_time(resp, 50.0, Channel::Reflection);
  CHECK(tr.seconds == 0.0);
  for (const auto& pt : resp.points) CHECK(pt.r == Complex(0.0, 0.0));
}

TEST_CASE("phase_time: lossless Fabry-Perot at resonance") {
  // Independent closed form: phi_t = atan((n + 1/n) tan(delta theta) / 2) near
  // theta = m pi, so d phi_t / d omega = (n^2 + 1)/2 * d/c at resonance.
  SlabConfig slab;
  const auto resp = build_spectral_response(undoped(), slab, window_grid(49.99, 50.01, 1e-3));
  const auto tt = phase_time(resp, 50.0, Channel::Transmission);
  const double expected = 2.5 * slab.transit_time();
  CHECK(std::abs(tt.seconds / expected - 1.0) < 1e-6);
  CHECK_FALSE(tt.superluminal);
}

TEST_CASE("phase_time: grid requirements") {
  const auto resp = build_spectral_response(AtomicParams{}, SlabConfig{},
                                            window_grid(49.99, 50.01, 2e-3));
  CHECK_THROWS_AS(phase_time(resp, 50.0, Channel::Reflection, 1e-3), GridTooCoarse);
  CHECK_NOTHROW(phase_time(resp, 50.0, Channel::Reflection, 2e-3));

  // A step wide enough to straddle the Raman feature fails the Richardson check.
  const auto wide = build_spectral_response(AtomicParams{}, SlabConfig{},
                                            window_grid(49.0, 51.0, 0.25));
  CHECK_THROWS_AS(phase_time(wide, 50.0, Channel::Reflection, 0.25), GridTooCoarse);
}

TEST_CASE("phase_time: superluminal flags follow the delay") {
  AtomicParams p;
  p.Omega_c = 6.0;
  const auto resp = build_spectral_response(p, SlabConfig{}, window_grid(49.99, 50.01, 1e-3));
  const auto tr = phase_time(resp, 50.0, Channel::Reflection);
  const auto tt = phase_time(resp, 50.0, Channel::Transmission);
  CHECK(tr.gamma_units < 0.0);
  CHECK(tr.superluminal);
  CHECK(tt.superluminal == (tt.seconds < resp.transit_time));
  CHECK(tt.gamma_units == doctest::Approx(tt.seconds * p.gamma_unit));
}

TEST_CASE("local phase derivative column agrees with phase_time") {
  AtomicParams p;
  p.Omega_c = 1.5;
  const auto grid = make_grid(SweepSpec{}, 50.0, 1.5);
  const auto resp = build_spectral_response(p, SlabConfig{}, grid);
  const auto idx = static_cast<std::size_t>(
      std::find(grid.begin(), grid.end(), 50.0) - grid.begin());
  const auto tr = phase_time(resp, 50.0, Channel::Reflection);
  CHECK(resp.points[idx].tau_r_gamma == doctest::Approx(tr.gamma_units).epsilon(1e-4));
}
