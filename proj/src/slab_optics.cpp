#include "ramanslab/slab_optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ramanslab/errors.hpp"

namespace ramanslab {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kPoleThreshold = 1e-30;
constexpr double kRichardsonTolerance = 1e-3;

std::string at_detuning(const std::string& what, double delta_p) {
  return what + " (delta_p = " + std::to_string(delta_p) + " gamma)";
}

// Index of the grid node equal to target, or npos when none is within
// tolerance.
std::size_t find_node(const std::vector<SpectralPoint>& pts, double target,
                      double tolerance) {
  const auto it = std::lower_bound(
      pts.begin(), pts.end(), target,
      [](const SpectralPoint& p, double v) { return p.delta_p < v; });
  std::size_t best = std::string::npos;
  double best_gap = tolerance;
  for (auto cand : {it, it == pts.begin() ? it : std::prev(it)}) {
    if (cand == pts.end()) continue;
    const double gap = std::abs(cand->delta_p - target);
    if (gap <= best_gap) {
      best_gap = gap;
      best = static_cast<std::size_t>(cand - pts.begin());
    }
  }
  return best;
}

Complex coefficient(const SpectralPoint& p, Channel which) {
  return which == Channel::Reflection ? p.r : p.t;
}

double unwrapped(const SpectralPoint& p, Channel which) {
  return which == Channel::Reflection ? p.phi_r : p.phi_t;
}

// phi(j) - phi(i) from the coefficient ratio, with the branch taken from
// the unwrapped phases. Avoids subtracting two O(1) phase values when the
// increment itself is tiny.
double phase_increment(const SpectralPoint& a, const SpectralPoint& b,
                       Channel which) {
  const double principal =
      std::arg(coefficient(b, which) * std::conj(coefficient(a, which)));
  const double coarse = unwrapped(b, which) - unwrapped(a, which);
  const double turns = std::round((coarse - principal) / (2.0 * std::numbers::pi));
  return principal + 2.0 * std::numbers::pi * turns;
}

}  // namespace

Complex cos(const Phase& theta) {
  return theta.cos_base * std::cos(theta.offset) -
         theta.sin_base * std::sin(theta.offset);
}

Complex sin(const Phase& theta) {
  return theta.sin_base * std::cos(theta.offset) +
         theta.cos_base * std::sin(theta.offset);
}

void SlabConfig::validate() const {
  if (!(eps_b > 0.0)) throw ValidationError("eps_b > 0");
  if (!(omega0 > 0.0)) throw ValidationError("omega0 > 0");
  if (!std::isfinite(delta_p_carrier)) {
    throw ValidationError("delta_p_carrier finite");
  }
  if (thickness.kind == ThicknessKind::Explicit) {
    if (!(thickness.d_meters > 0.0)) throw ValidationError("d > 0");
  } else if (thickness.m < 1) {
    throw ValidationError("m >= 1");
  }
}

double SlabConfig::lambda0() const {
  return 2.0 * std::numbers::pi * kSpeedOfLight / omega0;
}

double SlabConfig::thickness_m() const {
  const double quarter = lambda0() / (4.0 * std::sqrt(eps_b));
  switch (thickness.kind) {
    case ThicknessKind::Resonant:
      return 2.0 * thickness.m * quarter;
    case ThicknessKind::AntiResonant:
      return (2.0 * thickness.m + 1.0) * quarter;
    case ThicknessKind::Explicit:
      break;
  }
  return thickness.d_meters;
}

Phase SlabConfig::carrier_phase() const {
  const double sign = thickness.m % 2 == 0 ? 1.0 : -1.0;
  switch (thickness.kind) {
    case ThicknessKind::Resonant:
      return {thickness.m * std::numbers::pi, sign, 0.0, {}};
    case ThicknessKind::AntiResonant:
      return {(thickness.m + 0.5) * std::numbers::pi, 0.0, sign, {}};
    case ThicknessKind::Explicit:
      break;
  }
  const double base = std::sqrt(eps_b) * omega0 * thickness.d_meters / kSpeedOfLight;
  return {base, std::cos(base), std::sin(base), {}};
}

TransferMatrix transfer_matrix(Complex n, const Phase& theta) {
  const Complex c = cos(theta);
  const Complex s = sin(theta);
  return {c, s / n, -n * s, c};
}

TransferMatrix transfer_matrix(Complex n, double omega, double dz) {
  return transfer_matrix(n, Phase::plain(omega / kSpeedOfLight * n * dz));
}

SlabCoefficients slab_coefficients(const TransferMatrix& m) {
  // Vacuum on both sides: E = 1 + r, E'/k0 = i(1 - r) on entry and
  // E = t, E'/k0 = i t on exit.
  const Complex den = m.m12 - m.m21 + kI * (m.m11 + m.m22);
  if (std::abs(den) < kPoleThreshold) {
    throw ZeroDenominator("slab coefficient denominator vanishes");
  }
  return {(m.m12 + m.m21 + kI * (m.m22 - m.m11)) / den, 2.0 * kI * m.det() / den};
}

Complex reflection_coefficient(Complex n, double omega, double d) {
  return slab_coefficients(transfer_matrix(n, omega, d)).r;
}

Complex transmission_coefficient(Complex n, double omega, double d) {
  return slab_coefficients(transfer_matrix(n, omega, d)).t;
}

std::vector<double> make_grid(const SweepSpec& sweep, double carrier,
                              double omega_c) {
  if (!(sweep.step > 0.0) || !(sweep.hi > sweep.lo)) {
    throw ValidationError("sweep: hi > lo and step > 0");
  }
  const bool refine = omega_c < sweep.refine_below_omega_c &&
                      sweep.refine_factor > 1 && sweep.refine_halfwidth > 0.0;
  const double fine_step = sweep.step / sweep.refine_factor;
  const double fine_lo = carrier - sweep.refine_halfwidth;
  const double fine_hi = carrier + sweep.refine_halfwidth;

  const double slack = 1e-9 * sweep.step;
  const auto k_lo = static_cast<long>(std::ceil((sweep.lo - carrier) / sweep.step - 1e-9));
  const auto k_hi = static_cast<long>(std::floor((sweep.hi - carrier) / sweep.step + 1e-9));

  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(k_hi - k_lo + 1));
  for (long k = k_lo; k <= k_hi; ++k) {
    const double x = carrier + static_cast<double>(k) * sweep.step;
    if (refine && x >= fine_lo - slack && x <= fine_hi + slack) continue;
    grid.push_back(x);
  }
  if (refine) {
    const auto j_max =
        static_cast<long>(std::floor(sweep.refine_halfwidth / fine_step + 1e-9));
    for (long j = -j_max; j <= j_max; ++j) {
      const double x = carrier + static_cast<double>(j) * fine_step;
      if (x >= sweep.lo - slack && x <= sweep.hi + slack) grid.push_back(x);
    }
    std::sort(grid.begin(), grid.end());
  }
  return grid;
}

SpectralResponse build_spectral_response(const AtomicParams& params,
                                         const SlabConfig& slab,
                                         std::span<const double> grid) {
  params.validate();
  slab.validate();
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw ValidationError("grid strictly increasing");
    }
  }

  SpectralResponse out;
  out.gamma_unit = params.gamma_unit;
  out.omega0 = slab.omega0;
  out.delta_p_carrier = slab.delta_p_carrier;
  out.transit_time = slab.transit_time();
  out.points.resize(grid.size());

  const Phase carrier = slab.carrier_phase();
  const double root_eps = std::sqrt(slab.eps_b);
  // omega0 d / c: the vacuum phase thickness at the carrier.
  const double vacuum_phase = carrier.base / root_eps;

  for (std::size_t i = 0; i < grid.size(); ++i) {
    SpectralPoint& p = out.points[i];
    p.delta_p = grid[i];
    const double offset = (grid[i] - slab.delta_p_carrier) * params.gamma_unit;
    p.omega = slab.omega0 + offset;
    try {
      p.chi = chi(p.delta_p, params);
      p.n = refractive_index(p.chi, slab.eps_b);
      const double rel = offset / slab.omega0;
      // theta = n (omega/omega0) vacuum_phase, split around sqrt(eps_b)*vacuum_phase.
      const Complex delta_n = p.chi / (p.n + root_eps);
      Phase theta = carrier;
      theta.offset = delta_n * vacuum_phase + p.n * vacuum_phase * rel;
      const SlabCoefficients rt = slab_coefficients(transfer_matrix(p.n, theta));
      p.r = rt.r;
      p.t = rt.t;
    } catch (const DegenerateDenominator& e) {
      throw DegenerateDenominator(at_detuning(e.what(), p.delta_p));
    } catch (const BranchAmbiguity& e) {
      throw BranchAmbiguity(at_detuning(e.what(), p.delta_p));
    } catch (const ZeroDenominator& e) {
      throw ZeroDenominator(at_detuning(e.what(), p.delta_p));
    }
    p.R = std::norm(p.r);
    p.T = std::norm(p.t);
  }

  // Nearest-branch unwrapping anchored at the lowest frequency.
  std::vector<double> inc_r(grid.size(), 0.0);
  std::vector<double> inc_t(grid.size(), 0.0);
  if (!out.points.empty()) {
    out.points[0].phi_r = std::arg(out.points[0].r);
    out.points[0].phi_t = std::arg(out.points[0].t);
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    auto& prev = out.points[i - 1];
    auto& cur = out.points[i];
    inc_r[i] = std::arg(cur.r * std::conj(prev.r));
    inc_t[i] = std::arg(cur.t * std::conj(prev.t));
    cur.phi_r = prev.phi_r + inc_r[i];
    cur.phi_t = prev.phi_t + inc_t[i];
  }

  // Local delays: three-point derivative on the (possibly non-uniform) grid.
  const std::size_t n = grid.size();
  if (n >= 2) {
    for (std::size_t i = 0; i < n; ++i) {
      auto& p = out.points[i];
      if (i == 0) {
        const double h = grid[1] - grid[0];
        p.tau_r_gamma = inc_r[1] / h;
        p.tau_t_gamma = inc_t[1] / h;
      } else if (i == n - 1) {
        const double h = grid[i] - grid[i - 1];
        p.tau_r_gamma = inc_r[i] / h;
        p.tau_t_gamma = inc_t[i] / h;
      } else {
        const double h1 = grid[i] - grid[i - 1];
        const double h2 = grid[i + 1] - grid[i];
        const double scale = h1 * h2 * (h1 + h2);
        p.tau_r_gamma = (h1 * h1 * inc_r[i + 1] + h2 * h2 * inc_r[i]) / scale;
        p.tau_t_gamma = (h1 * h1 * inc_t[i + 1] + h2 * h2 * inc_t[i]) / scale;
      }
    }
  }
  return out;
}

PhaseTime phase_time(const SpectralResponse& response, double at, Channel which,
                     double h) {
  if (!(h > 0.0)) throw ValidationError("phase time step > 0");
  const auto& pts = response.points;
  const double tol = 1e-6 * h;
  std::size_t idx[4];
  const double offsets[4] = {-2.0 * h, -h, h, 2.0 * h};
  for (int k = 0; k < 4; ++k) {
    idx[k] = find_node(pts, at + offsets[k], tol);
    if (idx[k] == std::string::npos) {
      throw GridTooCoarse(at_detuning("grid lacks the nodes at +/-h and +/-2h", at));
    }
  }

  const auto slope = [&](std::size_t lo, std::size_t hi) {
    return phase_increment(pts[lo], pts[hi], which) /
           (pts[hi].delta_p - pts[lo].delta_p);
  };
  const double central = slope(idx[1], idx[2]);
  const double wide = slope(idx[0], idx[3]);
  const double extrapolated = (4.0 * central - wide) / 3.0;
  if (std::abs(extrapolated - central) >
      kRichardsonTolerance * std::abs(extrapolated) + 1e-300) {
    throw GridTooCoarse(at_detuning(
        "central difference and Richardson extrapolation differ by more than 1e-3",
        at));
  }

  PhaseTime out;
  out.gamma_units = central;
  out.seconds = central / response.gamma_unit;
  out.richardson_gamma = extrapolated;
  out.superluminal = which == Channel::Reflection
                         ? out.seconds < 0.0
                         : out.seconds < response.transit_time;
  return out;
}

}  // namespace ramanslab
