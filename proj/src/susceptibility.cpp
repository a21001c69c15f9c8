#include "ramanslab/susceptibility.hpp"

#include <cmath>
#include <string>

#include "ramanslab/errors.hpp"

namespace ramanslab {

namespace {

constexpr double kPoleThreshold = 1e-30;
constexpr Complex kI{0.0, 1.0};

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ValidationError(std::string(name) + " > 0");
  }
}

}  // namespace

void AtomicParams::validate() const {
  require_positive(gamma_unit, "gamma_unit");
  require_positive(Gamma_21, "Gamma_21");
  require_positive(Gamma_23, "Gamma_23");
  require_positive(Gamma_24, "Gamma_24");
  require_positive(Gamma_41, "Gamma_41");
  require_positive(Gamma_43, "Gamma_43");
  require_positive(Gamma_13, "Gamma_13");
  require_positive(Gamma_12, "Gamma_12");
  require_positive(gamma_12, "gamma_12");
  require_positive(gamma_32, "gamma_32");
  require_positive(gamma_34, "gamma_34");
  require_positive(gamma_14, "gamma_14");
  if (!(beta >= 0.0)) throw ValidationError("beta >= 0");
  if (!(Omega_1 >= 0.0)) throw ValidationError("Omega_1 >= 0");
  if (!(Omega_c >= 0.0)) throw ValidationError("Omega_c >= 0");
  if (!std::isfinite(Delta_1) || !std::isfinite(Delta_c)) {
    throw ValidationError("detunings finite");
  }
}

Complex denominator_A(double delta_p, const AtomicParams& p) {
  const Complex upper{p.Gamma_23, -delta_p};
  const Complex two_photon{p.Gamma_24, -(delta_p - p.Delta_c)};
  return upper * two_photon + p.Omega_c * p.Omega_c / 4.0;
}

Complex coherence_factor_D(double delta_p, const AtomicParams& p) {
  const Complex a = denominator_A(delta_p, p);
  if (std::abs(a) < kPoleThreshold) {
    throw DegenerateDenominator("|A| vanishes at delta_p = " +
                                std::to_string(delta_p));
  }

  const double control_sq = p.Omega_c * p.Omega_c / 4.0;
  const Complex g24{p.Gamma_24, -(delta_p - p.Delta_c)};
  const Complex g41{p.Gamma_41, -(delta_p - p.Delta_1 - p.Delta_c)};
  const Complex g13{p.Gamma_13, -(delta_p - p.Delta_1)};

  const Complex population_term =
      2.0 * p.Gamma_21 * g24 /
      ((p.gamma_12 + p.gamma_32) *
       (p.Gamma_12 * p.Gamma_12 + p.Delta_1 * p.Delta_1));

  const Complex raman_bracket = g13 * g41 + control_sq;
  if (std::abs(raman_bracket) < kPoleThreshold) {
    throw DegenerateDenominator("Raman bracket vanishes at delta_p = " +
                                std::to_string(delta_p));
  }
  const Complex raman_term = (g24 * g41 - control_sq) /
                             (Complex{p.Gamma_21, p.Delta_1} * raman_bracket);

  return -kI / a * (population_term + raman_term);
}

Complex chi(double delta_p, const AtomicParams& p) {
  if (p.Omega_1 == 0.0) return {0.0, 0.0};
  return p.beta * p.Omega_1 * p.Omega_1 / 8.0 * coherence_factor_D(delta_p, p);
}

Complex refractive_index(Complex chi_value, double eps_b) {
  if (!(eps_b > 0.0)) throw ValidationError("eps_b > 0");
  const Complex eps = eps_b + chi_value;
  if (eps.real() <= 0.0 && eps.imag() == 0.0) {
    throw BranchAmbiguity("eps_b + chi lies on the non-positive real axis");
  }
  return std::sqrt(eps);
}

}  // namespace ramanslab
