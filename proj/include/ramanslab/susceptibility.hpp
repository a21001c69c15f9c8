#pragma once

#include <complex>

namespace ramanslab {

using Complex = std::complex<double>;

/// Parameters of the four-level N-configuration Raman medium.
///
/// Every rate, detuning and Rabi frequency is a dimensionless multiple of
/// gamma_unit. The probe detuning is not stored here; it is the sweep
/// variable passed to each evaluation. The probe Rabi frequency cancels out
/// of chi in the weak-probe limit and is therefore not a parameter at all.
struct AtomicParams {
  double gamma_unit = 1.0e6;  // rad/s

  // Dephasing rates.
  double Gamma_21 = 2.01;
  double Gamma_23 = 2.01;
  double Gamma_24 = 4.01;
  double Gamma_41 = 2.01;
  double Gamma_43 = 2.01;
  double Gamma_13 = 0.01;
  // Enters only as Gamma_12^2 in the first Raman term; equal to Gamma_21
  // unless overridden.
  double Gamma_12 = 2.01;

  // Spontaneous decay rates.
  double gamma_12 = 2.0;
  double gamma_32 = 2.0;
  double gamma_34 = 2.0;
  double gamma_14 = 2.0;

  double Delta_1 = 50.0;
  double Delta_c = 0.0;

  double Omega_1 = 4.0;
  double Omega_c = 1.5;

  // 2 N |d23|^2 / (hbar eps0), in units of gamma.
  double beta = 0.16;

  /// Throws ValidationError naming the first violated invariant.
  void validate() const;
};

/// A = (Gamma_23 - i dp)(Gamma_24 - i(dp - Delta_c)) + |Omega_c|^2 / 4, in gamma^2.
Complex denominator_A(double delta_p, const AtomicParams& params);

/// The control-field-dressed coherence factor D, in gamma^-3.
/// Throws DegenerateDenominator when |A| or the inner Raman bracket is below
/// 1e-30.
Complex coherence_factor_D(double delta_p, const AtomicParams& params);

/// chi = beta Omega_1^2 D / 8 (dimensionless). Gain corresponds to
/// Im(chi) < 0 under the exp(-i omega t) convention used throughout.
Complex chi(double delta_p, const AtomicParams& params);

/// Principal root n = sqrt(eps_b + chi) with Re(n) > 0.
Complex refractive_index(Complex chi_value, double eps_b);

}  // namespace ramanslab
