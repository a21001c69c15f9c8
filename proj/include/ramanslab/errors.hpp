#pragma once

#include <stdexcept>
#include <string>

namespace ramanslab {

// Base of every error raised by the library. code() is a stable
// machine-readable identifier used by the CLI error report.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define RAMANSLAB_DEFINE_ERROR(Name)                                   \
  class Name : public SimulationError {                                \
   public:                                                             \
    explicit Name(const std::string& message)                          \
        : SimulationError(#Name, message) {}                           \
  };

/// Susceptibility evaluated on (or numerically at) a pole of A or of the
/// inner Raman bracket.
RAMANSLAB_DEFINE_ERROR(DegenerateDenominator)
/// eps_b + chi on the non-positive real axis; the square root branch is
/// not defined by the model there.
RAMANSLAB_DEFINE_ERROR(BranchAmbiguity)
/// Slab coefficient denominator vanishes (lasing threshold).
RAMANSLAB_DEFINE_ERROR(ZeroDenominator)
/// Central difference and Richardson extrapolation disagree.
RAMANSLAB_DEFINE_ERROR(GridTooCoarse)
/// Spectral window clips a part of the spectrum where the coefficient
/// still varies.
RAMANSLAB_DEFINE_ERROR(WindowTooNarrow)
/// Trace maximum sits on the boundary of the time window.
RAMANSLAB_DEFINE_ERROR(EdgePeak)
RAMANSLAB_DEFINE_ERROR(ParseError)
RAMANSLAB_DEFINE_ERROR(ValidationError)

#undef RAMANSLAB_DEFINE_ERROR

}  // namespace ramanslab
