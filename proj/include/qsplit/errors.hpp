#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qsplit {

enum class ErrorKind {
  // configuration
  NonPositiveA,
  GapError,
  NonPositiveMass,
  Config,
  // numerical preconditions
  DeltaNotPointwise,
  NonPositiveK,
  StepTooLarge,
  FullTransmission,
  AsymmetricPotential,
  ParityMismatch,
  SpectrumLeaksNegativeK,
  GridTruncated,
  GridTooCoarse,
  ZeroNorm,
  ZeroWeight,
  NoRoot,
  WindowTooShort,
  CFLAccuracyViolation,
  BoundaryLeak,
};

std::string_view to_string(ErrorKind kind);

/// True for errors caused by a malformed or inconsistent scenario, as
/// opposed to a numerical precondition violated at run time.
bool is_config_error(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qsplit
