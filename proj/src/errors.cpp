#include "qsplit/errors.hpp"

namespace qsplit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveA: return "NonPositiveA";
    case ErrorKind::GapError: return "GapError";
    case ErrorKind::NonPositiveMass: return "NonPositiveMass";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::DeltaNotPointwise: return "DeltaNotPointwise";
    case ErrorKind::NonPositiveK: return "NonPositiveK";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::FullTransmission: return "FullTransmission";
    case ErrorKind::AsymmetricPotential: return "AsymmetricPotential";
    case ErrorKind::ParityMismatch: return "ParityMismatch";
    case ErrorKind::SpectrumLeaksNegativeK: return "SpectrumLeaksNegativeK";
    case ErrorKind::GridTruncated: return "GridTruncated";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::ZeroNorm: return "ZeroNorm";
    case ErrorKind::ZeroWeight: return "ZeroWeight";
    case ErrorKind::NoRoot: return "NoRoot";
    case ErrorKind::WindowTooShort: return "WindowTooShort";
    case ErrorKind::CFLAccuracyViolation: return "CFLAccuracyViolation";
    case ErrorKind::BoundaryLeak: return "BoundaryLeak";
  }
  return "UnknownError";
}

bool is_config_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveA:
    case ErrorKind::GapError:
    case ErrorKind::NonPositiveMass:
    case ErrorKind::Config:
      return true;
    default:
      return false;
  }
}

}  // namespace qsplit
