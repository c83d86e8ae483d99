#pragma once

#include <string>
#include <vector>

#include "qsplit/scenario.hpp"

namespace qsplit {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double limit = 0.0;
  std::string detail;
};

struct SuiteOptions {
  bool run_oracle = true;
  /// Stationary probes use every `k_stride`-th grid wavenumber.
  std::size_t k_stride = 64;
};

/// Decomposition, norms, orthogonality, flux, midpoint nullity and the
/// oracle comparison on one scenario.
std::vector<CheckResult> run_invariant_suite(const Scenario& sc, const Setup& st,
                                             const SuiteOptions& opt = {});

}  // namespace qsplit
