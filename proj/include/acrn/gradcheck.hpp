#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "acrn/tensor.hpp"

namespace acrn {

// Scalar function of a flat parameter vector, re-evaluated per perturbation.
using ScalarFn = std::function<double(const std::vector<double>&)>;

struct GradCheckResult {
  std::string name;
  int checked = 0;
  int failed = 0;
  double max_rel_err = 0;
};

// Central finite differences (step 1e-5) against the analytic gradient at up
// to max_coords randomly chosen coordinates. Relative error floor 1e-2 in the
// denominator keeps near-zero entries measured on an absolute scale.
GradCheckResult check_gradient(const std::string& name, const ScalarFn& f,
                               const std::vector<double>& x0, const std::vector<double>& analytic,
                               double tolerance, int max_coords, Rng& rng);

struct SuiteReport {
  std::vector<GradCheckResult> results;
  bool ok = true;
  double seconds = 0;
};

// Finite-difference suite over every differentiable op plus the composed
// relation-model chain on a miniature configuration.
SuiteReport run_gradient_suite(std::uint64_t seed, std::ostream* log);

}  // namespace acrn
