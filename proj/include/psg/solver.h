// Copyright 2026 The psg Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The projected subgradient loop:
//
//   y_{s+1} = x_s - eta_s g_s,   x_{s+1} = P_X(y_{s+1}),   s = 1, ..., t
//
// with streaming weighted averages, a best-iterate tracker, an optional
// restart when G_s grows, and certificates checked while the run proceeds.

#ifndef PSG_SOLVER_H_
#define PSG_SOLVER_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "psg/core.h"
#include "psg/projection.h"
#include "psg/stepsize.h"

namespace psg {

enum class SubgradientSelection { kOracleDefault, kMinimalNormWhenAvailable };

struct SolverConfig {
  int64_t max_iterations = 1000;
  // Projected onto the feasible set when outside it.
  Vector initial_point;
  StepSizePolicy policy = StepSizePolicy::Family(1.0, 1.0);
  // One weighted average per exponent; each must be >= -1 and distinct.
  std::vector<double> weight_ks = {0.0};
  bool record_trace = false;
  // Family only; must exceed 1. Restart when G_s > factor * G at the start
  // of the current segment.
  std::optional<double> restart_factor;
  SubgradientSelection subgradient_selection =
      SubgradientSelection::kOracleDefault;
  // Stand-in for f* when the problem has no known optimum. Must not be
  // below the true optimum for the certificates to be meaningful.
  std::optional<double> reference_optimum;
  // Evaluate averaged values, bounds and certificates at every t rather
  // than only at the final iterate.
  bool certify_every_step = true;
};

struct RunResult {
  RunReport report;
  Trace trace;  // empty unless record_trace
};

// P(x - eta g). Throws kShapeError on mismatched dimensions.
Vector PsgStep(const Vector& x, const Vector& g, double eta,
               const ProjectionOperator& projector);

// Throws kNumericError (with the iteration index) on non-finite oracle
// output and kInvalidParameter on an invalid configuration.
RunResult Run(const ProblemInstance& problem, const SolverConfig& config);

// Upper estimate of f* from a long family(a = 1) run: the lowest of the
// best iterate and the final weighted means.
double ReferenceOptimum(const ProblemInstance& problem,
                        const Vector& initial_point, int64_t iterations);

}  // namespace psg

#endif  // PSG_SOLVER_H_
