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

// Test problems: -sqrt(x) on [0, 1] (unbounded subgradients), |x|_1 on a
// box, and the ball-constrained Lasso with a seeded Gaussian design.

#ifndef PSG_PROBLEMS_H_
#define PSG_PROBLEMS_H_

#include <cstdint>
#include <memory>
#include <string>

#include "psg/core.h"
#include "psg/projection.h"

namespace psg {

// f(x) = -sqrt(x) on [0, 1]. Subdifferential empty at 0; no Lipschitz
// constant. x* = 1, f* = -1, R = 1.
ProblemInstance MakeSqrtExample();

// f(x) = |x|_1 on [-1, 1]^dim with sign(0) = 0. x* = 0, f* = 0,
// L = R = sqrt(dim).
ProblemInstance MakeAbsProblem(int dim);

struct LassoInstance {
  Matrix phi;  // M x N
  Vector y;    // M
  double lambda = 0.0;
  double radius = 0.0;
  uint64_t seed = 0;
  Vector planted;  // sparse x0 with y = phi x0 + noise; empty if loaded

  int n() const { return static_cast<int>(phi.cols()); }
  int m() const { return static_cast<int>(phi.rows()); }

  double Value(const Vector& x) const;
  // 2 phi^T (phi x - y) + lambda sign(x), sign(0) = 0.
  Vector Subgradient(const Vector& x) const;
  // Same but with the l1 term at zero coordinates chosen to cancel the
  // smooth part as far as [-lambda, lambda] allows.
  Vector MinimalNormSubgradient(const Vector& x) const;
};

// Phi i.i.d. N(0, 1) from mt19937_64(seed); planted x0 with ceil(N/16)
// entries of +-1 at uniformly chosen coordinates; y = Phi x0 + N(0, 0.01^2).
LassoInstance GenerateLasso(uint64_t seed, int n, int m, double radius,
                            double lambda);

// min |y - Phi x|^2 + lambda |x|_1 over the ball B(0, R).
ProblemInstance MakeLassoProblem(std::shared_ptr<const LassoInstance> lasso);
ProblemInstance MakeLasso(uint64_t seed, int n, int m, double radius,
                          double lambda);

// CSV layout: optional "# ..." comment lines, then the header
// "phi_0,...,phi_{N-1},y", then one row per observation i = 0..M-1 holding
// Phi(i, 0..N-1) and y(i), 17 significant digits.
void WriteLassoCsv(const LassoInstance& lasso, const std::string& path);
LassoInstance ReadLassoCsv(const std::string& path, double radius,
                           double lambda);

}  // namespace psg

#endif  // PSG_PROBLEMS_H_
