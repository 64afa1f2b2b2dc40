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

// Right-hand sides of the ergodic convergence rates, evaluated so they can
// be checked against a run at every iteration.

#ifndef PSG_BOUNDS_H_
#define PSG_BOUNDS_H_

#include <cstdint>
#include <string>

namespace psg {

// R L / sqrt(t): uniform mean after exactly t constant steps.
double ConstantBound(double radius, double lipschitz, int64_t t);
// 3 R L / (2 sqrt(t)): uniform mean, classic steps.
double ClassicBound(double radius, double lipschitz, int64_t t);
// (2 R L + R L ln t) / (4 (sqrt(t + 1) - 1)): eta-weighted mean, nesterov.
double NesterovBound(double radius, double lipschitz, int64_t t);
// 3 R max|g| / (2 sqrt(t)): uniform mean, family steps.
double FamilyBound(double radius, int64_t t, double max_g_norm);
// (t^((k+1)/2) + sum s^((k-1)/2)) / (2 sum s^(k/2)) * R max|g|: w^(k)
// weighted mean, family steps. Throws kInvalidParameter for k < -1.
double WeakErgodicBound(double radius, int64_t t, double k, double max_g_norm);

// sum_{s=1}^t s^exponent in ascending order; compensated past 1e5 terms.
double PowerSum(int64_t t, double exponent);

// Incremental form of WeakErgodicBound for checking every t of a run
// without re-summing.
class WeakErgodicBoundTracker {
 public:
  explicit WeakErgodicBoundTracker(double k);

  // Extends both sums to index t (must be previous t + 1).
  void Advance(int64_t t);
  double Value(double radius, double max_g_norm) const;
  int64_t t() const { return t_; }

 private:
  struct Sum {
    double total = 0.0;
    double compensation = 0.0;
    void Add(double v, bool compensated);
  };

  double k_;
  int64_t t_ = 0;
  Sum numerator_sum_;
  Sum denominator_sum_;
};

enum class BoundKind {
  kConstantErgodic,
  kClassicErgodic,
  kNesterovSubopt,
  kFamilyErgodic,
  kWeakErgodic,
};

struct BoundLabel {
  BoundKind kind;
  double k = 0.0;  // kWeakErgodic only

  // "ConstantErgodic", ..., "WeakErgodic(k=2)".
  std::string ToString() const;
};

// gap <= bound (1 + 1e-9) + 1e-12.
bool CheckCertificate(double gap, double bound);

}  // namespace psg

#endif  // PSG_BOUNDS_H_
