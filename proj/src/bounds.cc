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

#include "psg/bounds.h"

#include <cmath>

#include "psg/core.h"
#include "psg/stepsize.h"

namespace psg {
namespace {

constexpr int64_t kCompensateAbove = 100000;

}  // namespace

double ConstantBound(double radius, double lipschitz, int64_t t) {
  return radius * lipschitz / IndexPower(t, 0.5);
}

double ClassicBound(double radius, double lipschitz, int64_t t) {
  return 1.5 * radius * lipschitz / IndexPower(t, 0.5);
}

double NesterovBound(double radius, double lipschitz, int64_t t) {
  const double rl = radius * lipschitz;
  return (2.0 * rl + rl * std::log(static_cast<double>(t))) /
         (4.0 * (std::sqrt(static_cast<double>(t) + 1.0) - 1.0));
}

double FamilyBound(double radius, int64_t t, double max_g_norm) {
  return 1.5 * radius * max_g_norm / IndexPower(t, 0.5);
}

void WeakErgodicBoundTracker::Sum::Add(double v, bool compensated) {
  if (!compensated) {
    total += v;
    return;
  }
  const double y = v - compensation;
  const double next = total + y;
  compensation = (next - total) - y;
  total = next;
}

WeakErgodicBoundTracker::WeakErgodicBoundTracker(double k) : k_(k) {
  if (!std::isfinite(k) || k < -1.0) {
    throw Error(ErrorCode::kInvalidParameter, "k must be >= -1");
  }
}

void WeakErgodicBoundTracker::Advance(int64_t t) {
  if (t != t_ + 1) {
    throw Error(ErrorCode::kInvalidParameter, "t must advance by one");
  }
  const bool compensated = t > kCompensateAbove;
  numerator_sum_.Add(IndexPower(t, (k_ - 1.0) / 2.0), compensated);
  denominator_sum_.Add(IndexPower(t, k_ / 2.0), compensated);
  t_ = t;
}

double WeakErgodicBoundTracker::Value(double radius, double max_g_norm) const {
  if (t_ < 1) throw Error(ErrorCode::kInvalidParameter, "t must be >= 1");
  const double lead = IndexPower(t_, (k_ + 1.0) / 2.0);
  return (lead + numerator_sum_.total) / (2.0 * denominator_sum_.total) *
         radius * max_g_norm;
}

double PowerSum(int64_t t, double exponent) {
  double total = 0.0;
  double compensation = 0.0;
  for (int64_t s = 1; s <= t; ++s) {
    const double v = IndexPower(s, exponent);
    if (s <= kCompensateAbove) {
      total += v;
    } else {
      const double y = v - compensation;
      const double next = total + y;
      compensation = (next - total) - y;
      total = next;
    }
  }
  return total;
}

double WeakErgodicBound(double radius, int64_t t, double k,
                        double max_g_norm) {
  if (!std::isfinite(k) || k < -1.0) {
    throw Error(ErrorCode::kInvalidParameter, "k must be >= -1");
  }
  if (t < 1) throw Error(ErrorCode::kInvalidParameter, "t must be >= 1");
  const double lead = IndexPower(t, (k + 1.0) / 2.0);
  return (lead + PowerSum(t, (k - 1.0) / 2.0)) /
         (2.0 * PowerSum(t, k / 2.0)) * radius * max_g_norm;
}

std::string BoundLabel::ToString() const {
  switch (kind) {
    case BoundKind::kConstantErgodic:
      return "ConstantErgodic";
    case BoundKind::kClassicErgodic:
      return "ClassicErgodic";
    case BoundKind::kNesterovSubopt:
      return "NesterovSubopt";
    case BoundKind::kFamilyErgodic:
      return "FamilyErgodic";
    case BoundKind::kWeakErgodic:
      return "WeakErgodic(k=" + FormatShort(k) + ")";
  }
  return "unknown";
}

bool CheckCertificate(double gap, double bound) {
  return gap <= bound * (1.0 + kRelTol) + kAbsTol;
}

}  // namespace psg
