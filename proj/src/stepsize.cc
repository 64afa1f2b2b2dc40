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

#include "psg/stepsize.h"

#include <algorithm>
#include <cmath>

#include "psg/core.h"

namespace psg {
namespace {

void RequirePositive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::kInvalidParameter,
                std::string(what) + " must be positive and finite");
  }
}

void RequireIndex(int64_t s) {
  if (s < 1) throw Error(ErrorCode::kInvalidParameter, "index must be >= 1");
}

void RequireA(double a) {
  if (!(a >= 0.0 && a <= 1.0)) {
    throw Error(ErrorCode::kInvalidParameter, "a must lie in [0, 1]");
  }
}

}  // namespace

double IndexPower(int64_t s, double exponent) {
  return std::pow(static_cast<double>(s), exponent);
}

double ConstantStep(double radius, double lipschitz, int64_t horizon) {
  RequirePositive(radius, "R");
  RequirePositive(lipschitz, "L");
  RequireIndex(horizon);
  return radius / (lipschitz * IndexPower(horizon, 0.5));
}

double ClassicStep(double radius, double lipschitz, int64_t s) {
  RequirePositive(radius, "R");
  RequirePositive(lipschitz, "L");
  RequireIndex(s);
  return radius / (lipschitz * IndexPower(s, 0.5));
}

double NesterovStep(double radius, double g_norm, int64_t s) {
  RequirePositive(radius, "R");
  RequireIndex(s);
  if (g_norm == 0.0) throw Error(ErrorCode::kZeroSubgradient, "");
  RequirePositive(g_norm, "subgradient norm");
  return radius / (g_norm * IndexPower(s, 0.5));
}

double FamilyUpdateG(std::optional<double> previous, double g_norm, int64_t s,
                     double a) {
  RequireA(a);
  RequireIndex(s);
  if (!(g_norm >= 0.0) || !std::isfinite(g_norm)) {
    throw Error(ErrorCode::kNumericError, "subgradient norm must be finite");
  }
  if (!previous && s != 1) {
    throw Error(ErrorCode::kInvalidParameter,
                "uninitialized G is only valid at s = 1");
  }
  const double candidate = g_norm * IndexPower(s, (1.0 - a) / 2.0);
  return previous ? std::max(*previous, candidate) : candidate;
}

double FamilyStep(double radius, double big_g, int64_t s, double a) {
  RequirePositive(radius, "R");
  RequireA(a);
  RequireIndex(s);
  if (!(big_g > 0.0)) throw Error(ErrorCode::kZeroSubgradient, "G_s <= 0");
  return radius / (big_g * IndexPower(s, a / 2.0));
}

const char* StepKindName(StepKind kind) {
  switch (kind) {
    case StepKind::kConstant:
      return "constant";
    case StepKind::kClassic:
      return "classic";
    case StepKind::kNesterov:
      return "nesterov";
    case StepKind::kFamily:
      return "family";
  }
  return "unknown";
}

StepSizePolicy StepSizePolicy::Constant(double radius, double lipschitz,
                                        int64_t horizon) {
  ConstantStep(radius, lipschitz, horizon);  // validates
  StepSizePolicy p(StepKind::kConstant, radius);
  p.lipschitz_ = lipschitz;
  p.horizon_ = horizon;
  return p;
}

StepSizePolicy StepSizePolicy::Classic(double radius, double lipschitz) {
  ClassicStep(radius, lipschitz, 1);
  StepSizePolicy p(StepKind::kClassic, radius);
  p.lipschitz_ = lipschitz;
  return p;
}

StepSizePolicy StepSizePolicy::Nesterov(double radius) {
  RequirePositive(radius, "R");
  return StepSizePolicy(StepKind::kNesterov, radius);
}

StepSizePolicy StepSizePolicy::Family(double radius, double a) {
  RequirePositive(radius, "R");
  RequireA(a);
  StepSizePolicy p(StepKind::kFamily, radius);
  p.a_ = a;
  return p;
}

StepSizePolicy StepSizePolicy::WithRadius(double radius) const {
  RequirePositive(radius, "R");
  StepSizePolicy p = *this;
  p.radius_ = radius;
  p.Reset();
  return p;
}

double StepSizePolicy::PeekG(int64_t s, double g_norm) const {
  if (kind_ != StepKind::kFamily) {
    throw Error(ErrorCode::kInvalidParameter, "G is defined for family only");
  }
  return FamilyUpdateG(big_g_, g_norm, s, a_);
}

double StepSizePolicy::Next(int64_t s, double g_norm) {
  if (s != last_s_ + 1) {
    throw Error(ErrorCode::kInvalidParameter, "iteration indices must be consecutive");
  }
  double eta = 0.0;
  switch (kind_) {
    case StepKind::kConstant:
      eta = ConstantStep(radius_, *lipschitz_, *horizon_);
      break;
    case StepKind::kClassic:
      eta = ClassicStep(radius_, *lipschitz_, s);
      break;
    case StepKind::kNesterov:
      eta = NesterovStep(radius_, g_norm, s);
      break;
    case StepKind::kFamily: {
      const double g = FamilyUpdateG(big_g_, g_norm, s, a_);
      eta = FamilyStep(radius_, g, s, a_);
      big_g_ = g;
      break;
    }
  }
  last_s_ = s;
  return eta;
}

std::optional<double> StepSizePolicy::StepAtZeroSubgradient(int64_t s) const {
  switch (kind_) {
    case StepKind::kConstant:
      return ConstantStep(radius_, *lipschitz_, *horizon_);
    case StepKind::kClassic:
      return ClassicStep(radius_, *lipschitz_, s);
    case StepKind::kNesterov:
      return std::nullopt;
    case StepKind::kFamily:
      if (!big_g_ || !(*big_g_ > 0.0)) return std::nullopt;
      return FamilyStep(radius_, *big_g_, s, a_);
  }
  return std::nullopt;
}

void StepSizePolicy::Reset() {
  big_g_.reset();
  last_s_ = 0;
}

std::string StepSizePolicy::Label() const {
  switch (kind_) {
    case StepKind::kConstant:
      return "constant(L=" + FormatShort(*lipschitz_) +
             ",t=" + std::to_string(*horizon_) + ")";
    case StepKind::kClassic:
      return "classic(L=" + FormatShort(*lipschitz_) + ")";
    case StepKind::kNesterov:
      return "nesterov";
    case StepKind::kFamily:
      return "family(a=" + FormatShort(a_) + ")";
  }
  return "unknown";
}

}  // namespace psg
