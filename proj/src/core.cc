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

#include "psg/core.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>

namespace psg {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParameter:
      return "invalid-parameter";
    case ErrorCode::kShapeError:
      return "shape-error";
    case ErrorCode::kNumericError:
      return "numeric-error";
    case ErrorCode::kZeroSubgradient:
      return "zero-subgradient";
    case ErrorCode::kSubdifferentialEmpty:
      return "subdifferential-empty";
    case ErrorCode::kConfigError:
      return "config-error";
    case ErrorCode::kIoError:
      return "io-error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(ErrorCodeName(code)) +
                         (detail.empty() ? "" : ": " + detail)),
      code_(code) {}

Error Error::AtIteration(ErrorCode code, const std::string& detail,
                         int64_t s) {
  Error e(code, detail + " (at s=" + std::to_string(s) + ")");
  e.iteration_ = s;
  return e;
}

bool LessOrClose(double lhs, double rhs, double scale) {
  return lhs <= rhs + kRelTol * std::abs(scale) + kAbsTol;
}

bool AllFinite(const Vector& v) { return v.allFinite(); }

bool SubgradientInequalityCheck(const Oracle& oracle, const Vector& x,
                                const Vector& z) {
  if (x.size() != z.size()) {
    throw Error(ErrorCode::kShapeError, "points differ in dimension");
  }
  const SubgradientResult at_x = oracle(x);
  if (at_x.empty()) throw Error(ErrorCode::kSubdifferentialEmpty, "");
  const double f_z = oracle(z).value;
  const double linear = at_x.subgradient->dot(z - x);
  const double model = at_x.value + linear;
  const double scale =
      std::max({std::abs(f_z), std::abs(at_x.value), std::abs(linear)});
  return LessOrClose(model, f_z, scale);
}

const char* StopReasonName(StopReason reason) {
  switch (reason) {
    case StopReason::kBudgetExhausted:
      return "budget-exhausted";
    case StopReason::kZeroSubgradient:
      return "zero-subgradient";
    case StopReason::kEmptySubdifferential:
      return "empty-subdifferential";
  }
  return "unknown";
}

void CertificateOutcome::Record(int64_t s, bool ok, double slack) {
  ++checks;
  worst_slack = std::max(worst_slack, slack);
  if (!ok && passed) {
    passed = false;
    first_violation = s;
  }
}

bool RunReport::AllCertificatesPassed() const {
  return std::all_of(certificates.begin(), certificates.end(),
                     [](const auto& kv) { return kv.second.passed; });
}

std::string FormatShort(double v) {
  char buf[32];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string WeightLabel(double k) { return "k" + FormatShort(k); }

}  // namespace psg
