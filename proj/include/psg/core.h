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

// Domain types shared by the solver, step-size policies, averaging
// accumulators, bound evaluators and the experiment runner.

#ifndef PSG_CORE_H_
#define PSG_CORE_H_

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace psg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ErrorCode {
  kInvalidParameter,
  kShapeError,
  kNumericError,
  kZeroSubgradient,
  kSubdifferentialEmpty,
  kConfigError,
  kIoError,
};

// Stable kebab-case name, e.g. "invalid-parameter".
const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const { return code_; }
  // Iteration index attached to numeric errors raised inside a run.
  std::optional<int64_t> iteration() const { return iteration_; }

  static Error AtIteration(ErrorCode code, const std::string& detail,
                           int64_t s);

 private:
  ErrorCode code_;
  std::optional<int64_t> iteration_;
};

// Certificate tolerances: every inequality `lhs <= rhs` is accepted when
// lhs <= rhs + kRelTol * scale + kAbsTol.
inline constexpr double kRelTol = 1e-9;
inline constexpr double kAbsTol = 1e-12;

bool LessOrClose(double lhs, double rhs, double scale);
inline bool LessOrClose(double lhs, double rhs) {
  return LessOrClose(lhs, rhs, std::abs(rhs));
}

bool AllFinite(const Vector& v);

// Oracle output at a point. An empty `subgradient` means the
// subdifferential is empty there (f = -sqrt(x) at x = 0).
struct SubgradientResult {
  double value = 0.0;
  std::optional<Vector> subgradient;

  bool empty() const { return !subgradient.has_value(); }
};

using Oracle = std::function<SubgradientResult(const Vector&)>;

class ProjectionOperator;

struct ProblemInstance {
  std::string name;
  int dimension = 0;
  Oracle oracle;
  // Returns the minimal-norm element of the subdifferential; empty when the
  // problem does not provide one.
  Oracle minimal_norm_oracle;
  std::shared_ptr<const ProjectionOperator> projector;
  double radius = 0.0;
  std::optional<double> lipschitz;
  std::optional<double> optimum_value;
  std::optional<Vector> optimum_point;

  double Value(const Vector& x) const { return oracle(x).value; }
};

// Returns true iff f(z) >= f(x) + g^T (z - x) - tol where g is the oracle's
// subgradient at x. Throws kSubdifferentialEmpty when there is none.
bool SubgradientInequalityCheck(const Oracle& oracle, const Vector& x,
                                const Vector& z);

enum class StopReason {
  kBudgetExhausted,
  kZeroSubgradient,
  kEmptySubdifferential,
};

const char* StopReasonName(StopReason reason);

// One row of a solver trace. Scheme and bound entries keep insertion order
// so the CSV header follows the configured weight exponents.
struct IterationRecord {
  int64_t s = 0;
  double eta = 0.0;
  double g_norm = 0.0;
  std::optional<double> big_g;
  double f_x = 0.0;
  double f_best = 0.0;
  std::vector<std::pair<std::string, double>> averaged_values;
  std::vector<std::pair<std::string, double>> bounds;
};

using Trace = std::vector<IterationRecord>;

struct CertificateOutcome {
  bool passed = true;
  int64_t checks = 0;
  std::optional<int64_t> first_violation;
  // Worst observed lhs - rhs over all checks.
  double worst_slack = -std::numeric_limits<double>::infinity();

  void Record(int64_t s, bool ok, double slack);
};

struct RunReport {
  int64_t iterations_run = 0;
  int64_t restarts = 0;
  StopReason stop_reason = StopReason::kBudgetExhausted;
  double max_g_norm = 0.0;

  std::optional<double> best_value;
  std::optional<Vector> best_point;
  int64_t best_index = 0;

  std::map<std::string, Vector> averaged_points;
  std::map<std::string, double> averaged_values;
  std::map<std::string, double> bound_values;
  std::map<std::string, CertificateOutcome> certificates;

  // Value standing in for f* in certificates, and where it came from
  // ("known" or "reference").
  std::optional<double> optimum_value;
  std::string optimum_source;

  bool AllCertificatesPassed() const;
};

// Label used for weighted-average schemes and CSV columns, e.g. "k0",
// "k-0.5", "k2".
std::string WeightLabel(double k);

// Shortest decimal form that round-trips (used in labels).
std::string FormatShort(double v);

}  // namespace psg

#endif  // PSG_CORE_H_
