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

// Step-size rules for the projected subgradient method.
//
//   constant   eta = R / (L sqrt(t))           fixed horizon t
//   classic    eta_s = R / (L sqrt(s))
//   nesterov   eta_s = R / (|g_s| sqrt(s))
//   family     eta_s = R / (G_s s^(a/2)),  G_s = max(G_{s-1}, |g_s| s^((1-a)/2))
//
// The family rule needs no Lipschitz constant; G_0 is "minus infinity" and
// is kept as an empty optional rather than a floating -inf.

#ifndef PSG_STEPSIZE_H_
#define PSG_STEPSIZE_H_

#include <cstdint>
#include <optional>
#include <string>

namespace psg {

// s^e for the schedule powers; used by every rule so that equal
// parameters give bitwise-equal steps across rules.
double IndexPower(int64_t s, double exponent);

double ConstantStep(double radius, double lipschitz, int64_t horizon);
double ClassicStep(double radius, double lipschitz, int64_t s);
// Throws kZeroSubgradient when g_norm == 0.
double NesterovStep(double radius, double g_norm, int64_t s);
// max(previous, g_norm * s^((1-a)/2)); an empty `previous` acts as -inf and
// requires s == 1.
double FamilyUpdateG(std::optional<double> previous, double g_norm, int64_t s,
                     double a);
// Throws kZeroSubgradient when big_g <= 0.
double FamilyStep(double radius, double big_g, int64_t s, double a);

enum class StepKind { kConstant, kClassic, kNesterov, kFamily };

const char* StepKindName(StepKind kind);

class StepSizePolicy {
 public:
  static StepSizePolicy Constant(double radius, double lipschitz,
                                 int64_t horizon);
  static StepSizePolicy Classic(double radius, double lipschitz);
  static StepSizePolicy Nesterov(double radius);
  static StepSizePolicy Family(double radius, double a);

  StepKind kind() const { return kind_; }
  double radius() const { return radius_; }
  std::optional<double> lipschitz() const { return lipschitz_; }
  std::optional<int64_t> horizon() const { return horizon_; }
  double a() const { return a_; }
  std::optional<double> big_g() const { return big_g_; }
  int64_t last_index() const { return last_s_; }

  // Same rule with a different R (the experiment runner fills R from the
  // problem instance).
  StepSizePolicy WithRadius(double radius) const;

  // G_s that Next(s, g_norm) would commit. Family only.
  double PeekG(int64_t s, double g_norm) const;

  // Advances to iteration s (must be last_index() + 1) and returns eta_s.
  double Next(int64_t s, double g_norm);

  // Step the rule would assign at s when g_s = 0 and no move is taken, if
  // it is defined (not for nesterov, nor for family before any nonzero
  // subgradient).
  std::optional<double> StepAtZeroSubgradient(int64_t s) const;

  // Back to the freshly constructed state (G = -inf, index 0).
  void Reset();

  // e.g. "family(a=1)", "classic(L=2)", "nesterov".
  std::string Label() const;

  bool operator==(const StepSizePolicy&) const = default;

 private:
  StepSizePolicy(StepKind kind, double radius) : kind_(kind), radius_(radius) {}

  StepKind kind_;
  double radius_;
  std::optional<double> lipschitz_;
  std::optional<int64_t> horizon_;
  double a_ = 1.0;
  std::optional<double> big_g_;
  int64_t last_s_ = 0;
};

}  // namespace psg

#endif  // PSG_STEPSIZE_H_
