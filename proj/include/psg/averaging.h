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

// Weak-ergodic weights and streaming accumulators. Nothing here stores the
// iterate history: a weighted mean is one vector plus its total weight.

#ifndef PSG_AVERAGING_H_
#define PSG_AVERAGING_H_

#include <cstdint>
#include <optional>

#include "psg/core.h"

namespace psg {

// w_s = eta_s^(-k) for -1 <= k <= 0, and s^(k/2) for k > 0.
class WeightRule {
 public:
  // Throws kInvalidParameter for k < -1 or non-finite k.
  explicit WeightRule(double k);

  double k() const { return k_; }
  double operator()(int64_t s, double eta) const;

 private:
  double k_;
};

double Weight(const WeightRule& rule, int64_t s, double eta);

class StreamingAverage {
 public:
  StreamingAverage() = default;

  // mean <- mean + (w / W') (x - mean), W' = W + w. Throws kNumericError for
  // non-finite inputs and kInvalidParameter for w <= 0.
  void Update(double w, const Vector& x);

  bool empty() const { return count_ == 0; }
  const Vector& mean() const { return mean_; }
  double total_weight() const { return total_weight_; }
  int64_t count() const { return count_; }

  void Reset() { *this = StreamingAverage(); }

 private:
  Vector mean_;
  double total_weight_ = 0.0;
  int64_t count_ = 0;
};

// Functional form of StreamingAverage::Update.
StreamingAverage UpdateAverage(StreamingAverage acc, double w, const Vector& x);

// Lowest objective value seen so far; ties keep the earliest index.
class BestIterate {
 public:
  void Update(int64_t s, double f_x, const Vector& x);

  bool empty() const { return !best_value_.has_value(); }
  std::optional<double> best_value() const { return best_value_; }
  const Vector& best_point() const { return best_point_; }
  int64_t best_index() const { return best_index_; }

  void Reset() { *this = BestIterate(); }

 private:
  std::optional<double> best_value_;
  Vector best_point_;
  int64_t best_index_ = 0;
};

BestIterate UpdateBest(BestIterate acc, int64_t s, double f_x, const Vector& x);

}  // namespace psg

#endif  // PSG_AVERAGING_H_
