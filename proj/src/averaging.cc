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

#include "psg/averaging.h"

#include <cmath>

#include "psg/stepsize.h"

namespace psg {

WeightRule::WeightRule(double k) : k_(k) {
  if (!std::isfinite(k) || k < -1.0) {
    throw Error(ErrorCode::kInvalidParameter, "weight exponent k must be >= -1");
  }
}

double WeightRule::operator()(int64_t s, double eta) const {
  if (s < 1) throw Error(ErrorCode::kInvalidParameter, "index must be >= 1");
  if (k_ > 0.0) return IndexPower(s, k_ / 2.0);
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw Error(ErrorCode::kInvalidParameter, "step must be positive");
  }
  return std::pow(eta, -k_);
}

double Weight(const WeightRule& rule, int64_t s, double eta) {
  return rule(s, eta);
}

void StreamingAverage::Update(double w, const Vector& x) {
  if (!std::isfinite(w) || !AllFinite(x)) {
    throw Error(ErrorCode::kNumericError, "non-finite weight or point");
  }
  if (!(w > 0.0)) throw Error(ErrorCode::kInvalidParameter, "weight must be > 0");
  if (count_ == 0) {
    mean_ = x;
    total_weight_ = w;
  } else {
    if (x.size() != mean_.size()) {
      throw Error(ErrorCode::kShapeError, "point dimension changed");
    }
    total_weight_ += w;
    mean_ += (w / total_weight_) * (x - mean_);
  }
  ++count_;
}

StreamingAverage UpdateAverage(StreamingAverage acc, double w,
                               const Vector& x) {
  acc.Update(w, x);
  return acc;
}

void BestIterate::Update(int64_t s, double f_x, const Vector& x) {
  if (!std::isfinite(f_x)) return;
  if (!best_value_ || f_x < *best_value_) {
    best_value_ = f_x;
    best_point_ = x;
    best_index_ = s;
  }
}

BestIterate UpdateBest(BestIterate acc, int64_t s, double f_x,
                       const Vector& x) {
  acc.Update(s, f_x, x);
  return acc;
}

}  // namespace psg
