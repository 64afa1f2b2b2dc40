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
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "psg/projection.h"
#include "psg/stepsize.h"

namespace psg {
namespace {

TEST(WeightTest, Examples) {
  EXPECT_DOUBLE_EQ(Weight(WeightRule(0.0), 7, 0.3), 1.0);
  EXPECT_DOUBLE_EQ(Weight(WeightRule(-1.0), 7, 0.3), 0.3);
  EXPECT_DOUBLE_EQ(Weight(WeightRule(2.0), 9, 0.3), 9.0);
  EXPECT_THROW(WeightRule(-1.5), Error);
}

TEST(StreamingAverageTest, Examples) {
  StreamingAverage acc = UpdateAverage({}, 1.0, Eigen::Vector2d(2.0, 0.0));
  EXPECT_EQ(acc.mean(), Eigen::Vector2d(2.0, 0.0));
  EXPECT_EQ(acc.total_weight(), 1.0);

  StreamingAverage equal = UpdateAverage({}, 1.0, Vector::Constant(1, 0.0));
  equal.Update(1.0, Vector::Constant(1, 1.0));
  EXPECT_DOUBLE_EQ(equal.mean()[0], 0.5);

  // sum w x / sum w = (0 + 12) / 4.
  StreamingAverage weighted = UpdateAverage({}, 1.0, Vector::Constant(1, 0.0));
  weighted.Update(3.0, Vector::Constant(1, 4.0));
  EXPECT_DOUBLE_EQ(weighted.mean()[0], 3.0);
  EXPECT_DOUBLE_EQ(weighted.total_weight(), 4.0);
}

TEST(StreamingAverageTest, RejectsBadInput) {
  StreamingAverage acc;
  EXPECT_THROW(acc.Update(std::nan(""), Vector::Zero(1)), Error);
  EXPECT_THROW(acc.Update(1.0, Vector::Constant(1, INFINITY)), Error);
  EXPECT_THROW(acc.Update(0.0, Vector::Zero(1)), Error);
  acc.Update(1.0, Vector::Zero(1));
  EXPECT_THROW(acc.Update(1.0, Vector::Zero(2)), Error);
}

TEST(StreamingAverageTest, MatchesDirectQuotient) {
  std::mt19937_64 rng(5);
  std::lognormal_distribution<double> weight(0.0, 2.0);
  std::normal_distribution<double> coord(0.0, 10.0);
  for (int length : {1, 10, 1000, 10000}) {
    StreamingAverage acc;
    Eigen::Vector3d numerator = Eigen::Vector3d::Zero();
    double denominator = 0.0;
    for (int i = 0; i < length; ++i) {
      const double w = weight(rng);
      const Eigen::Vector3d x(coord(rng), coord(rng), coord(rng));
      acc.Update(w, x);
      numerator += w * x;
      denominator += w;
    }
    const Eigen::Vector3d direct = numerator / denominator;
    EXPECT_LE((acc.mean() - direct).norm(), 1e-9 * std::max(1.0, direct.norm()));
    EXPECT_NEAR(acc.total_weight(), denominator, 1e-9 * denominator);
  }
}

TEST(StreamingAverageTest, UniformWeightsGivePlainMean) {
  StreamingAverage acc;
  const WeightRule uniform(0.0);
  double sum = 0.0;
  for (int s = 1; s <= 500; ++s) {
    const double x = std::sin(s);
    sum += x;
    acc.Update(uniform(s, 0.01 * s), Vector::Constant(1, x));
  }
  EXPECT_NEAR(acc.mean()[0], sum / 500.0, 1e-13);
}

TEST(StreamingAverageTest, StaysFeasible) {
  const auto ball = ProjectionOperator::MakeBall(Vector::Zero(5), 2.0);
  std::mt19937_64 rng(11);
  std::exponential_distribution<double> weight(1.0);
  StreamingAverage acc;
  for (int i = 0; i < 2000; ++i) {
    acc.Update(weight(rng) + 1e-6, ball.SampleFeasible(rng));
    ASSERT_TRUE(ball.IsFeasible(acc.mean()));
  }
}

// With classic steps eta_s = R / (L sqrt(s)), eta_s^(-k) is proportional to
// s^(k/2) for k in (-1, 0].
TEST(WeightTest, ClassicWeightsProportionalToIndexPower) {
  for (double k : {-0.75, -0.5, -0.25, 0.0}) {
    const WeightRule rule(k);
    const double ratio1 = rule(1, ClassicStep(3.0, 2.0, 1));
    for (int64_t s = 1; s <= 100; ++s) {
      const double ratio = rule(s, ClassicStep(3.0, 2.0, s)) / std::pow(s, k / 2.0);
      EXPECT_NEAR(ratio, ratio1, 1e-12 * ratio1);
    }
  }
}

TEST(BestIterateTest, Examples) {
  BestIterate best = UpdateBest({}, 1, 5.0, Vector::Constant(1, 1.0));
  EXPECT_EQ(best.best_value(), 5.0);
  best = UpdateBest(best, 2, 3.0, Vector::Constant(1, 2.0));
  EXPECT_EQ(best.best_value(), 3.0);
  EXPECT_EQ(best.best_index(), 2);
  best = UpdateBest(best, 3, 3.0, Vector::Constant(1, 3.0));
  EXPECT_EQ(best.best_index(), 2);
  EXPECT_EQ(best.best_point()[0], 2.0);
}

}  // namespace
}  // namespace psg
