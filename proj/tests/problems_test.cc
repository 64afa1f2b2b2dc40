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

#include "psg/problems.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <random>

#include "gtest/gtest.h"

namespace psg {
namespace {

Vector Scalar(double v) { return Vector::Constant(1, v); }

TEST(SqrtExampleTest, Oracle) {
  const ProblemInstance p = MakeSqrtExample();
  const SubgradientResult quarter = p.oracle(Scalar(0.25));
  EXPECT_DOUBLE_EQ(quarter.value, -0.5);
  EXPECT_DOUBLE_EQ((*quarter.subgradient)[0], -1.0);
  const SubgradientResult one = p.oracle(Scalar(1.0));
  EXPECT_DOUBLE_EQ(one.value, -1.0);
  EXPECT_DOUBLE_EQ((*one.subgradient)[0], -0.5);
  EXPECT_TRUE(p.oracle(Scalar(0.0)).empty());
  EXPECT_FALSE(p.lipschitz.has_value());
  EXPECT_EQ(p.optimum_value, -1.0);
  EXPECT_EQ(p.radius, 1.0);
}

TEST(SqrtExampleTest, SubgradientsAreUnbounded) {
  const ProblemInstance p = MakeSqrtExample();
  for (int k = 1; k <= 6; ++k) {
    const double g = std::abs((*p.oracle(Scalar(std::pow(10.0, -2 * k))).subgradient)[0]);
    EXPECT_NEAR(g, std::pow(10.0, k) / 2.0, 1e-9 * g);
  }
}

TEST(AbsProblemTest, Oracle) {
  const ProblemInstance p1 = MakeAbsProblem(1);
  EXPECT_EQ(p1.oracle(Scalar(0.5)).value, 0.5);
  EXPECT_EQ((*p1.oracle(Scalar(0.5)).subgradient)[0], 1.0);
  EXPECT_EQ(p1.oracle(Scalar(0.0)).value, 0.0);
  EXPECT_EQ((*p1.oracle(Scalar(0.0)).subgradient)[0], 0.0);
  const ProblemInstance p2 = MakeAbsProblem(2);
  const SubgradientResult r = p2.oracle(Eigen::Vector2d(-1.0, 1.0));
  EXPECT_EQ(r.value, 2.0);
  EXPECT_EQ(*r.subgradient, Eigen::Vector2d(-1.0, 1.0));
  EXPECT_DOUBLE_EQ(*p2.lipschitz, std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(p2.radius, std::sqrt(2.0));
  EXPECT_THROW(MakeAbsProblem(0), Error);
}

TEST(LassoTest, ValueAndSubgradientAtOrigin) {
  const ProblemInstance p = MakeLasso(3, 20, 12, 50.0, 10.0);
  auto lasso = GenerateLasso(3, 20, 12, 50.0, 10.0);
  const SubgradientResult r = p.oracle(Vector::Zero(20));
  EXPECT_DOUBLE_EQ(r.value, lasso.y.squaredNorm());
  EXPECT_LE((*r.subgradient - (-2.0 * lasso.phi.transpose() * lasso.y)).norm(), 1e-12);
  EXPECT_FALSE(p.lipschitz.has_value());
  EXPECT_FALSE(p.optimum_value.has_value());
}

TEST(LassoTest, ScalarLeastSquares) {
  LassoInstance lasso;
  lasso.phi = Matrix::Constant(1, 1, 1.0);
  lasso.y = Scalar(2.0);
  lasso.lambda = 0.0;
  lasso.radius = 10.0;
  EXPECT_DOUBLE_EQ(lasso.Value(Scalar(1.0)), 1.0);
  EXPECT_DOUBLE_EQ(lasso.Subgradient(Scalar(1.0))[0], -2.0);
}

TEST(LassoTest, SameSeedIsBitIdentical) {
  const LassoInstance a = GenerateLasso(17, 64, 40, 50.0, 10.0);
  const LassoInstance b = GenerateLasso(17, 64, 40, 50.0, 10.0);
  EXPECT_EQ(a.phi, b.phi);
  EXPECT_EQ(a.y, b.y);
  const LassoInstance c = GenerateLasso(18, 64, 40, 50.0, 10.0);
  EXPECT_NE(a.phi, c.phi);
}

TEST(LassoTest, PlantedSignalShape) {
  const LassoInstance lasso = GenerateLasso(1, 64, 40, 50.0, 10.0);
  EXPECT_EQ(lasso.phi.rows(), 40);
  EXPECT_EQ(lasso.phi.cols(), 64);
  EXPECT_EQ((lasso.planted.array() != 0.0).count(), 4);
  EXPECT_EQ(lasso.planted.cwiseAbs().maxCoeff(), 1.0);
  // Noise sigma is 0.01.
  EXPECT_LT((lasso.y - lasso.phi * lasso.planted).norm(), 0.01 * std::sqrt(40.0) * 2.0);
}

TEST(LassoTest, ConvexAlongRandomChords) {
  const ProblemInstance p = MakeLasso(5, 32, 20, 50.0, 10.0);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 500; ++i) {
    const Vector x = p.projector->SampleFeasible(rng);
    const Vector z = p.projector->SampleFeasible(rng);
    const double mid = p.Value(0.5 * (x + z));
    const double chord = 0.5 * (p.Value(x) + p.Value(z));
    EXPECT_TRUE(LessOrClose(mid, chord));
  }
}

TEST(LassoTest, MinimalNormSubgradientIsValidAndShorter) {
  auto lasso = std::make_shared<LassoInstance>(GenerateLasso(2, 16, 10, 50.0, 10.0));
  const ProblemInstance p = MakeLassoProblem(lasso);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    Vector x = p.projector->SampleFeasible(rng);
    for (int j = 0; j < x.size(); j += 2) x[j] = 0.0;
    const Vector z = p.projector->SampleFeasible(rng);
    EXPECT_TRUE(SubgradientInequalityCheck(p.minimal_norm_oracle, x, z));
    EXPECT_LE(lasso->MinimalNormSubgradient(x).norm(), lasso->Subgradient(x).norm() + 1e-12);
  }
}

// Every analytic subgradient satisfies f(z) >= f(x) + g^T (z - x).
class SubgradientValidityTest : public ::testing::TestWithParam<int> {};

TEST_P(SubgradientValidityTest, ThousandRandomPairs) {
  ProblemInstance p;
  switch (GetParam()) {
    case 0:
      p = MakeSqrtExample();
      break;
    case 1:
      p = MakeAbsProblem(1);
      break;
    case 2:
      p = MakeAbsProblem(7);
      break;
    default:
      p = MakeLasso(9, 24, 16, 50.0, 10.0);
      break;
  }
  std::mt19937_64 rng(100 + GetParam());
  int checked = 0;
  while (checked < 1000) {
    Vector x = p.projector->SampleFeasible(rng);
    if (GetParam() == 1 && checked % 10 == 0) x.setZero();  // kink
    const Vector z = p.projector->SampleFeasible(rng);
    if (p.oracle(x).empty()) continue;
    ASSERT_TRUE(SubgradientInequalityCheck(p.oracle, x, z)) << p.name;
    ++checked;
  }
}

INSTANTIATE_TEST_SUITE_P(AllProblems, SubgradientValidityTest,
                         ::testing::Values(0, 1, 2, 3));

TEST(LassoCsvTest, WriteThenReadReproducesData) {
  const auto path = std::filesystem::temp_directory_path() / "psg_lasso_test.csv";
  const LassoInstance lasso = GenerateLasso(4, 12, 7, 50.0, 10.0);
  WriteLassoCsv(lasso, path.string());
  const LassoInstance loaded = ReadLassoCsv(path.string(), 50.0, 10.0);
  EXPECT_EQ(loaded.phi, lasso.phi);
  EXPECT_EQ(loaded.y, lasso.y);
  std::filesystem::remove(path);
}

TEST(LassoCsvTest, ReportsBadRows) {
  const auto path = std::filesystem::temp_directory_path() / "psg_lasso_bad.csv";
  {
    std::FILE* f = std::fopen(path.string().c_str(), "w");
    std::fputs("phi_0,y\n1,2\n3\n", f);
    std::fclose(f);
  }
  try {
    ReadLassoCsv(path.string(), 1.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
  }
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace psg
