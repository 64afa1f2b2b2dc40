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

// Euclidean projections onto a ball or a box.

#ifndef PSG_PROJECTION_H_
#define PSG_PROJECTION_H_

#include <random>
#include <variant>

#include "psg/core.h"

namespace psg {

class ProjectionOperator {
 public:
  struct Ball {
    Vector center;
    double radius = 0.0;
  };
  struct Box {
    Vector lower;
    Vector upper;
  };

  // radius must be >= 0 and finite.
  static ProjectionOperator MakeBall(Vector center, double radius);
  // lower <= upper componentwise.
  static ProjectionOperator MakeBox(Vector lower, Vector upper);
  static ProjectionOperator MakeBox(int dimension, double lower, double upper);

  int dimension() const;
  bool is_ball() const { return std::holds_alternative<Ball>(set_); }
  const Ball& ball() const { return std::get<Ball>(set_); }
  const Box& box() const { return std::get<Box>(set_); }

  // Nearest feasible point. Throws kShapeError on dimension mismatch.
  Vector Project(const Vector& y) const;

  // How far x sits outside the set (0 when feasible): distance beyond the
  // ball radius, or the largest box-bound violation.
  double Residual(const Vector& x) const;
  bool IsFeasible(const Vector& x) const;

  // Uniform sample from the set.
  Vector SampleFeasible(std::mt19937_64& rng) const;

 private:
  explicit ProjectionOperator(std::variant<Ball, Box> set)
      : set_(std::move(set)) {}

  void CheckShape(const Vector& y) const;

  std::variant<Ball, Box> set_;
};

}  // namespace psg

#endif  // PSG_PROJECTION_H_
