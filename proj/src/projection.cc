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

#include "psg/projection.h"

#include <cmath>

namespace psg {

ProjectionOperator ProjectionOperator::MakeBall(Vector center, double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius) || !AllFinite(center)) {
    throw Error(ErrorCode::kInvalidParameter, "ball radius must be finite >= 0");
  }
  return ProjectionOperator(Ball{std::move(center), radius});
}

ProjectionOperator ProjectionOperator::MakeBox(Vector lower, Vector upper) {
  if (lower.size() != upper.size()) {
    throw Error(ErrorCode::kShapeError, "box bounds differ in dimension");
  }
  if (!AllFinite(lower) || !AllFinite(upper) ||
      (lower.array() > upper.array()).any()) {
    throw Error(ErrorCode::kInvalidParameter, "box requires lower <= upper");
  }
  return ProjectionOperator(Box{std::move(lower), std::move(upper)});
}

ProjectionOperator ProjectionOperator::MakeBox(int dimension, double lower,
                                               double upper) {
  return MakeBox(Vector::Constant(dimension, lower),
                 Vector::Constant(dimension, upper));
}

int ProjectionOperator::dimension() const {
  return static_cast<int>(is_ball() ? ball().center.size()
                                    : box().lower.size());
}

void ProjectionOperator::CheckShape(const Vector& y) const {
  if (y.size() != dimension()) {
    throw Error(ErrorCode::kShapeError,
                "expected dimension " + std::to_string(dimension()) +
                    ", got " + std::to_string(y.size()));
  }
}

Vector ProjectionOperator::Project(const Vector& y) const {
  CheckShape(y);
  if (const auto* b = std::get_if<Ball>(&set_)) {
    const Vector offset = y - b->center;
    const double dist = offset.stableNorm();
    if (dist <= b->radius) return y;
    return b->center + (b->radius / dist) * offset;
  }
  const auto& box = std::get<Box>(set_);
  return y.cwiseMax(box.lower).cwiseMin(box.upper);
}

double ProjectionOperator::Residual(const Vector& x) const {
  CheckShape(x);
  if (const auto* b = std::get_if<Ball>(&set_)) {
    return std::max(0.0, (x - b->center).stableNorm() - b->radius);
  }
  const auto& box = std::get<Box>(set_);
  const double below = (box.lower - x).maxCoeff();
  const double above = (x - box.upper).maxCoeff();
  return std::max({0.0, below, above});
}

bool ProjectionOperator::IsFeasible(const Vector& x) const {
  const double scale = is_ball() ? ball().radius + ball().center.stableNorm()
                                 : std::max(box().lower.cwiseAbs().maxCoeff(),
                                            box().upper.cwiseAbs().maxCoeff());
  return LessOrClose(Residual(x), 0.0, scale);
}

Vector ProjectionOperator::SampleFeasible(std::mt19937_64& rng) const {
  const int n = dimension();
  if (const auto* b = std::get_if<Ball>(&set_)) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit;
    Vector direction(n);
    double norm = 0.0;
    while (norm == 0.0) {
      for (int i = 0; i < n; ++i) direction[i] = normal(rng);
      norm = direction.stableNorm();
    }
    const double r = b->radius * std::pow(unit(rng), 1.0 / n);
    return b->center + (r / norm) * direction;
  }
  const auto& box = std::get<Box>(set_);
  Vector x(n);
  for (int i = 0; i < n; ++i) {
    std::uniform_real_distribution<double> coord(box.lower[i], box.upper[i]);
    x[i] = box.lower[i] == box.upper[i] ? box.lower[i] : coord(rng);
  }
  return x;
}

}  // namespace psg
