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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

namespace psg {
namespace {

void RequireDim(const Vector& x, int dim) {
  if (x.size() != dim) {
    throw Error(ErrorCode::kShapeError, "expected dimension " +
                                            std::to_string(dim) + ", got " +
                                            std::to_string(x.size()));
  }
}

Vector Sign(const Vector& x) {
  return x.unaryExpr([](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); });
}

std::string Format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ProblemInstance MakeSqrtExample() {
  ProblemInstance p;
  p.name = "sqrt-example";
  p.dimension = 1;
  p.oracle = [](const Vector& x) {
    RequireDim(x, 1);
    if (x[0] < 0.0) {
      throw Error(ErrorCode::kInvalidParameter, "-sqrt(x) is undefined for x < 0");
    }
    SubgradientResult r;
    const double root = std::sqrt(x[0]);
    r.value = -root;
    if (x[0] > 0.0) r.subgradient = Vector::Constant(1, -0.5 / root);
    return r;
  };
  p.minimal_norm_oracle = p.oracle;  // singleton subdifferential where nonempty
  p.projector = std::make_shared<ProjectionOperator>(
      ProjectionOperator::MakeBox(1, 0.0, 1.0));
  p.radius = 1.0;
  p.optimum_value = -1.0;
  p.optimum_point = Vector::Constant(1, 1.0);
  return p;
}

ProblemInstance MakeAbsProblem(int dim) {
  if (dim < 1) throw Error(ErrorCode::kInvalidParameter, "dim must be >= 1");
  ProblemInstance p;
  p.name = "abs(dim=" + std::to_string(dim) + ")";
  p.dimension = dim;
  p.oracle = [dim](const Vector& x) {
    RequireDim(x, dim);
    return SubgradientResult{x.lpNorm<1>(), Sign(x)};
  };
  p.minimal_norm_oracle = p.oracle;
  p.projector = std::make_shared<ProjectionOperator>(
      ProjectionOperator::MakeBox(dim, -1.0, 1.0));
  p.radius = std::sqrt(static_cast<double>(dim));
  p.lipschitz = std::sqrt(static_cast<double>(dim));
  p.optimum_value = 0.0;
  p.optimum_point = Vector::Zero(dim);
  return p;
}

double LassoInstance::Value(const Vector& x) const {
  RequireDim(x, n());
  return (y - phi * x).squaredNorm() + lambda * x.lpNorm<1>();
}

Vector LassoInstance::Subgradient(const Vector& x) const {
  RequireDim(x, n());
  return 2.0 * phi.transpose() * (phi * x - y) + lambda * Sign(x);
}

Vector LassoInstance::MinimalNormSubgradient(const Vector& x) const {
  RequireDim(x, n());
  Vector g = 2.0 * phi.transpose() * (phi * x - y);
  for (int i = 0; i < n(); ++i) {
    if (x[i] > 0.0) {
      g[i] += lambda;
    } else if (x[i] < 0.0) {
      g[i] -= lambda;
    } else {
      g[i] -= std::clamp(g[i], -lambda, lambda);
    }
  }
  return g;
}

LassoInstance GenerateLasso(uint64_t seed, int n, int m, double radius,
                            double lambda) {
  if (n < 1 || m < 1) throw Error(ErrorCode::kInvalidParameter, "N, M must be >= 1");
  if (!(radius > 0.0) || !(lambda >= 0.0)) {
    throw Error(ErrorCode::kInvalidParameter, "R must be > 0, lambda >= 0");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;

  LassoInstance lasso;
  lasso.seed = seed;
  lasso.radius = radius;
  lasso.lambda = lambda;
  lasso.phi.resize(m, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) lasso.phi(i, j) = normal(rng);
  }

  // Partial Fisher-Yates for the support.
  const int nonzeros = (n + 15) / 16;
  std::vector<int> coords(n);
  std::iota(coords.begin(), coords.end(), 0);
  lasso.planted = Vector::Zero(n);
  for (int i = 0; i < nonzeros; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(coords[i], coords[pick(rng)]);
    std::bernoulli_distribution positive(0.5);
    lasso.planted[coords[i]] = positive(rng) ? 1.0 : -1.0;
  }

  std::normal_distribution<double> noise(0.0, 0.01);
  lasso.y = lasso.phi * lasso.planted;
  for (int i = 0; i < m; ++i) lasso.y[i] += noise(rng);
  return lasso;
}

ProblemInstance MakeLassoProblem(std::shared_ptr<const LassoInstance> lasso) {
  ProblemInstance p;
  p.name = "lasso(n=" + std::to_string(lasso->n()) +
           ",m=" + std::to_string(lasso->m()) +
           ",seed=" + std::to_string(lasso->seed) + ")";
  p.dimension = lasso->n();
  p.oracle = [lasso](const Vector& x) {
    return SubgradientResult{lasso->Value(x), lasso->Subgradient(x)};
  };
  p.minimal_norm_oracle = [lasso](const Vector& x) {
    return SubgradientResult{lasso->Value(x), lasso->MinimalNormSubgradient(x)};
  };
  p.projector = std::make_shared<ProjectionOperator>(
      ProjectionOperator::MakeBall(Vector::Zero(lasso->n()), lasso->radius));
  p.radius = lasso->radius;
  return p;
}

ProblemInstance MakeLasso(uint64_t seed, int n, int m, double radius,
                          double lambda) {
  return MakeLassoProblem(std::make_shared<const LassoInstance>(
      GenerateLasso(seed, n, m, radius, lambda)));
}

void WriteLassoCsv(const LassoInstance& lasso, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path);
  out << "# psg lasso m=" << lasso.m() << " n=" << lasso.n()
      << " seed=" << lasso.seed << "\n";
  for (int j = 0; j < lasso.n(); ++j) out << "phi_" << j << ",";
  out << "y\n";
  for (int i = 0; i < lasso.m(); ++i) {
    for (int j = 0; j < lasso.n(); ++j) out << Format17(lasso.phi(i, j)) << ",";
    out << Format17(lasso.y[i]) << "\n";
  }
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path);
}

LassoInstance ReadLassoCsv(const std::string& path, double radius,
                           double lambda) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::string line;
  int columns = -1;
  std::vector<std::vector<double>> rows;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (columns < 0) {
      columns = static_cast<int>(fields.size());
      if (columns < 2 || fields.back() != "y") {
        throw Error(ErrorCode::kConfigError, path + ": bad header");
      }
      continue;
    }
    if (static_cast<int>(fields.size()) != columns) {
      throw Error(ErrorCode::kConfigError,
                  path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(columns) + " fields");
    }
    std::vector<double> row;
    for (const auto& f : fields) {
      char* end = nullptr;
      const double v = std::strtod(f.c_str(), &end);
      if (end == f.c_str() || !std::isfinite(v)) {
        throw Error(ErrorCode::kConfigError,
                    path + ":" + std::to_string(line_no) + ": bad number '" + f + "'");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (columns < 0 || rows.empty()) {
    throw Error(ErrorCode::kConfigError, path + ": no data rows");
  }
  LassoInstance lasso;
  lasso.radius = radius;
  lasso.lambda = lambda;
  const int m = static_cast<int>(rows.size());
  const int n = columns - 1;
  lasso.phi.resize(m, n);
  lasso.y.resize(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) lasso.phi(i, j) = rows[i][j];
    lasso.y[i] = rows[i][n];
  }
  return lasso;
}

}  // namespace psg
