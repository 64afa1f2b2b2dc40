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

#include "psg/solver.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "psg/averaging.h"
#include "psg/bounds.h"

namespace psg {
namespace {

constexpr char kPerStepLabel[] = "PerStep";

std::string MonotoneLabel(double k) {
  return "Monotone(k=" + FormatShort(k) + ")";
}

void ValidateConfig(const ProblemInstance& problem,
                    const SolverConfig& config) {
  if (!problem.oracle || !problem.projector) {
    throw Error(ErrorCode::kInvalidParameter, "problem lacks oracle or projector");
  }
  if (config.max_iterations < 1) {
    throw Error(ErrorCode::kInvalidParameter, "max_iterations must be >= 1");
  }
  if (config.initial_point.size() != problem.dimension) {
    throw Error(ErrorCode::kShapeError, "initial point has wrong dimension");
  }
  if (!AllFinite(config.initial_point)) {
    throw Error(ErrorCode::kNumericError, "initial point is not finite");
  }
  std::set<double> seen;
  for (double k : config.weight_ks) {
    WeightRule rule(k);  // validates
    if (!seen.insert(k).second) {
      throw Error(ErrorCode::kInvalidParameter,
                  "duplicate weight exponent " + FormatShort(k));
    }
  }
  if (config.restart_factor) {
    if (!(*config.restart_factor > 1.0) ||
        !std::isfinite(*config.restart_factor)) {
      throw Error(ErrorCode::kInvalidParameter, "restart_factor must exceed 1");
    }
    if (config.policy.kind() != StepKind::kFamily) {
      throw Error(ErrorCode::kInvalidParameter,
                  "restart applies to the family policy only");
    }
  }
}

// Accumulators that a restart clears.
struct Segment {
  int64_t index = 0;  // local s
  double max_g_norm = 0.0;
  double g_at_start = 0.0;
  std::vector<StreamingAverage> averages;
  std::vector<WeakErgodicBoundTracker> trackers;
  std::vector<std::optional<double>> last_ratio;  // w_s / eta_s

  explicit Segment(const std::vector<double>& ks) : averages(ks.size()) {
    for (double k : ks) trackers.emplace_back(k);
    last_ratio.resize(ks.size());
  }
};

}  // namespace

Vector PsgStep(const Vector& x, const Vector& g, double eta,
               const ProjectionOperator& projector) {
  if (x.size() != g.size()) {
    throw Error(ErrorCode::kShapeError, "point and subgradient differ in dimension");
  }
  if (!(eta > 0.0)) throw Error(ErrorCode::kInvalidParameter, "eta must be > 0");
  return projector.Project(x - eta * g);
}

RunResult Run(const ProblemInstance& problem, const SolverConfig& config) {
  ValidateConfig(problem, config);

  const Oracle& oracle =
      config.subgradient_selection ==
                  SubgradientSelection::kMinimalNormWhenAvailable &&
              problem.minimal_norm_oracle
          ? problem.minimal_norm_oracle
          : problem.oracle;
  const ProjectionOperator& projector = *problem.projector;
  const std::vector<double>& ks = config.weight_ks;
  const double radius = config.policy.radius();
  const StepKind kind = config.policy.kind();

  std::vector<WeightRule> rules;
  for (double k : ks) rules.emplace_back(k);
  const auto k_index = [&](double k) -> std::optional<size_t> {
    const auto it = std::find(ks.begin(), ks.end(), k);
    if (it == ks.end()) return std::nullopt;
    return static_cast<size_t>(it - ks.begin());
  };
  const std::optional<size_t> uniform = k_index(0.0);
  const std::optional<size_t> eta_weighted = k_index(-1.0);
  const bool monotone_applies = kind != StepKind::kNesterov;

  RunResult result;
  RunReport& report = result.report;
  if (problem.optimum_value) {
    report.optimum_value = problem.optimum_value;
    report.optimum_source = "known";
  } else if (config.reference_optimum) {
    report.optimum_value = config.reference_optimum;
    report.optimum_source = "reference";
  }
  const bool per_step_applies =
      problem.optimum_value.has_value() && problem.optimum_point.has_value();
  if (per_step_applies) report.certificates[kPerStepLabel];
  if (monotone_applies) {
    for (double k : ks) report.certificates[MonotoneLabel(k)];
  }

  StepSizePolicy policy = config.policy;
  Segment segment(ks);
  BestIterate best;
  std::optional<double> last_eta;

  // Averaged values, bound values and ergodic certificates at the current t.
  std::vector<std::pair<std::string, double>> averaged_now;
  std::vector<std::pair<std::string, double>> bounds_now;
  const auto evaluate = [&](int64_t s) {
    averaged_now.clear();
    bounds_now.clear();
    std::vector<double> values(ks.size());
    for (size_t i = 0; i < ks.size(); ++i) {
      const SubgradientResult at_mean = oracle(segment.averages[i].mean());
      if (!std::isfinite(at_mean.value)) {
        throw Error::AtIteration(ErrorCode::kNumericError,
                                 "objective at averaged point is not finite", s);
      }
      values[i] = at_mean.value;
      averaged_now.emplace_back(WeightLabel(ks[i]), values[i]);
    }
    const int64_t t = segment.index;
    const double max_g = segment.max_g_norm;
    const auto add_bound = [&](const BoundLabel& label, size_t scheme,
                               double bound) {
      const std::string name = label.ToString();
      bounds_now.emplace_back(name, bound);
      if (!report.optimum_value) return;
      const double gap = values[scheme] - *report.optimum_value;
      report.certificates[name].Record(s, CheckCertificate(gap, bound),
                                       gap - bound);
    };
    switch (kind) {
      case StepKind::kFamily:
        if (uniform) {
          add_bound({BoundKind::kFamilyErgodic}, *uniform,
                    FamilyBound(radius, t, max_g));
        }
        for (size_t i = 0; i < ks.size(); ++i) {
          add_bound({BoundKind::kWeakErgodic, ks[i]}, i,
                    segment.trackers[i].Value(radius, max_g));
        }
        break;
      case StepKind::kClassic:
        if (uniform) {
          add_bound({BoundKind::kClassicErgodic}, *uniform,
                    ClassicBound(radius, *policy.lipschitz(), t));
        }
        break;
      case StepKind::kConstant:
        if (uniform && t == *policy.horizon()) {
          add_bound({BoundKind::kConstantErgodic}, *uniform,
                    ConstantBound(radius, *policy.lipschitz(), t));
        }
        break;
      case StepKind::kNesterov:
        if (eta_weighted && problem.lipschitz) {
          add_bound({BoundKind::kNesterovSubopt}, *eta_weighted,
                    NesterovBound(radius, *problem.lipschitz, t));
        }
        break;
    }
    for (size_t i = 0; i < ks.size(); ++i) {
      report.averaged_values[averaged_now[i].first] = values[i];
    }
    for (const auto& [name, value] : bounds_now) report.bound_values[name] = value;
  };

  Vector x = projector.IsFeasible(config.initial_point)
                 ? config.initial_point
                 : projector.Project(config.initial_point);
  int64_t evaluated_at = 0;

  for (int64_t s = 1; s <= config.max_iterations; ++s) {
    const SubgradientResult at_x = oracle(x);
    if (at_x.empty()) {
      report.stop_reason = StopReason::kEmptySubdifferential;
      break;
    }
    const Vector& g = *at_x.subgradient;
    if (!std::isfinite(at_x.value) || !AllFinite(g)) {
      throw Error::AtIteration(ErrorCode::kNumericError,
                               "oracle returned a non-finite value", s);
    }
    const double g_norm = g.norm();
    if (!std::isfinite(g_norm)) {
      throw Error::AtIteration(ErrorCode::kNumericError,
                               "subgradient norm overflow", s);
    }
    const bool stop = g_norm == 0.0;

    int64_t local = segment.index + 1;
    double eta = 0.0;
    if (stop) {
      // No move is taken; the step only sets the weight of x_s.
      eta = policy.StepAtZeroSubgradient(local).value_or(last_eta.value_or(1.0));
    } else {
      if (config.restart_factor && local > 1 &&
          policy.PeekG(local, g_norm) >
              *config.restart_factor * segment.g_at_start) {
        policy.Reset();
        segment = Segment(ks);
        local = 1;
        ++report.restarts;
      }
      eta = policy.Next(local, g_norm);
      if (local == 1 && kind == StepKind::kFamily) {
        segment.g_at_start = *policy.big_g();
      }
    }
    if (!std::isfinite(eta) || !(eta > 0.0)) {
      throw Error::AtIteration(ErrorCode::kNumericError,
                               "step size is not a positive finite number", s);
    }
    last_eta = eta;
    segment.index = local;
    segment.max_g_norm = std::max(segment.max_g_norm, g_norm);
    report.max_g_norm = std::max(report.max_g_norm, g_norm);
    report.iterations_run = s;
    best.Update(s, at_x.value, x);

    for (size_t i = 0; i < ks.size(); ++i) {
      const double w = rules[i](local, eta);
      segment.averages[i].Update(w, x);
      segment.trackers[i].Advance(local);
      if (monotone_applies) {
        const double ratio = w / eta;
        auto& last = segment.last_ratio[i];
        if (last) {
          report.certificates[MonotoneLabel(ks[i])].Record(
              s, LessOrClose(*last, ratio, ratio), *last - ratio);
        }
        last = ratio;
      }
    }

    const bool final_step = stop || s == config.max_iterations;
    if (config.certify_every_step || final_step) {
      evaluate(s);
      evaluated_at = s;
    }

    const Vector x_next = stop ? x : PsgStep(x, g, eta, projector);

    if (per_step_applies) {
      const Vector& opt = *problem.optimum_point;
      const double lhs = at_x.value - *problem.optimum_value;
      const double before = (x - opt).squaredNorm() / (2.0 * eta);
      const double after = (x_next - opt).squaredNorm() / (2.0 * eta);
      const double noise = eta * g_norm * g_norm / 2.0;
      const double rhs = before - after + noise;
      const double scale = std::max({std::abs(lhs), before, after, noise});
      report.certificates[kPerStepLabel].Record(
          s, LessOrClose(lhs, rhs, scale), lhs - rhs);
    }

    if (config.record_trace) {
      IterationRecord rec;
      rec.s = s;
      rec.eta = eta;
      rec.g_norm = g_norm;
      rec.big_g = policy.big_g();
      rec.f_x = at_x.value;
      rec.f_best = *best.best_value();
      if (evaluated_at == s) {
        rec.averaged_values = averaged_now;
        rec.bounds = bounds_now;
      }
      result.trace.push_back(std::move(rec));
    }

    if (stop) {
      report.stop_reason = StopReason::kZeroSubgradient;
      break;
    }
    x = x_next;
  }

  if (report.iterations_run > 0 && evaluated_at != report.iterations_run) {
    evaluate(report.iterations_run);
  }
  for (size_t i = 0; i < ks.size(); ++i) {
    if (!segment.averages[i].empty()) {
      report.averaged_points[WeightLabel(ks[i])] = segment.averages[i].mean();
    }
  }
  if (!best.empty()) {
    report.best_value = best.best_value();
    report.best_point = best.best_point();
    report.best_index = best.best_index();
  }
  return result;
}

double ReferenceOptimum(const ProblemInstance& problem,
                        const Vector& initial_point, int64_t iterations) {
  SolverConfig config;
  config.max_iterations = iterations;
  config.initial_point = initial_point;
  config.policy = StepSizePolicy::Family(problem.radius, 1.0);
  config.weight_ks = {0.0, 2.0};
  config.certify_every_step = false;
  const RunReport report = Run(problem, config).report;
  double estimate = report.best_value.value_or(
      std::numeric_limits<double>::infinity());
  for (const auto& [label, value] : report.averaged_values) {
    estimate = std::min(estimate, value);
  }
  return estimate;
}

}  // namespace psg
