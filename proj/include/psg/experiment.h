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

// Batch experiment runner behind the `psg` command line tool: JSON config
// in, one CSV trace per (problem, policy) cell and a JSON summary out.

#ifndef PSG_EXPERIMENT_H_
#define PSG_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "psg/core.h"
#include "psg/solver.h"

namespace psg {

struct ProblemSpec {
  std::string type = "abs";  // "abs" | "sqrt-example" | "lasso"
  int dim = 1;               // abs
  uint64_t seed = 1;         // lasso
  int n = 512;
  int m = 300;
  double radius = 50.0;
  double lambda = 10.0;
  std::optional<std::string> data_path;  // lasso: load Phi, y from CSV

  bool operator==(const ProblemSpec&) const = default;
};

struct PolicySpec {
  std::string type = "family";  // "family" | "nesterov" | "classic" | "constant"
  double a = 1.0;
  std::optional<double> lipschitz;
  std::optional<int64_t> horizon;

  bool operator==(const PolicySpec&) const = default;
};

struct InitialPointSpec {
  enum class Kind { kDefault, kZero, kRandom, kExplicit };
  Kind kind = Kind::kDefault;
  uint64_t seed = 0;
  std::vector<double> values;

  bool operator==(const InitialPointSpec&) const = default;
};

struct ExperimentConfig {
  std::vector<ProblemSpec> problems;
  // Family entries given with a list of `a` values arrive here expanded.
  std::vector<PolicySpec> policies;
  std::vector<double> weight_ks = {0.0};
  int64_t iterations = 1000;
  InitialPointSpec initial_point;
  std::optional<std::string> trace_path;
  std::string summary_path = "summary.json";
  std::optional<double> restart_factor;
  SubgradientSelection subgradient_selection =
      SubgradientSelection::kOracleDefault;
  std::optional<double> optimum_value;
  int64_t reference_multiplier = 10;

  bool operator==(const ExperimentConfig&) const = default;
};

// Throws Error(kConfigError) naming the offending field, e.g.
// "policies[1].a: expected a number in [0, 1]".
ExperimentConfig ParseExperimentConfig(const nlohmann::json& doc);
// Adds "line L, column C" to JSON syntax errors.
ExperimentConfig ParseExperimentConfigText(const std::string& text);
ExperimentConfig LoadExperimentConfig(const std::string& path);
nlohmann::json ToJson(const ExperimentConfig& config);

ProblemSpec ParseProblemSpec(const nlohmann::json& doc,
                             const std::string& where = "problem");
nlohmann::json ToJson(const ProblemSpec& spec);

ProblemInstance BuildProblem(const ProblemSpec& spec);
StepSizePolicy BuildPolicy(const PolicySpec& spec, const ProblemInstance& problem,
                           int64_t iterations);
Vector BuildInitialPoint(const InitialPointSpec& spec,
                         const ProblemInstance& problem);

// Header: s,eta,g_norm,G,f_x,f_best,f_avg_k<k>...,bound_family,bound_weak_k<k>...
// Numbers use 17 significant digits; quantities a row does not have are
// left empty. Throws kInvalidParameter for an empty trace, kIoError on
// write failure.
void EmitTraceCsv(const Trace& trace, const std::vector<double>& weight_ks,
                  const std::string& path);
std::string TraceCsvHeader(const std::vector<double>& weight_ks);

struct CellResult {
  std::string name;
  ProblemSpec problem;
  PolicySpec policy;
  bool ok = false;
  std::string error;
  std::optional<std::string> trace_file;
  RunResult run;
};

struct ExperimentOutcome {
  std::vector<CellResult> cells;
  nlohmann::json summary;
  bool any_failed = false;
  bool all_certificates_passed = true;
};

// Runs every (problem x policy) cell on up to `jobs` threads and writes the
// traces and summary below `out_dir`. Cells that hit a numeric error are
// marked failed; other cells are unaffected.
ExperimentOutcome RunExperiment(const ExperimentConfig& config,
                                const std::string& out_dir, int jobs);

nlohmann::json CellSummary(const CellResult& cell);

struct TraceCheckOutcome {
  int64_t rows = 0;
  int64_t checks = 0;
  std::vector<std::string> violations;
  bool passed() const { return violations.empty(); }
};

// Re-validates a stored trace: row invariants (s increasing, f_best
// nonincreasing, G nondecreasing between restarts), the stored ergodic
// certificates against f*, and, for restart-free family traces, the stored
// bound columns against values recomputed from the g_norm column.
// `problem_doc` is {"problem": {...}, "optimum_value": x} with either key
// optional as long as f* can be determined.
TraceCheckOutcome CheckTrace(const std::string& csv_path,
                             const nlohmann::json& problem_doc);

}  // namespace psg

#endif  // PSG_EXPERIMENT_H_
