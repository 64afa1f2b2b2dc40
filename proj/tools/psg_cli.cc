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

// psg: run projected-subgradient experiments, generate Lasso data, and
// re-check stored traces.
//
//   psg run --config <path> [--out-dir <dir>] [--jobs <n>] [--strict]
//   psg gen-lasso --seed <u64> --n <N> --m <M> --out <path>
//   psg check --trace <csv> --problem <json>
//
// Exit codes: 0 success, 1 config error, 2 runtime numeric error,
// 3 certificate violation (run --strict, or check).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "psg/experiment.h"
#include "psg/problems.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitCertificate = 3;

int RunCommand(const std::string& config_path, const std::string& out_dir,
               int jobs, bool strict) {
  psg::ExperimentConfig config;
  try {
    config = psg::LoadExperimentConfig(config_path);
  } catch (const psg::Error& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return kExitConfig;
  }
  psg::ExperimentOutcome outcome;
  try {
    outcome = psg::RunExperiment(config, out_dir, jobs);
  } catch (const psg::Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == psg::ErrorCode::kNumericError ? kExitNumeric : kExitConfig;
  }
  for (const auto& cell : outcome.cells) {
    const auto& r = cell.run.report;
    std::cout << cell.name << ": ";
    if (!cell.ok) {
      std::cout << "FAILED (" << cell.error << ")\n";
      continue;
    }
    std::cout << psg::StopReasonName(r.stop_reason) << " after "
              << r.iterations_run << " iterations";
    if (r.best_value) std::cout << ", best " << *r.best_value;
    std::cout << ", certificates "
              << (r.AllCertificatesPassed() ? "pass" : "FAIL") << "\n";
  }
  if (outcome.any_failed) return kExitNumeric;
  if (strict && !outcome.all_certificates_passed) return kExitCertificate;
  return kExitOk;
}

// R and lambda do not affect the data; they are supplied again on load.
int GenLassoCommand(uint64_t seed, int n, int m, const std::string& out) {
  try {
    psg::WriteLassoCsv(psg::GenerateLasso(seed, n, m, 50.0, 10.0), out);
  } catch (const psg::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}

int CheckCommand(const std::string& trace_path, const std::string& problem_path) {
  psg::TraceCheckOutcome outcome;
  try {
    std::ifstream in(problem_path);
    if (!in) throw psg::Error(psg::ErrorCode::kConfigError, "cannot read " + problem_path);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw psg::Error(psg::ErrorCode::kConfigError, problem_path + ": " + e.what());
    }
    outcome = psg::CheckTrace(trace_path, doc);
  } catch (const psg::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }
  for (const auto& v : outcome.violations) std::cout << "violation " << v << "\n";
  std::cout << outcome.rows << " rows, " << outcome.checks << " checks, "
            << outcome.violations.size() << " violations\n";
  return outcome.passed() ? kExitOk : kExitCertificate;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projected subgradient experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment config");
  std::string config_path;
  std::string out_dir = ".";
  int jobs = 1;
  bool strict = false;
  run->add_option("--config", config_path, "Experiment JSON")->required();
  run->add_option("--out-dir", out_dir, "Directory for traces and summary");
  run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  run->add_flag("--strict", strict, "Exit 3 when a certificate fails");

  auto* gen = app.add_subcommand("gen-lasso", "Write a seeded Lasso instance as CSV");
  uint64_t seed = 1;
  int n = 512;
  int m = 300;
  std::string out;
  gen->add_option("--seed", seed)->required();
  gen->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  gen->add_option("--m", m)->required()->check(CLI::PositiveNumber);
  gen->add_option("--out", out)->required();

  auto* check = app.add_subcommand("check", "Re-validate certificates in a trace");
  std::string trace_path;
  std::string problem_path;
  check->add_option("--trace", trace_path)->required();
  check->add_option("--problem", problem_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*run) return RunCommand(config_path, out_dir, jobs, strict);
  if (*gen) return GenLassoCommand(seed, n, m, out);
  return CheckCommand(trace_path, problem_path);
}
