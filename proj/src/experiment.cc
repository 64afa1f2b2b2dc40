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

#include "psg/experiment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "psg/bounds.h"
#include "psg/problems.h"
#include "psg/projection.h"

namespace psg {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void Fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kConfigError, where + ": " + what);
}

void RejectUnknownKeys(const json& obj, const std::string& where,
                       std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; })) {
      Fail(where + "." + key, "unknown field");
    }
  }
}

const json& RequireObject(const json& doc, const std::string& where) {
  if (!doc.is_object()) Fail(where, "expected an object");
  return doc;
}

double GetNumber(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number()) Fail(where + "." + key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) Fail(where + "." + key, "expected a finite number");
  return d;
}

int64_t GetInteger(const json& obj, const char* key, const std::string& where,
                   int64_t min_value) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) Fail(where + "." + key, "expected an integer");
  const int64_t i = v.get<int64_t>();
  if (i < min_value) {
    Fail(where + "." + key, "must be >= " + std::to_string(min_value));
  }
  return i;
}

uint64_t GetSeed(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) Fail(where + "." + key, "expected an integer seed");
  if (v.is_number_unsigned()) return v.get<uint64_t>();
  const int64_t i = v.get<int64_t>();
  if (i < 0) Fail(where + "." + key, "seed must be nonnegative");
  return static_cast<uint64_t>(i);
}

std::string GetString(const json& obj, const char* key,
                      const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_string()) Fail(where + "." + key, "expected a string");
  return v.get<std::string>();
}

// Accepts a single object under `single` or an array under `plural`.
std::vector<std::pair<std::string, json>> ObjectOrList(
    const json& doc, const char* single, const char* plural) {
  std::vector<std::pair<std::string, json>> out;
  const bool has_single = doc.contains(single);
  const bool has_plural = doc.contains(plural);
  if (has_single && has_plural) {
    Fail(plural, std::string("give either '") + single + "' or '" + plural + "'");
  }
  if (has_single) {
    out.emplace_back(single, doc.at(single));
  } else if (has_plural) {
    const json& list = doc.at(plural);
    if (!list.is_array() || list.empty()) Fail(plural, "expected a nonempty array");
    for (size_t i = 0; i < list.size(); ++i) {
      out.emplace_back(std::string(plural) + "[" + std::to_string(i) + "]",
                       list[i]);
    }
  } else {
    Fail(plural, "missing");
  }
  return out;
}

std::vector<PolicySpec> ParsePolicies(const json& doc, const std::string& where) {
  RequireObject(doc, where);
  if (!doc.contains("type")) Fail(where + ".type", "missing");
  PolicySpec spec;
  spec.type = GetString(doc, "type", where);
  if (spec.type == "family") {
    RejectUnknownKeys(doc, where, {"type", "a"});
    std::vector<double> as = {1.0};
    if (doc.contains("a")) {
      const json& a = doc.at("a");
      as.clear();
      if (a.is_array()) {
        if (a.empty()) Fail(where + ".a", "expected a nonempty list");
        for (size_t i = 0; i < a.size(); ++i) {
          if (!a[i].is_number()) {
            Fail(where + ".a[" + std::to_string(i) + "]", "expected a number");
          }
          as.push_back(a[i].get<double>());
        }
      } else {
        as.push_back(GetNumber(doc, "a", where));
      }
    }
    std::vector<PolicySpec> out;
    for (double a : as) {
      if (!(a >= 0.0 && a <= 1.0)) Fail(where + ".a", "expected a number in [0, 1]");
      PolicySpec p = spec;
      p.a = a;
      out.push_back(p);
    }
    return out;
  }
  if (spec.type == "nesterov") {
    RejectUnknownKeys(doc, where, {"type"});
  } else if (spec.type == "classic" || spec.type == "constant") {
    RejectUnknownKeys(doc, where, {"type", "L", "horizon"});
    if (doc.contains("L")) {
      spec.lipschitz = GetNumber(doc, "L", where);
      if (!(*spec.lipschitz > 0.0)) Fail(where + ".L", "must be positive");
    }
    if (doc.contains("horizon")) {
      if (spec.type != "constant") Fail(where + ".horizon", "constant policy only");
      spec.horizon = GetInteger(doc, "horizon", where, 1);
    }
  } else {
    Fail(where + ".type", "unknown policy '" + spec.type +
                              "' (family, nesterov, classic, constant)");
  }
  return {spec};
}

json ToJson(const PolicySpec& spec) {
  json j = {{"type", spec.type}};
  if (spec.type == "family") j["a"] = spec.a;
  if (spec.lipschitz) j["L"] = *spec.lipschitz;
  if (spec.horizon) j["horizon"] = *spec.horizon;
  return j;
}

InitialPointSpec ParseInitialPoint(const json& v) {
  const std::string where = "initial_point";
  InitialPointSpec spec;
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "zero") {
      spec.kind = InitialPointSpec::Kind::kZero;
    } else if (s == "default") {
      spec.kind = InitialPointSpec::Kind::kDefault;
    } else {
      Fail(where, "expected \"zero\", \"default\", {\"random\": seed} or a list");
    }
  } else if (v.is_object()) {
    RejectUnknownKeys(v, where, {"random"});
    if (!v.contains("random")) Fail(where + ".random", "missing");
    spec.kind = InitialPointSpec::Kind::kRandom;
    spec.seed = GetSeed(v, "random", where);
  } else if (v.is_array()) {
    spec.kind = InitialPointSpec::Kind::kExplicit;
    for (size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
        Fail(where + "[" + std::to_string(i) + "]", "expected a finite number");
      }
      spec.values.push_back(v[i].get<double>());
    }
    if (spec.values.empty()) Fail(where, "expected a nonempty list");
  } else {
    Fail(where, "expected \"zero\", {\"random\": seed} or a list");
  }
  return spec;
}

std::string Format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Slug(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') {
      out += c;
    } else if (!out.empty() && out.back() != '-') {
      out += '-';
    }
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

std::string ProblemSlug(const ProblemSpec& p) {
  if (p.type == "abs") return "abs-dim" + std::to_string(p.dim);
  if (p.type == "sqrt-example") return "sqrt";
  return "lasso-seed" + std::to_string(p.seed) + "-n" + std::to_string(p.n) +
         "-m" + std::to_string(p.m);
}

std::string PolicySlug(const PolicySpec& p) {
  if (p.type == "family") return "family-a" + FormatShort(p.a);
  if (p.type == "nesterov") return "nesterov";
  std::string s = p.type;
  if (p.lipschitz) s += "-L" + FormatShort(*p.lipschitz);
  return Slug(s);
}

double TailStd(const Trace& trace, size_t window) {
  const size_t n = std::min(window, trace.size());
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (size_t i = trace.size() - n; i < trace.size(); ++i) mean += trace[i].f_x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (size_t i = trace.size() - n; i < trace.size(); ++i) {
    ss += (trace[i].f_x - mean) * (trace[i].f_x - mean);
  }
  return std::sqrt(ss / static_cast<double>(n - 1));
}

}  // namespace

ProblemSpec ParseProblemSpec(const json& doc, const std::string& where) {
  RequireObject(doc, where);
  if (!doc.contains("type")) Fail(where + ".type", "missing");
  ProblemSpec spec;
  spec.type = GetString(doc, "type", where);
  if (spec.type == "abs") {
    RejectUnknownKeys(doc, where, {"type", "dim"});
    if (doc.contains("dim")) {
      spec.dim = static_cast<int>(GetInteger(doc, "dim", where, 1));
    }
  } else if (spec.type == "sqrt-example") {
    RejectUnknownKeys(doc, where, {"type"});
  } else if (spec.type == "lasso") {
    RejectUnknownKeys(doc, where,
                      {"type", "seed", "n", "m", "radius", "lambda", "data"});
    if (doc.contains("seed")) spec.seed = GetSeed(doc, "seed", where);
    if (doc.contains("n")) spec.n = static_cast<int>(GetInteger(doc, "n", where, 1));
    if (doc.contains("m")) spec.m = static_cast<int>(GetInteger(doc, "m", where, 1));
    if (doc.contains("radius")) {
      spec.radius = GetNumber(doc, "radius", where);
      if (!(spec.radius > 0.0)) Fail(where + ".radius", "must be positive");
    }
    if (doc.contains("lambda")) {
      spec.lambda = GetNumber(doc, "lambda", where);
      if (!(spec.lambda >= 0.0)) Fail(where + ".lambda", "must be nonnegative");
    }
    if (doc.contains("data")) spec.data_path = GetString(doc, "data", where);
  } else {
    Fail(where + ".type",
         "unknown problem '" + spec.type + "' (abs, sqrt-example, lasso)");
  }
  return spec;
}

json ToJson(const ProblemSpec& spec) {
  json j = {{"type", spec.type}};
  if (spec.type == "abs") j["dim"] = spec.dim;
  if (spec.type == "lasso") {
    j["seed"] = spec.seed;
    j["n"] = spec.n;
    j["m"] = spec.m;
    j["radius"] = spec.radius;
    j["lambda"] = spec.lambda;
    if (spec.data_path) j["data"] = *spec.data_path;
  }
  return j;
}

ExperimentConfig ParseExperimentConfig(const json& doc) {
  RequireObject(doc, "config");
  RejectUnknownKeys(doc, "config",
                    {"problem", "problems", "policy", "policies", "weight_ks",
                     "iterations", "initial_point", "trace_path",
                     "summary_path", "restart_factor", "subgradient_selection",
                     "optimum_value", "reference_multiplier"});
  ExperimentConfig config;
  for (const auto& [where, p] : ObjectOrList(doc, "problem", "problems")) {
    config.problems.push_back(ParseProblemSpec(p, where));
  }
  for (const auto& [where, p] : ObjectOrList(doc, "policy", "policies")) {
    for (auto& spec : ParsePolicies(p, where)) config.policies.push_back(spec);
  }
  if (doc.contains("weight_ks")) {
    const json& ks = doc.at("weight_ks");
    if (!ks.is_array() || ks.empty()) Fail("weight_ks", "expected a nonempty array");
    config.weight_ks.clear();
    std::set<double> seen;
    for (size_t i = 0; i < ks.size(); ++i) {
      const std::string where = "weight_ks[" + std::to_string(i) + "]";
      if (!ks[i].is_number()) Fail(where, "expected a number");
      const double k = ks[i].get<double>();
      if (!std::isfinite(k) || k < -1.0) Fail(where, "k must be >= -1");
      if (!seen.insert(k).second) Fail(where, "duplicate k");
      config.weight_ks.push_back(k);
    }
  }
  if (doc.contains("iterations")) {
    config.iterations = GetInteger(doc, "iterations", "config", 1);
  }
  if (doc.contains("initial_point")) {
    config.initial_point = ParseInitialPoint(doc.at("initial_point"));
  }
  if (doc.contains("trace_path")) {
    config.trace_path = GetString(doc, "trace_path", "config");
  }
  if (doc.contains("summary_path")) {
    config.summary_path = GetString(doc, "summary_path", "config");
  }
  if (doc.contains("restart_factor")) {
    config.restart_factor = GetNumber(doc, "restart_factor", "config");
    if (!(*config.restart_factor > 1.0)) Fail("restart_factor", "must exceed 1");
    for (const auto& p : config.policies) {
      if (p.type != "family") Fail("restart_factor", "family policies only");
    }
  }
  if (doc.contains("subgradient_selection")) {
    const std::string s = GetString(doc, "subgradient_selection", "config");
    if (s == "oracle-default") {
      config.subgradient_selection = SubgradientSelection::kOracleDefault;
    } else if (s == "minimal-norm-when-available") {
      config.subgradient_selection =
          SubgradientSelection::kMinimalNormWhenAvailable;
    } else {
      Fail("subgradient_selection",
           "expected \"oracle-default\" or \"minimal-norm-when-available\"");
    }
  }
  if (doc.contains("optimum_value")) {
    config.optimum_value = GetNumber(doc, "optimum_value", "config");
  }
  if (doc.contains("reference_multiplier")) {
    config.reference_multiplier =
        GetInteger(doc, "reference_multiplier", "config", 1);
  }
  if (config.initial_point.kind == InitialPointSpec::Kind::kExplicit) {
    for (size_t i = 0; i < config.problems.size(); ++i) {
      const ProblemSpec& p = config.problems[i];
      const int dim = p.type == "abs" ? p.dim : p.type == "lasso" ? p.n : 1;
      if (!p.data_path && static_cast<int>(config.initial_point.values.size()) != dim) {
        Fail("initial_point", "length " +
                                  std::to_string(config.initial_point.values.size()) +
                                  " does not match problems[" + std::to_string(i) +
                                  "] dimension " + std::to_string(dim));
      }
    }
  }
  return config;
}

ExperimentConfig ParseExperimentConfigText(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const size_t byte = std::min<size_t>(e.byte, text.size());
    const size_t line = 1 + std::count(text.begin(), text.begin() + byte, '\n');
    const size_t line_start = text.rfind('\n', byte == 0 ? 0 : byte - 1);
    const size_t column =
        line_start == std::string::npos ? byte : byte - line_start - 1;
    throw Error(ErrorCode::kConfigError,
                "line " + std::to_string(line) + ", column " +
                    std::to_string(column) + ": invalid JSON");
  }
  return ParseExperimentConfig(doc);
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseExperimentConfigText(ss.str());
}

json ToJson(const ExperimentConfig& config) {
  json j;
  j["problems"] = json::array();
  for (const auto& p : config.problems) j["problems"].push_back(ToJson(p));
  j["policies"] = json::array();
  for (const auto& p : config.policies) j["policies"].push_back(ToJson(p));
  j["weight_ks"] = config.weight_ks;
  j["iterations"] = config.iterations;
  switch (config.initial_point.kind) {
    case InitialPointSpec::Kind::kDefault:
      j["initial_point"] = "default";
      break;
    case InitialPointSpec::Kind::kZero:
      j["initial_point"] = "zero";
      break;
    case InitialPointSpec::Kind::kRandom:
      j["initial_point"] = {{"random", config.initial_point.seed}};
      break;
    case InitialPointSpec::Kind::kExplicit:
      j["initial_point"] = config.initial_point.values;
      break;
  }
  if (config.trace_path) j["trace_path"] = *config.trace_path;
  j["summary_path"] = config.summary_path;
  if (config.restart_factor) j["restart_factor"] = *config.restart_factor;
  j["subgradient_selection"] =
      config.subgradient_selection == SubgradientSelection::kOracleDefault
          ? "oracle-default"
          : "minimal-norm-when-available";
  if (config.optimum_value) j["optimum_value"] = *config.optimum_value;
  j["reference_multiplier"] = config.reference_multiplier;
  return j;
}

ProblemInstance BuildProblem(const ProblemSpec& spec) {
  if (spec.type == "abs") return MakeAbsProblem(spec.dim);
  if (spec.type == "sqrt-example") return MakeSqrtExample();
  if (spec.type == "lasso") {
    if (spec.data_path) {
      auto lasso = std::make_shared<LassoInstance>(
          ReadLassoCsv(*spec.data_path, spec.radius, spec.lambda));
      lasso->seed = spec.seed;
      return MakeLassoProblem(std::move(lasso));
    }
    return MakeLasso(spec.seed, spec.n, spec.m, spec.radius, spec.lambda);
  }
  throw Error(ErrorCode::kConfigError, "unknown problem type " + spec.type);
}

StepSizePolicy BuildPolicy(const PolicySpec& spec, const ProblemInstance& problem,
                           int64_t iterations) {
  const double radius = problem.radius;
  if (spec.type == "family") return StepSizePolicy::Family(radius, spec.a);
  if (spec.type == "nesterov") return StepSizePolicy::Nesterov(radius);
  const std::optional<double> lipschitz =
      spec.lipschitz ? spec.lipschitz : problem.lipschitz;
  if (!lipschitz) {
    throw Error(ErrorCode::kConfigError,
                spec.type + " policy needs L and " + problem.name +
                    " has no known Lipschitz constant");
  }
  if (spec.type == "classic") return StepSizePolicy::Classic(radius, *lipschitz);
  if (spec.type == "constant") {
    return StepSizePolicy::Constant(radius, *lipschitz,
                                    spec.horizon.value_or(iterations));
  }
  throw Error(ErrorCode::kConfigError, "unknown policy type " + spec.type);
}

Vector BuildInitialPoint(const InitialPointSpec& spec,
                         const ProblemInstance& problem) {
  switch (spec.kind) {
    case InitialPointSpec::Kind::kDefault:
      // -sqrt(x) has no subgradient at 0.
      if (problem.name == "sqrt-example") return Vector::Constant(1, 0.5);
      return Vector::Zero(problem.dimension);
    case InitialPointSpec::Kind::kZero:
      return Vector::Zero(problem.dimension);
    case InitialPointSpec::Kind::kRandom: {
      std::mt19937_64 rng(spec.seed);
      return problem.projector->SampleFeasible(rng);
    }
    case InitialPointSpec::Kind::kExplicit:
      if (static_cast<int>(spec.values.size()) != problem.dimension) {
        throw Error(ErrorCode::kConfigError,
                    "initial_point: length does not match " + problem.name);
      }
      return Eigen::Map<const Vector>(spec.values.data(),
                                      static_cast<Eigen::Index>(spec.values.size()));
  }
  return Vector::Zero(problem.dimension);
}

std::string TraceCsvHeader(const std::vector<double>& weight_ks) {
  std::string header = "s,eta,g_norm,G,f_x,f_best";
  for (double k : weight_ks) header += ",f_avg_" + WeightLabel(k);
  header += ",bound_family";
  for (double k : weight_ks) header += ",bound_weak_" + WeightLabel(k);
  return header;
}

void EmitTraceCsv(const Trace& trace, const std::vector<double>& weight_ks,
                  const std::string& path) {
  if (trace.empty()) throw Error(ErrorCode::kInvalidParameter, "empty trace");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path);
  out << TraceCsvHeader(weight_ks) << "\n";
  const auto lookup = [](const std::vector<std::pair<std::string, double>>& v,
                         const std::string& key) -> std::string {
    for (const auto& [name, value] : v) {
      if (name == key) return Format17(value);
    }
    return "";
  };
  const std::string family = BoundLabel{BoundKind::kFamilyErgodic}.ToString();
  for (const IterationRecord& r : trace) {
    out << r.s << "," << Format17(r.eta) << "," << Format17(r.g_norm) << ","
        << (r.big_g ? Format17(*r.big_g) : "") << "," << Format17(r.f_x) << ","
        << Format17(r.f_best);
    for (double k : weight_ks) out << "," << lookup(r.averaged_values, WeightLabel(k));
    out << "," << lookup(r.bounds, family);
    for (double k : weight_ks) {
      out << "," << lookup(r.bounds, BoundLabel{BoundKind::kWeakErgodic, k}.ToString());
    }
    out << "\n";
  }
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path);
}

json CellSummary(const CellResult& cell) {
  json j;
  j["name"] = cell.name;
  j["problem"] = ToJson(cell.problem);
  j["policy"] = ToJson(cell.policy);
  j["status"] = cell.ok ? "ok" : "failed";
  if (!cell.ok) j["error"] = cell.error;
  j["trace_path"] = cell.trace_file ? json(*cell.trace_file) : json(nullptr);
  const RunReport& r = cell.run.report;
  j["iterations_run"] = r.iterations_run;
  j["restarts"] = r.restarts;
  j["stop_reason"] = StopReasonName(r.stop_reason);
  j["max_g_norm"] = r.max_g_norm;
  j["best_value"] = r.best_value ? json(*r.best_value) : json(nullptr);
  j["best_index"] = r.best_index;
  j["final_values"] = json::object();
  for (const auto& [label, value] : r.averaged_values) j["final_values"][label] = value;
  j["bounds"] = json::object();
  for (const auto& [label, value] : r.bound_values) j["bounds"][label] = value;
  j["certificates"] = json::object();
  for (const auto& [label, c] : r.certificates) {
    j["certificates"][label] = {
        {"passed", c.passed},
        {"checks", c.checks},
        {"first_violation",
         c.first_violation ? json(*c.first_violation) : json(nullptr)},
        {"worst_slack", c.checks > 0 ? json(c.worst_slack) : json(nullptr)}};
  }
  j["optimum_value"] = r.optimum_value ? json(*r.optimum_value) : json(nullptr);
  j["optimum_source"] = r.optimum_source.empty() ? json(nullptr) : json(r.optimum_source);
  if (!cell.run.trace.empty()) {
    j["f_x_tail_std_500"] = TailStd(cell.run.trace, 500);
  }
  return j;
}

ExperimentOutcome RunExperiment(const ExperimentConfig& config,
                                const std::string& out_dir, int jobs) {
  const fs::path base = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  std::error_code ec;
  fs::create_directories(base, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + base.string());

  // Problems, initial points and reference optima are shared by the cells
  // of one problem; any failure here is a configuration error.
  struct PreparedProblem {
    ProblemInstance instance;
    Vector initial_point;
    std::optional<double> reference;
  };
  std::vector<PreparedProblem> prepared;
  for (const ProblemSpec& spec : config.problems) {
    PreparedProblem p;
    try {
      p.instance = BuildProblem(spec);
      p.initial_point = BuildInitialPoint(config.initial_point, p.instance);
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfigError, e.what());
    }
    prepared.push_back(std::move(p));
  }

  std::vector<CellResult> cells;
  std::vector<std::pair<size_t, StepSizePolicy>> cell_inputs;
  std::map<std::string, int> name_counts;
  for (size_t pi = 0; pi < config.problems.size(); ++pi) {
    for (const PolicySpec& policy : config.policies) {
      CellResult cell;
      cell.problem = config.problems[pi];
      cell.policy = policy;
      cell.name = ProblemSlug(cell.problem) + "_" + PolicySlug(policy);
      if (const int seen = name_counts[cell.name]++; seen > 0) {
        cell.name += "-" + std::to_string(seen + 1);
      }
      StepSizePolicy built = StepSizePolicy::Nesterov(1.0);
      try {
        built = BuildPolicy(policy, prepared[pi].instance, config.iterations);
      } catch (const Error& e) {
        throw Error(ErrorCode::kConfigError, cell.name + ": " + e.what());
      }
      cells.push_back(std::move(cell));
      cell_inputs.emplace_back(pi, built);
    }
  }

  const size_t total = cells.size();
  const auto trace_file_for = [&](const CellResult& cell) -> fs::path {
    if (!config.trace_path) return base / ("trace_" + cell.name + ".csv");
    const fs::path given(*config.trace_path);
    const fs::path resolved = given.is_absolute() ? given : base / given;
    if (total == 1) return resolved;
    return resolved.parent_path() /
           (resolved.stem().string() + "_" + cell.name + resolved.extension().string());
  };

  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(total)));

  // Reference optima for problems without a known f*.
  for (auto& p : prepared) {
    if (!p.instance.optimum_value && !config.optimum_value) {
      p.reference = ReferenceOptimum(p.instance, p.initial_point,
                                     config.reference_multiplier * config.iterations);
    }
  }

  std::atomic<size_t> next{0};
  const auto worker = [&]() {
    for (size_t i = next++; i < total; i = next++) {
      CellResult& cell = cells[i];
      const PreparedProblem& p = prepared[cell_inputs[i].first];
      SolverConfig sc;
      sc.max_iterations = config.iterations;
      sc.initial_point = p.initial_point;
      sc.policy = cell_inputs[i].second;
      sc.weight_ks = config.weight_ks;
      sc.record_trace = true;
      sc.restart_factor = config.restart_factor;
      sc.subgradient_selection = config.subgradient_selection;
      sc.reference_optimum = config.optimum_value ? config.optimum_value : p.reference;
      try {
        cell.run = Run(p.instance, sc);
        cell.ok = true;
        if (!cell.run.trace.empty()) {
          const fs::path file = trace_file_for(cell);
          fs::create_directories(file.parent_path());
          EmitTraceCsv(cell.run.trace, config.weight_ks, file.string());
          cell.trace_file = file.string();
        }
      } catch (const Error& e) {
        cell.ok = false;
        cell.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  ExperimentOutcome outcome;
  json summary;
  summary["config"] = ToJson(config);
  summary["cells"] = json::array();
  for (const CellResult& cell : cells) {
    summary["cells"].push_back(CellSummary(cell));
    if (!cell.ok) outcome.any_failed = true;
    if (cell.ok && !cell.run.report.AllCertificatesPassed()) {
      outcome.all_certificates_passed = false;
    }
  }
  summary["all_certificates_passed"] = outcome.all_certificates_passed;

  const fs::path summary_path = fs::path(config.summary_path).is_absolute()
                                    ? fs::path(config.summary_path)
                                    : base / config.summary_path;
  fs::create_directories(summary_path.parent_path(), ec);
  std::ofstream out(summary_path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + summary_path.string());
  out << summary.dump(2) << "\n";
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + summary_path.string());

  outcome.summary = std::move(summary);
  outcome.cells = std::move(cells);
  return outcome;
}

TraceCheckOutcome CheckTrace(const std::string& csv_path,
                             const json& problem_doc) {
  RequireObject(problem_doc, "problem file");
  RejectUnknownKeys(problem_doc, "problem file", {"problem", "optimum_value"});
  std::optional<double> optimum;
  std::optional<double> radius;
  if (problem_doc.contains("problem")) {
    const ProblemSpec spec = ParseProblemSpec(problem_doc.at("problem"));
    if (spec.type == "lasso") {
      radius = spec.radius;
    } else {
      const ProblemInstance p = BuildProblem(spec);
      radius = p.radius;
      optimum = p.optimum_value;
    }
  }
  if (problem_doc.contains("optimum_value")) {
    optimum = GetNumber(problem_doc, "optimum_value", "problem file");
  }
  if (!optimum) {
    throw Error(ErrorCode::kConfigError,
                "problem file: no optimum_value and no known optimum");
  }

  std::ifstream in(csv_path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + csv_path);
  const auto split = [](const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
  };
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kConfigError, csv_path + ": empty");
  const std::vector<std::string> header = split(line);
  std::map<std::string, size_t> column;
  for (size_t i = 0; i < header.size(); ++i) column[header[i]] = i;
  for (const char* required : {"s", "eta", "g_norm", "G", "f_x", "f_best", "bound_family"}) {
    if (!column.count(required)) {
      throw Error(ErrorCode::kConfigError,
                  csv_path + ": missing column " + std::string(required));
    }
  }
  // k values from the f_avg_k<k> columns.
  std::vector<std::pair<double, std::string>> ks;
  for (const auto& name : header) {
    if (name.rfind("f_avg_k", 0) == 0) {
      const std::string label = name.substr(6);
      ks.emplace_back(std::strtod(label.c_str() + 1, nullptr), label);
    }
  }

  TraceCheckOutcome outcome;
  const auto violation = [&](int64_t s, const std::string& what) {
    outcome.violations.push_back("s=" + std::to_string(s) + ": " + what);
  };

  // Rows are kept to recompute bounds once we know there was no restart.
  struct Row {
    int64_t s;
    double g_norm;
    std::optional<double> big_g;
    std::map<std::string, std::optional<double>> cells;
  };
  std::vector<Row> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kConfigError,
                  csv_path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields");
    }
    const auto number = [&](const std::string& name) -> std::optional<double> {
      const std::string& f = fields[column.at(name)];
      if (f.empty()) return std::nullopt;
      char* end = nullptr;
      const double v = std::strtod(f.c_str(), &end);
      if (end == f.c_str()) {
        throw Error(ErrorCode::kConfigError, csv_path + ":" +
                                                 std::to_string(line_no) +
                                                 ": bad number in " + name);
      }
      return v;
    };
    Row row;
    const auto s = number("s");
    const auto g = number("g_norm");
    if (!s || !g || !number("f_x") || !number("f_best")) {
      throw Error(ErrorCode::kConfigError,
                  csv_path + ":" + std::to_string(line_no) + ": missing required value");
    }
    row.s = static_cast<int64_t>(*s);
    row.g_norm = *g;
    row.big_g = number("G");
    for (const auto& name : header) row.cells[name] = number(name);
    rows.push_back(std::move(row));
  }
  outcome.rows = static_cast<int64_t>(rows.size());

  bool restarted = false;
  for (size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    if (i > 0) {
      const Row& prev = rows[i - 1];
      if (r.s <= prev.s) violation(r.s, "s not strictly increasing");
      if (*r.cells.at("f_best") > *prev.cells.at("f_best")) {
        violation(r.s, "f_best increased");
      }
      if (r.big_g && prev.big_g && *r.big_g < *prev.big_g) restarted = true;
    }
    const auto check = [&](const std::string& avg_col, const std::string& bound_col) {
      if (!column.count(bound_col)) return;
      const auto avg = r.cells.at(avg_col);
      const auto bound = r.cells.at(bound_col);
      if (!avg || !bound) return;
      ++outcome.checks;
      if (!CheckCertificate(*avg - *optimum, *bound)) {
        violation(r.s, avg_col + " - f* = " + Format17(*avg - *optimum) +
                           " exceeds " + bound_col + " = " + Format17(*bound));
      }
    };
    for (const auto& [k, label] : ks) {
      if (k == 0.0) check("f_avg_" + label, "bound_family");
      check("f_avg_" + label, "bound_weak_" + label);
    }
  }

  // Recompute the family bounds from g_norm for restart-free traces.
  if (radius && !restarted) {
    double max_g = 0.0;
    std::vector<WeakErgodicBoundTracker> trackers;
    for (const auto& [k, label] : ks) trackers.emplace_back(k);
    for (size_t i = 0; i < rows.size(); ++i) {
      const Row& r = rows[i];
      const int64_t t = static_cast<int64_t>(i) + 1;
      max_g = std::max(max_g, r.g_norm);
      for (auto& tr : trackers) tr.Advance(t);
      const auto compare = [&](const std::string& col, double expected) {
        const auto stored = r.cells.at(col);
        if (!stored) return;
        ++outcome.checks;
        if (std::abs(*stored - expected) > kRelTol * std::abs(expected) + kAbsTol) {
          violation(r.s, col + " = " + Format17(*stored) + " but recomputed " +
                             Format17(expected));
        }
      };
      compare("bound_family", FamilyBound(*radius, t, max_g));
      for (size_t j = 0; j < ks.size(); ++j) {
        const std::string col = "bound_weak_" + ks[j].second;
        if (column.count(col)) compare(col, trackers[j].Value(*radius, max_g));
      }
    }
  }
  return outcome;
}

}  // namespace psg
