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


// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "psg/bounds.h"
#include "psg/core.h"
#include "psg/problems.h"
#include "psg/projection.h"
#include "psg/solver.h"
#include "psg/stepsize.h"

namespace psg {
namespace {

struct Verdict {
  bool ok = true;
  std::string detail;

  void Fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

// Runs collected across criteria, reused by the invariant checks.
std::vector<std::pair<std::string, RunReport>> g_certified_runs;

std::string Describe(const RunReport& r) {
  for (const auto& [name, c] : r.certificates) {
    if (!c.passed) {
      return name + " violated at s=" + std::to_string(*c.first_violation) +
             " (slack " + std::to_string(c.worst_slack) + ")";
    }
  }
  return "";
}

bool HasCertificate(const RunReport& r, const std::string& name) {
  const auto it = r.certificates.find(name);
  return it != r.certificates.end() && it->second.checks > 0;
}

Verdict AbsFamilyCertificates(const std::vector<double>& ks, bool weak) {
  Verdict v;
  for (int dim : {1, 10}) {
    const ProblemInstance p = MakeAbsProblem(dim);
    for (double a : {0.0, 0.5, 1.0}) {
      for (uint64_t seed : {1u, 2u, 3u}) {
        std::mt19937_64 rng(seed * 100 + dim);
        SolverConfig c;
        c.max_iterations = 5000;
        c.initial_point = p.projector->SampleFeasible(rng);
        c.policy = StepSizePolicy::Family(p.radius, a);
        c.weight_ks = ks;
        const RunReport r = Run(p, c).report;
        const std::string cell = "abs" + std::to_string(dim) + " a=" +
                                 FormatShort(a) + " seed=" + std::to_string(seed);
        g_certified_runs.emplace_back(cell, r);
        if (r.iterations_run != 5000 &&
            r.stop_reason == StopReason::kBudgetExhausted) {
          v.Fail(cell + ": short run");
        }
        std::vector<std::string> wanted;
        if (weak) {
          for (double k : ks) {
            wanted.push_back(BoundLabel{BoundKind::kWeakErgodic, k}.ToString());
          }
        } else {
          wanted.push_back(BoundLabel{BoundKind::kFamilyErgodic}.ToString());
        }
        for (const std::string& name : wanted) {
          if (!HasCertificate(r, name)) {
            v.Fail(cell + ": " + name + " never checked");
          } else if (r.certificates.at(name).checks != r.iterations_run) {
            v.Fail(cell + ": " + name + " not checked at every t");
          } else if (!r.certificates.at(name).passed) {
            v.Fail(cell + ": " + Describe(r));
          }
        }
      }
    }
  }
  return v;
}

Verdict Theorem1() { return AbsFamilyCertificates({0.0}, false); }

Verdict Theorem2() {
  return AbsFamilyCertificates({-1.0, -0.5, 0.0, 1.0, 2.0, 8.0}, true);
}

Verdict SqrtExample() {
  Verdict v;
  const ProblemInstance p = MakeSqrtExample();
  SolverConfig c;
  c.max_iterations = 10000;
  c.initial_point = Vector::Constant(1, 0.01);
  c.policy = StepSizePolicy::Family(p.radius, 1.0);
  c.weight_ks = {0.0};
  c.record_trace = true;
  const RunResult r = Run(p, c);
  g_certified_runs.emplace_back("sqrt", r.report);
  if (r.trace.empty() || r.trace.front().g_norm != 5.0) {
    v.Fail("start subgradient norm is not 5");
  }
  const std::string fam = BoundLabel{BoundKind::kFamilyErgodic}.ToString();
  if (!HasCertificate(r.report, fam) ||
      r.report.certificates.at(fam).checks != 10000 ||
      !r.report.certificates.at(fam).passed) {
    v.Fail("certificate: " + Describe(r.report));
  }
  const double gap = *r.report.best_value - (-1.0);
  if (!(gap <= 1e-2)) v.Fail("best gap " + std::to_string(gap));
  if (v.ok) v.detail = "best gap " + std::to_string(gap);
  return v;
}

Verdict ClassicReduction() {
  Verdict v;
  const ProblemInstance p = MakeAbsProblem(1);
  for (double x1 : {0.3, -0.9, 1.0, 0.123456789}) {
    SolverConfig c;
    c.max_iterations = 5000;
    c.initial_point = Vector::Constant(1, x1);
    c.record_trace = true;
    c.policy = StepSizePolicy::Family(1.0, 1.0);
    const RunResult fam = Run(p, c);
    c.policy = StepSizePolicy::Classic(1.0, 1.0);
    const RunResult cls = Run(p, c);
    if (fam.trace.size() != cls.trace.size()) {
      v.Fail("trace lengths differ for x1=" + FormatShort(x1));
      continue;
    }
    size_t prefix = fam.trace.size();
    if (fam.report.stop_reason == StopReason::kZeroSubgradient) --prefix;
    for (size_t i = 0; i < prefix; ++i) {
      if (fam.trace[i].g_norm != 1.0) {
        v.Fail("subgradient norm not 1 at s=" + std::to_string(i + 1));
        break;
      }
      if (std::memcmp(&fam.trace[i].eta, &cls.trace[i].eta, sizeof(double)) != 0) {
        v.Fail("steps differ at s=" + std::to_string(i + 1) +
               " for x1=" + FormatShort(x1));
        break;
      }
    }
  }
  return v;
}

// max_{j<=s} |g_j| j^((1-a)/2), evaluated directly.
double ClosedFormG(const std::vector<double>& g, size_t s, double a) {
  double best = -std::numeric_limits<double>::infinity();
  for (size_t j = 1; j <= s; ++j) {
    best = std::max(best, g[j - 1] * std::pow(static_cast<double>(j), (1.0 - a) / 2.0));
  }
  return best;
}

Verdict GEquivalence() {
  Verdict v;
  std::mt19937_64 rng(2026);
  std::uniform_int_distribution<int> length(1, 1000);
  std::lognormal_distribution<double> size(0.0, 2.0);
  std::bernoulli_distribution zero(0.05);
  double worst = 0.0;
  for (double a : {0.0, 0.3, 1.0}) {
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> g(length(rng));
      for (double& x : g) x = zero(rng) ? 0.0 : size(rng);
      std::optional<double> big_g;
      // Direct evaluation is quadratic, so only every 97th index uses it.
      double running = -std::numeric_limits<double>::infinity();
      for (size_t s = 1; s <= g.size(); ++s) {
        big_g = FamilyUpdateG(big_g, g[s - 1], static_cast<int64_t>(s), a);
        running = std::max(running, g[s - 1] * std::pow(static_cast<double>(s),
                                                        (1.0 - a) / 2.0));
        const double expect = (s % 97 == 0 || s == g.size())
                                  ? ClosedFormG(g, s, a)
                                  : running;
        const double rel = std::abs(*big_g - expect) /
                           std::max(std::abs(expect), 1e-300);
        worst = std::max(worst, expect == 0.0 ? std::abs(*big_g) : rel);
      }
    }
  }
  if (!(worst <= 1e-12)) v.Fail("worst relative difference " + std::to_string(worst));
  return v;
}

Verdict Monotonicity() {
  Verdict v;
  int covered = 0;
  for (const auto& [cell, r] : g_certified_runs) {
    for (double k : {-1.0, -0.5, 0.0, 1.0, 2.0}) {
      const std::string name = "Monotone(k=" + FormatShort(k) + ")";
      const auto it = r.certificates.find(name);
      if (it == r.certificates.end()) continue;
      ++covered;
      if (!it->second.passed) v.Fail(cell + ": " + name + " violated");
    }
  }
  if (covered == 0) v.Fail("no monotonicity checks were run");
  if (v.ok) v.detail = std::to_string(covered) + " run/k pairs";
  return v;
}

Verdict PerStep() {
  Verdict v;
  int covered = 0;
  for (const auto& [cell, r] : g_certified_runs) {
    const auto it = r.certificates.find("PerStep");
    if (it == r.certificates.end()) continue;
    ++covered;
    if (it->second.checks != r.iterations_run) v.Fail(cell + ": not every step checked");
    if (!it->second.passed) {
      v.Fail(cell + ": violated at s=" + std::to_string(*it->second.first_violation));
    }
  }
  if (covered == 0) v.Fail("no per-step checks were run");
  if (v.ok) v.detail = std::to_string(covered) + " runs";
  return v;
}

double TailStd(const Trace& trace, size_t tail) {
  const size_t start = trace.size() - tail;
  double mean = 0.0;
  for (size_t i = start; i < trace.size(); ++i) mean += trace[i].f_x;
  mean /= static_cast<double>(tail);
  double ss = 0.0;
  for (size_t i = start; i < trace.size(); ++i) {
    ss += (trace[i].f_x - mean) * (trace[i].f_x - mean);
  }
  return std::sqrt(ss / static_cast<double>(tail - 1));
}

Verdict DeskLasso() {
  Verdict v;
  constexpr int64_t kIters = 2000;
  std::string notes;
  for (uint64_t seed : {1u, 2u, 3u}) {
    const ProblemInstance p = MakeLasso(seed, 64, 40, 50.0, 10.0);
    const Vector x1 = Vector::Zero(p.dimension);
    const std::string tag = "seed " + std::to_string(seed) + ": ";

    SolverConfig c;
    c.max_iterations = kIters;
    c.initial_point = x1;
    c.record_trace = true;
    c.weight_ks = {-1.0, 0.0, 2.0};

    c.policy = StepSizePolicy::Nesterov(p.radius);
    const RunResult nes = Run(p, c);

    c.reference_optimum = ReferenceOptimum(p, x1, 10 * kIters);
    c.policy = StepSizePolicy::Family(p.radius, 1.0);
    const RunResult fam = Run(p, c);
    g_certified_runs.emplace_back("lasso " + tag, fam.report);

    if (fam.trace.size() != kIters || nes.trace.size() != kIters) {
      v.Fail(tag + "run stopped early");
      continue;
    }
    const double std_fam = TailStd(fam.trace, 500);
    const double std_nes = TailStd(nes.trace, 500);
    if (!(std_fam < std_nes)) {
      v.Fail(tag + "(i) tail std family " + std::to_string(std_fam) +
             " >= nesterov " + std::to_string(std_nes));
    }
    const double k0 = fam.report.averaged_values.at("k0");
    const double k2 = fam.report.averaged_values.at("k2");
    if (!(k2 <= k0 + 1e-6)) {
      v.Fail(tag + "(ii) k2 " + std::to_string(k2) + " > k0 " + std::to_string(k0));
    }
    for (size_t i = 1; i < fam.trace.size(); ++i) {
      if (fam.trace[i].f_best > fam.trace[i - 1].f_best) {
        v.Fail(tag + "(iii) best value increased at s=" + std::to_string(i + 1));
        break;
      }
    }
    if (fam.report.optimum_source != "reference" ||
        !HasCertificate(fam.report, BoundLabel{BoundKind::kFamilyErgodic}.ToString())) {
      v.Fail(tag + "(iii) reference certificate not checked");
    } else if (!fam.report.AllCertificatesPassed()) {
      v.Fail(tag + "(iii) " + Describe(fam.report));
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%sstd %.3g<%.3g k2-k0 %.3g; ", tag.c_str(),
                  std_fam, std_nes, k2 - k0);
    notes += buf;
  }
  if (v.ok) v.detail = notes;
  return v;
}

Verdict BoundSpotValues() {
  Verdict v;
  const double nesterov = NesterovBound(1.0, 1.0, 3);
  const double nesterov_expect = (2.0 + std::log(3.0)) / 4.0;
  if (!(std::abs(nesterov - nesterov_expect) <= 1e-12)) {
    v.Fail("nesterov bound " + std::to_string(nesterov));
  }
  // (t^((k+1)/2) + sum s^((k-1)/2)) / (2 sum s^(k/2)) R max|g|, k = 0, t = 4.
  double num = std::sqrt(4.0);
  double den = 0.0;
  for (int s = 1; s <= 4; ++s) {
    num += 1.0 / std::sqrt(static_cast<double>(s));
    den += 1.0;
  }
  const double weak_expect = num / (2.0 * den);
  const double weak = WeakErgodicBound(1.0, 4, 0.0, 1.0);
  if (!(std::abs(weak - weak_expect) <= 1e-12)) {
    v.Fail("weak ergodic bound " + std::to_string(weak));
  }
  return v;
}

struct Criterion {
  const char* name;
  double budget_seconds;  // <= 0 means no runtime limit
  std::function<Verdict()> body;
};

int Main() {
  const std::vector<Criterion> criteria = {
      {"family ergodic certificate on abs, every t <= 5000", 5.0, Theorem1},
      {"weak ergodic certificates on abs, every t <= 5000", 10.0, Theorem2},
      {"sqrt example from 0.01: certificate and best gap <= 1e-2", 0.0, SqrtExample},
      {"family(a=1) steps equal classic(L=1) steps bitwise", 0.0, ClassicReduction},
      {"recursive G equals closed form", 0.0, GEquivalence},
      {"w/eta nondecreasing for k in {-1,-0.5,0,1,2}", 0.0, Monotonicity},
      {"per-step inequality at every iteration", 0.0, PerStep},
      {"desk-scale lasso behaviour", 60.0, DeskLasso},
      {"bound evaluator spot values", 0.0, BoundSpotValues},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.body();
    } catch (const std::exception& e) {
      v.Fail(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0.0 && secs > c.budget_seconds) {
      v.Fail("took " + std::to_string(secs) + " s, limit " +
             std::to_string(c.budget_seconds) + " s");
    }
    if (!v.ok) ++failed;
    std::printf("%s  %-58s %7.3fs  %s\n", v.ok ? "PASS" : "FAIL", c.name, secs,
                v.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace psg

int main() { return psg::Main(); }
