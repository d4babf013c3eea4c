// Copyright 2026 The QNG Witness Authors
//
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

// Acceptance suite. One [PASS]/[FAIL] line per criterion, details indented.
//
//   acceptance [--only 1,3] [--expect-fail 1,4]
//
// Exit status is 0 when the failing criteria are exactly the expected set
// (empty by default), 1 otherwise.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.h"
#include "qng/detector_model.h"
#include "qng/montecarlo_verifier.h"
#include "qng/philox.h"
#include "qng/source_sim.h"
#include "qng/threshold_engine.h"
#include "qng/witness.h"

namespace {

using namespace qng;

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> details;

  void detail(const char* fmt, ...) __attribute__((format(printf, 2, 3))) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    details.emplace_back(buf);
  }
};

std::string format(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
std::string format(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

Outcome fock_transmittance() {
  Outcome o;
  const double quoted[] = {0.30, 0.42, 0.50, 0.53, 0.63};
  int bad = 0;
  for (int m = 2; m <= 6; ++m) {
    const double eta = fock_single_criterion_transmittance(m);
    const bool ok = std::abs(eta - quoted[m - 2]) <= 0.01;
    bad += !ok;
    o.detail("m=%d eta=%.4f expected %.2f +- 0.01 %s", m, eta, quoted[m - 2], ok ? "ok" : "MISS");
  }
  o.pass = bad == 0;
  o.summary = format("%d of 5 transmittances within 0.01", 5 - bad);
  return o;
}

Outcome monte_carlo() {
  Outcome o;
  struct Tier {
    int modes;
    std::uint64_t runs;
  };
  std::uint64_t total = 0;
  for (int n = 1; n <= 3; ++n) {
    const BoundaryOracle& oracle = boundary_oracle(n);
    for (const Tier t : {Tier{1, 100000}, Tier{2, 1000000}, Tier{3, 10000000}}) {
      const auto t0 = std::chrono::steady_clock::now();
      const McReport r = verify(oracle, t.modes, t.runs, 20260000 + 10 * n + t.modes);
      const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      total += r.violations;
      o.pass = o.pass && r.violations == 0;
      o.detail("n=%d M=%d runs=%llu violations=%llu closest log10 gap=%.3e asymptotic=%llu out_of_range=%llu (%.1f s)", n,
               t.modes, static_cast<unsigned long long>(r.runs), static_cast<unsigned long long>(r.violations),
               r.min_signed_log_distance, static_cast<unsigned long long>(r.asymptotic_samples),
               static_cast<unsigned long long>(r.out_of_range), sec);
    }
  }
  o.summary = format("%llu violations at tolerance %.0e over 9 runs", static_cast<unsigned long long>(total),
                     kViolationTolerance);
  return o;
}

Outcome transfer_matrix() {
  Outcome o;
  double worst_sum = 0, worst_closed = 0;
  int cells = 0, closed = 0;
  for (int channels = 1; channels <= 8; ++channels) {
    for (int n = 0; n <= std::min(6, channels); ++n) {
      for (int m = 0; m <= 8; ++m) {
        const double sum = transfer_matrix_element(n, m, channels);
        const double brute = oracle::multinomial_transfer(n, m, channels);
        worst_sum = std::max(worst_sum, std::abs(sum - brute));
        ++cells;
        if (m >= n && m <= n + 2) {
          worst_closed = std::max(worst_closed, std::abs(transfer_matrix_closed_form(n, m, channels) - brute));
          worst_closed = std::max(worst_closed, std::abs(transfer_matrix_closed_form(n, m, channels) - sum));
          ++closed;
        }
      }
    }
  }
  o.pass = worst_sum <= 1e-12 && worst_closed <= 1e-12;
  o.detail("alternating sum vs enumeration: %d cells, max |diff| = %.2e", cells, worst_sum);
  o.detail("closed forms vs both: %d cells, max |diff| = %.2e", closed, worst_closed);
  o.summary = format("max deviation %.2e (limit 1e-12)", std::max(worst_sum, worst_closed));
  return o;
}

Outcome asymptotics() {
  Outcome o;
  int bad = 0;
  for (int n = 1; n <= 9; ++n) {
    const ThresholdCurve c = threshold_exact(n);
    const double slope = c.log_slope(1e-12);
    const double want = (n + 2.0) / n;
    const double slope_err = slope / want - 1;
    const double exact = c.evaluate(1e-12).r_n;
    const double closed = threshold_closed_form(n, 1e-12);
    const double closed_err = closed / exact - 1;
    const bool ok = std::abs(slope_err) <= 0.01 && std::abs(closed_err) <= 0.05;
    bad += !ok;
    o.detail("n=%d slope=%.5f target %.5f (rel %+.2e) closed/exact=%.4f %s", n, slope, want, slope_err,
             closed / exact, ok ? "ok" : "MISS");
  }
  const oracle::GridOptimum g = oracle::grid_search_threshold(9, 1e-12);
  o.detail("grid search n=9 at r_n1=1e-12: r_n=%.5e (beta=%.4f V=%.5f), closed form %.5e", g.r_n, g.beta, g.variance,
           threshold_closed_form(9, 1e-12));
  o.pass = bad == 0;
  o.summary = format("%d of 9 orders within 1%% slope and 5%% closed form", 9 - bad);
  return o;
}

Outcome parametric() {
  Outcome o;
  int bad = 0, total = 0;
  for (int n = 4; n <= 9; ++n) {
    const ThresholdSolver solver(n);
    for (double t : {0.1, 0.5, 1.0}) {
      const auto [rn, rn1] = threshold_param_approx(n, t);
      const auto exact = solver.solve(rn1);
      ++total;
      if (!exact) {
        ++bad;
        o.detail("n=%d t=%.1f r_n1=%.3e outside traced locus MISS", n, t, rn1);
        continue;
      }
      const double ratio = rn / exact->r_n_max;
      const bool ok = std::abs(ratio - 1) <= 0.1;
      bad += !ok;
      o.detail("n=%d t=%.1f r_n1=%.3e approx/exact=%.4f %s", n, t, rn1, ratio, ok ? "ok" : "MISS");
    }
  }
  const auto [rn, rn1] = threshold_param_approx(4, 1.0);
  const oracle::GridOptimum g = oracle::grid_search_threshold(4, rn1);
  o.detail("grid search n=4 at r_n1=%.4e: r_n=%.5e (beta=%.4f V=%.5f), approx/grid=%.4f", rn1, g.r_n, g.beta, g.variance,
           rn / g.r_n);
  o.pass = bad == 0;
  o.summary = format("%d of %d points within 10%%", total - bad, total);
  return o;
}

double depth_rank(const Depth& d) {
  switch (d.kind) {
    case DepthKind::unbounded: return INFINITY;
    case DepthKind::not_qng_at_source: return -INFINITY;
    case DepthKind::finite: return d.db;
  }
  return -INFINITY;
}

Outcome experiment_shape() {
  Outcome o;
  std::vector<int> all;
  for (int n = 1; n <= 9; ++n) all.push_back(n);
  const auto suite = reproduce_experiment_suite(0.99, 0.002, 0.5, all, 10000000000ull, all);
  int positive = 0, optimal = 0;
  for (int n = 1; n <= 9; ++n) {
    const SuiteEntry* diag = nullptr;
    for (const auto& e : suite) {
      if (e.state_n == n && e.order == n) diag = &e;
    }
    const bool pos = diag->verdict.state == VerdictState::positive && diag->depth.kind == DepthKind::finite;
    positive += pos;
    bool best = true;
    std::string row;
    for (const auto& e : suite) {
      if (e.state_n != n || e.order <= n) continue;
      const bool below = depth_rank(e.depth) < depth_rank(diag->depth);
      best = best && below;
      row += format(" k=%d:%s/%s%s", e.order, to_string(e.verdict.state).c_str(), to_string(e.depth).c_str(),
                    below ? "" : "(!)");
    }
    optimal += best;
    o.detail("state %d: diagonal %s depth %s dB%s; higher orders:%s", n, to_string(diag->verdict.state).c_str(),
             to_string(diag->depth).c_str(), pos ? "" : " MISS", row.empty() ? " none" : row.c_str());
  }
  o.pass = positive == 9 && optimal == 9;
  o.summary = format("%d of 9 diagonal cells positive with finite depth, %d of 9 diagonal-optimal", positive, optimal);
  return o;
}

Outcome fock_invariance() {
  Outcome o;
  int bad = 0;
  for (int n = 1; n <= 9; ++n) {
    const ThresholdCurve& c = default_curve(n);
    std::string row;
    bool ok = true;
    for (double eta : {1.0, 0.5, 0.1, 0.01}) {
      const ClickPair p = click_probabilities(attenuate(PhotonDistribution::fock(n), eta), n, n + 1);
      const bool qng = functional_check(p.r_n, p.r_n1, c).verdict == QngVerdict::qng;
      ok = ok && qng;
      row += format(" eta=%g:%s", eta, qng ? "positive" : "NOT");
    }
    const Depth d = qng_depth(PhotonDistribution::fock(n), n, n + 1, c);
    ok = ok && d.kind == DepthKind::unbounded;
    bad += !ok;
    o.detail("n=%d%s depth=%s", n, row.c_str(), to_string(d).c_str());
  }
  o.pass = bad == 0;
  o.summary = format("%d of 9 Fock states positive at every eta with unbounded depth", 9 - bad);
  return o;
}

Outcome coverage() {
  Outcome o;
  const std::uint64_t trials = 1000000;
  const int reps = 10000;
  for (double p : {1e-4, 0.01, 0.3}) {
    int covered = 0;
    for (int i = 0; i < reps; ++i) {
      PhiloxStream rng(8, static_cast<std::uint64_t>(p * 1e6) * reps + i);
      std::binomial_distribution<std::uint64_t> draw(trials, p);
      const IntervalEstimate e = bayes_interval(draw(rng), trials);
      covered += e.lo <= p && p <= e.hi;
    }
    const double frac = static_cast<double>(covered) / reps;
    const bool ok = std::abs(frac - kCredibleMass) <= 0.03;
    o.pass = o.pass && ok;
    o.detail("p=%g trials=%llu coverage=%.4f %s", p, static_cast<unsigned long long>(trials), frac, ok ? "ok" : "MISS");
  }
  o.summary = "68% intervals over 10^4 replications";
  return o;
}

Outcome event_agreement() {
  Outcome o;
  const HeraldedSourceModel models[] = {{0.9, 0.01, 0.0}, {0.6, 0.05, 0.0}, {0.3, 0.002, 0.0}};
  const double effs[] = {0.5, 0.8, 1.0};
  double worst = 0;
  for (int k = 0; k < 3; ++k) {
    for (int n = 1; n <= 3; ++n) {
      const ExperimentModel m = certification_model(models[k], n, effs[k], 1000000);
      const CountRecord r = simulate_counts(m, 900 + 10 * k + n);
      const ClickPair a = click_probabilities(merged_state(m), n, n + 1);
      auto z = [&](std::uint64_t count, double p) {
        const double se = std::sqrt(p * (1 - p) / r.trials);
        const double diff = static_cast<double>(count) / r.trials - p;
        return se > 0 ? std::abs(diff) / se : (diff == 0 ? 0.0 : INFINITY);
      };
      const double zn = z(r.count_n, a.r_n), zn1 = z(r.count_n1, a.r_n1);
      worst = std::max({worst, zn, zn1});
      const bool ok = zn <= 5 && zn1 <= 5;
      o.pass = o.pass && ok;
      o.detail("p1=%g p2=%g eff=%g n=%d: r_n %.5e vs %.5e (%.2f SE), r_n1 %.5e vs %.5e (%.2f SE) %s", models[k].p1,
               models[k].p2, effs[k], n, static_cast<double>(r.count_n) / r.trials, a.r_n, zn,
               static_cast<double>(r.count_n1) / r.trials, a.r_n1, zn1, ok ? "ok" : "MISS");
    }
  }
  o.summary = format("largest deviation %.2f standard errors (limit 5)", worst);
  return o;
}

std::set<int> parse_list(const char* s) {
  std::set<int> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.insert(std::atoi(item.c_str()));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only, expected;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--only") && i + 1 < argc) {
      only = parse_list(argv[++i]);
    } else if (!std::strcmp(argv[i], "--expect-fail") && i + 1 < argc) {
      expected = parse_list(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--only LIST] [--expect-fail LIST]\n", argv[0]);
      return 2;
    }
  }
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "fock-transmittance", fock_transmittance}, {2, "monte-carlo-certificate", monte_carlo},
      {3, "transfer-matrix", transfer_matrix},       {4, "threshold-asymptotics", asymptotics},
      {5, "parametric-approximation", parametric},   {6, "experiment-shape", experiment_shape},
      {7, "ideal-fock-invariance", fock_invariance}, {8, "interval-coverage", coverage},
      {9, "event-analytic-agreement", event_agreement},
  };
  std::set<int> failed;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("exception: ") + e.what();
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.summary.c_str(), sec);
    for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
    if (!o.pass) failed.insert(c.id);
  }
  std::string list;
  for (int id : failed) list += (list.empty() ? "" : ",") + std::to_string(id);
  std::printf("acceptance: %zu failing criteria%s%s\n", failed.size(), list.empty() ? "" : ": ", list.c_str());
  if (failed != expected) {
    std::string want;
    for (int id : expected) want += (want.empty() ? "" : ",") + std::to_string(id);
    std::printf("acceptance: failing set differs from expected {%s}\n", want.c_str());
    return 1;
  }
  return 0;
}
