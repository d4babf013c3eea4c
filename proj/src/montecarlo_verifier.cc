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

#include "qng/montecarlo_verifier.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>

#include "qng/detector_model.h"
#include "qng/errors.h"
#include "qng/philox.h"

namespace qng {
namespace {

constexpr std::uint64_t kShardSize = 4096;

bool closer(const McSample& a, const McSample& b) {
  if (a.log_gap != b.log_gap) return a.log_gap > b.log_gap;
  return a.index < b.index;
}

struct Tally {
  std::uint64_t violations = 0;
  std::uint64_t asymptotic = 0;
  std::uint64_t out_of_range = 0;
  std::vector<McSample> closest;

  void keep(McSample s) {
    if (closest.size() == kClosestPoints && !closer(s, closest.back())) return;
    closest.insert(std::upper_bound(closest.begin(), closest.end(), s, closer), std::move(s));
    if (closest.size() > kClosestPoints) closest.pop_back();
  }

  void absorb(const Tally& other) {
    violations += other.violations;
    asymptotic += other.asymptotic;
    out_of_range += other.out_of_range;
    for (const auto& s : other.closest) keep(s);
  }
};

// Scores one sample; returns false when it lies above the locus.
bool score(const BoundaryOracle& oracle, McSample& s, Tally& tally) {
  const int n = oracle.order();
  const ClickPair c = click_probabilities_gaussian(MultimodeGaussianState{s.modes}, n, n + 1);
  s.r_n = c.r_n;
  s.r_n1 = c.r_n1;
  const auto t = oracle.threshold(c.r_n, c.r_n1);
  if (!t) {
    ++tally.out_of_range;
    return false;
  }
  s.threshold = t->r_n;
  s.regime = t->regime;
  s.log_gap = s.r_n > 0.0 ? std::log10(s.r_n / s.threshold) : -INFINITY;
  if (t->regime == ThresholdRegime::asymptotic) ++tally.asymptotic;
  if (s.r_n - s.threshold > kViolationTolerance) ++tally.violations;
  return true;
}

template <typename Draw>
McReport run_sharded(const BoundaryOracle& oracle, std::uint64_t runs, const ProgressFn& progress, Draw draw) {
  const std::uint64_t shards = (runs + kShardSize - 1) / kShardSize;
  std::vector<Tally> tallies(shards);
  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> done{0};
  std::mutex progress_mu;
  auto work = [&] {
    for (std::uint64_t k = next++; k < shards; k = next++) {
      const std::uint64_t end = std::min(runs, (k + 1) * kShardSize);
      for (std::uint64_t i = k * kShardSize; i < end; ++i) {
        McSample s = draw(i);
        if (score(oracle, s, tallies[k])) tallies[k].keep(std::move(s));
      }
      const std::uint64_t d = done += end - k * kShardSize;
      if (progress) {
        std::lock_guard lock(progress_mu);
        progress(d, runs);
      }
    }
  };
  std::vector<std::thread> pool;
  const int workers = static_cast<int>(std::min<std::uint64_t>(worker_count(), shards));
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  Tally total;
  for (const auto& t : tallies) total.absorb(t);
  McReport report;
  report.order = oracle.order();
  report.runs = runs;
  report.violations = total.violations;
  report.asymptotic_samples = total.asymptotic;
  report.out_of_range = total.out_of_range;
  report.closest_points = std::move(total.closest);
  if (!report.closest_points.empty()) report.min_signed_log_distance = report.closest_points.front().log_gap;
  return report;
}

}  // namespace

BoundaryOracle::BoundaryOracle(int order, SolverOptions options)
    : solver_(order, options), curve_(threshold_locus_curve(solver_)) {
  // Interpolation error measured at midpoints sets how close a sample must be
  // before it is re-solved exactly.
  const auto& s = curve_.samples();
  double worst = 0.0;
  for (size_t i = 1; i < s.size(); i += 3) {
    const double mid = std::sqrt(s[i - 1].r_n1 * s[i].r_n1);
    if (auto exact = solver_.solve(mid)) {
      worst = std::max(worst, std::abs(curve_.interpolate(mid) / exact->r_n_max - 1.0));
    }
  }
  screen_margin_ = std::max(10.0 * worst, 1e-8);
}

std::optional<ThresholdValue> BoundaryOracle::threshold(double r_n, double r_n1) const {
  const bool below = r_n1 < curve_.r_n1_min();
  const bool above = r_n1 > curve_.r_n1_max();
  if (below && r_n1 < solver_.locus_min()) return curve_.evaluate(r_n1);
  if (!below && !above) {
    const double v = curve_.interpolate(r_n1);
    if (r_n < v * (1.0 - screen_margin_)) return ThresholdValue{v, ThresholdRegime::interpolated};
  }
  if (auto exact = solver_.solve(r_n1)) return ThresholdValue{exact->r_n_max, ThresholdRegime::interpolated};
  if (above) return std::nullopt;
  return curve_.evaluate(r_n1);
}

McReport verify(const BoundaryOracle& oracle, int modes, std::uint64_t runs, std::uint64_t seed,
                const ProgressFn& progress) {
  if (modes < 1) throw DomainError("mode count must be >= 1");
  if (runs < 1) throw DomainError("run count must be >= 1");
  const int n = oracle.order();
  const double var_lo = 1.0 / (n + 2.0);
  McReport report = run_sharded(oracle, runs, progress, [&](std::uint64_t i) {
    PhiloxStream rng(seed, i);
    McSample s;
    s.index = i;
    s.modes.resize(modes);
    for (auto& m : s.modes) {
      m.beta = std::sqrt(rng.uniform(0.0, 2.0 * n));
      m.variance = rng.uniform(var_lo, 1.0);
      m.phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    return s;
  });
  report.modes = modes;
  report.seed = seed;
  report.beyond_paper = modes > 3;
  return report;
}

McReport verify(int n, int modes, std::uint64_t runs, std::uint64_t seed, const ProgressFn& progress) {
  return verify(boundary_oracle(n), modes, runs, seed, progress);
}

McReport boundary_probe(const BoundaryOracle& oracle, const ThresholdSample& point, double jitter_scale,
                        std::uint64_t trials, std::uint64_t seed) {
  if (!(jitter_scale >= 0.0)) throw DomainError("jitter scale must be >= 0");
  if (trials < 1) throw DomainError("trial count must be >= 1");
  McReport report = run_sharded(oracle, trials, {}, [&](std::uint64_t i) {
    PhiloxStream rng(seed, i);
    McSample s;
    s.index = i;
    GaussianModeParams m;
    m.beta = std::abs(point.beta * (1.0 + jitter_scale * rng.normal()));
    m.variance = std::clamp(point.variance * (1.0 + jitter_scale * rng.normal()), 1e-12, 1.0);
    m.phi = jitter_scale * rng.normal();
    s.modes = {m};
    return s;
  });
  report.modes = 1;
  report.seed = seed;
  return report;
}

const BoundaryOracle& boundary_oracle(int order) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<BoundaryOracle>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<BoundaryOracle>(order);
  return *slot;
}

}  // namespace qng
