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

#include "qng/source_sim.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <thread>

#include "qng/errors.h"
#include "qng/philox.h"

namespace qng {

void HeraldedSourceModel::validate() const {
  if (!(p1 >= 0.0 && p2 >= 0.0 && p3 >= 0.0)) throw DomainError("window probabilities must be >= 0");
  if (p1 + p2 + p3 > 1.0 + 1e-12) throw DomainError("window probabilities sum above one");
}

std::vector<std::string> HeraldedSourceModel::warnings() const {
  std::vector<std::string> out;
  if (p2 > 0.1 * p1) out.push_back("two-photon probability is not small compared to p1");
  if (p3 > p2 && p3 > 0.0) out.push_back("three-photon probability exceeds the two-photon one");
  return out;
}

PhotonDistribution HeraldedSourceModel::window() const {
  validate();
  PhotonDistribution d{{std::max(p0(), 0.0), p1, p2, p3}, 0.0};
  while (d.probs.size() > 1 && d.probs.back() == 0.0) d.probs.pop_back();
  return d;
}

void ExperimentModel::validate() const {
  source.validate();
  detector.validate();
  if (merge_count < 1) throw DomainError("merge count must be >= 1");
  if (detector.channels > 64) throw DomainError("event sampler supports at most 64 channels");
}

ExperimentModel certification_model(const HeraldedSourceModel& source, int n, double efficiency,
                                    std::uint64_t trials, std::uint64_t seed) {
  ExperimentModel m;
  m.source = source;
  m.merge_count = n;
  m.detector = {n + 1, efficiency};
  m.trials = trials;
  m.seed = seed;
  m.validate();
  return m;
}

PhotonDistribution pre_loss_state(const ExperimentModel& model) {
  model.validate();
  const std::vector<PhotonDistribution> windows(model.merge_count, model.source.window());
  return merge(windows);
}

PhotonDistribution merged_state(const ExperimentModel& model) {
  return attenuate(pre_loss_state(model), model.detector.efficiency);
}

CountRecord simulate_counts(const ExperimentModel& model, std::uint64_t seed) {
  model.validate();
  if (model.trials < 1) throw DomainError("trials must be >= 1");
  const int n = model.order();
  const int channels = model.detector.channels;
  if (channels < n + 1) throw DomainError("detector needs at least n+1 channels");
  const double eff = model.detector.efficiency;

  const PhotonDistribution pre = pre_loss_state(model);
  std::vector<double> cdf(pre.probs.size());
  std::partial_sum(pre.probs.begin(), pre.probs.end(), cdf.begin());

  const std::uint64_t all = (std::uint64_t{1} << (n + 1)) - 1;
  constexpr std::uint64_t kShard = 1 << 16;
  const std::uint64_t shards = (model.trials + kShard - 1) / kShard;
  std::vector<std::vector<std::uint64_t>> partial(shards, std::vector<std::uint64_t>(n + 3, 0));
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t k = next++; k < shards; k = next++) {
      auto& acc = partial[k];
      const std::uint64_t end = std::min(model.trials, (k + 1) * kShard);
      for (std::uint64_t i = k * kShard; i < end; ++i) {
        PhiloxStream rng(seed, i);
        const double u = rng.uniform();
        const int photons = static_cast<int>(
            std::min<size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin(), cdf.size() - 1));
        std::uint64_t mask = 0;
        for (int p = 0; p < photons; ++p) {
          const bool survives = rng.uniform() < eff;
          const std::uint32_t ch = rng.below(static_cast<std::uint32_t>(channels));
          if (survives) mask |= std::uint64_t{1} << ch;
        }
        mask &= all;
        if (mask == all) ++acc[n + 1];
        for (int j = 0; j <= n; ++j) {
          const std::uint64_t subset = all & ~(std::uint64_t{1} << j);
          if ((mask & subset) == subset) ++acc[j];
        }
      }
    }
  };
  std::vector<std::thread> pool;
  const int workers = static_cast<int>(std::min<std::uint64_t>(worker_count(), shards));
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  CountRecord rec;
  rec.order = n;
  rec.trials = model.trials;
  rec.subsets.assign(n + 1, 0);
  for (const auto& acc : partial) {
    for (int j = 0; j <= n; ++j) rec.subsets[j] += acc[j];
    rec.count_n1 += acc[n + 1];
  }
  rec.count_n = rec.subsets[n];
  return rec;
}

const ThresholdCurve& default_curve(int order) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<ThresholdCurve>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<ThresholdCurve>(threshold_locus_curve(ThresholdSolver(order)));
  return *slot;
}

std::vector<SuiteEntry> reproduce_experiment_suite(double p1, double p2, double efficiency,
                                                   const std::vector<int>& n_range, std::uint64_t trials,
                                                   const std::vector<int>& order_range, const CurveProvider& curves) {
  if (trials < 1) throw DomainError("trials must be >= 1");
  const std::vector<int>& orders = order_range.empty() ? n_range : order_range;
  for (int n : n_range) {
    if (n < 1 || n > 9) throw DomainError("suite states must have 1..9 merged photons");
  }
  for (int k : orders) {
    if (k < 1) throw DomainError("criterion order must be >= 1");
  }
  const HeraldedSourceModel source{p1, p2, 0.0};
  std::vector<SuiteEntry> out;
  for (int n : n_range) {
    for (int k : orders) {
      SuiteEntry e;
      e.state_n = n;
      e.order = k;
      ExperimentModel model = certification_model(source, n, efficiency, trials);
      model.detector.channels = k + 1;
      const PhotonDistribution dist = merged_state(model);
      e.clicks = click_probabilities(dist, k, k + 1);
      auto& rec = e.expected_counts;
      rec.order = k;
      rec.trials = trials;
      rec.count_n = static_cast<std::uint64_t>(std::llround(e.clicks.r_n * static_cast<double>(trials)));
      rec.count_n1 = std::min(rec.count_n, static_cast<std::uint64_t>(std::llround(e.clicks.r_n1 * static_cast<double>(trials))));
      const ThresholdCurve& curve = curves(k);
      try {
        e.verdict = classify(rec, curve);
        e.depth = qng_depth(dist, k, k + 1, curve);
      } catch (const RangeError&) {
        // Error rate above the traced locus: nothing can be certified there.
        e.verdict = Verdict{};
        e.verdict.state = VerdictState::inconclusive;
        e.verdict.rates = estimate_rates(rec);
        e.verdict.d_n = e.verdict.d_n1 = NAN;
        e.depth = {DepthKind::not_qng_at_source, 0.0};
      }
      out.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace qng
