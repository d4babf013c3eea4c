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

// qng: threshold tables, verdicts, depths, simulation and Monte-Carlo checks.
//
// Exit codes: 0 success, 2 usage or input error, 3 numerical failure.

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qng/errors.h"
#include "qng/io.h"
#include "qng/montecarlo_verifier.h"
#include "qng/source_sim.h"
#include "qng/threshold_engine.h"
#include "qng/witness.h"

namespace {

using qng::Json;

constexpr int kUsage = 2;
constexpr int kNumerical = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string out;
  std::string format;
};

void emit(const Common& c, const std::string& content) {
  if (c.out.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
  } else {
    qng::atomic_write(c.out, content);
  }
}

qng::ThresholdGrid parse_grid(const std::string& spec) {
  qng::ThresholdGrid g;
  if (spec.empty()) return g;
  const auto a = spec.find(':');
  const auto b = spec.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos) throw UsageError("--grid expects min:max:points");
  try {
    g.r_n1_min = std::stod(spec.substr(0, a));
    g.r_n1_max = std::stod(spec.substr(a + 1, b - a - 1));
    g.points = std::stoi(spec.substr(b + 1));
  } catch (const std::exception&) {
    throw UsageError("--grid expects min:max:points");
  }
  return g;
}

const qng::ThresholdCurve& curve_for(int order, const std::string& curve_path, std::optional<qng::ThresholdCurve>& slot) {
  if (curve_path.empty()) return qng::default_curve(order);
  slot = qng::parse_threshold_table(qng::read_file(curve_path));
  if (slot->order() != order) throw qng::InputError("curve file order differs from the requested order");
  return *slot;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum non-Gaussianity witness for multichannel click detectors"};
  app.require_subcommand(1);

  Common common;
  int order = 0;
  int channels = 0;
  std::string grid_spec;
  std::string in_path;
  std::string curve_path;
  std::uint64_t runs = 100000;
  int modes = 1;
  std::optional<std::uint64_t> seed;
  double step_db = 0.5;
  double max_db = 30.0;
  bool subset_mean = false;

  std::map<const CLI::App*, std::string> default_format;
  auto add_output = [&](CLI::App* sub, const std::string& format) {
    default_format[sub] = format;
    sub->add_option("--out", common.out, "Output file (standard output if omitted)");
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* threshold = app.add_subcommand("threshold", "Compute the exact threshold table for one order");
  threshold->add_option("-n,--order", order, "Criterion order")->required()->check(CLI::Range(1, 64));
  threshold->add_option("--grid", grid_spec, "R_{n+1} grid as min:max:points (default 1e-16:1e-2:200)");
  add_output(threshold, "csv");

  auto* witness = app.add_subcommand("witness", "Classify count records against the threshold");
  witness->add_option("--in", in_path, "Count record JSON or CSV batch")->required()->check(CLI::ExistingFile);
  witness->add_option("--curve", curve_path, "Threshold table (computed if omitted)")->check(CLI::ExistingFile);
  witness->add_flag("--subset-mean", subset_mean, "Average r_n over all n-channel subsets");
  add_output(witness, "json");

  auto* depth = app.add_subcommand("depth", "QNG depth of a model or of a count record");
  depth->add_option("--in", in_path, "Model spec JSON or count record JSON")->required()->check(CLI::ExistingFile);
  depth->add_option("-n,--order", order, "Criterion order (model n if omitted)")->check(CLI::Range(1, 64));
  depth->add_option("-N,--channels", channels, "Detector channels (order+1 if omitted)")->check(CLI::Range(2, 64));
  depth->add_option("--curve", curve_path, "Threshold table (computed if omitted)")->check(CLI::ExistingFile);
  add_output(depth, "json");

  auto* simulate = app.add_subcommand("simulate", "Event-level simulation of a model");
  simulate->add_option("--in", in_path, "Model spec JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("--seed", seed, "Seed (model seed if omitted)");
  add_output(simulate, "json");

  auto* verify = app.add_subcommand("verify", "Monte-Carlo check of the threshold against random Gaussian states");
  verify->add_option("-n,--order", order, "Criterion order")->required()->check(CLI::Range(1, 64));
  verify->add_option("--modes", modes, "Gaussian modes per sample")->check(CLI::Range(1, 16));
  verify->add_option("--runs", runs, "Number of samples")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "Seed");
  add_output(verify, "json");

  auto* path = app.add_subcommand("path", "Click rates along an attenuation path");
  path->add_option("--in", in_path, "Model spec JSON")->required()->check(CLI::ExistingFile);
  path->add_option("-n,--order", order, "Criterion order (model n if omitted)")->check(CLI::Range(1, 64));
  path->add_option("-N,--channels", channels, "Detector channels (order+1 if omitted)")->check(CLI::Range(2, 64));
  path->add_option("--step-db", step_db, "Attenuation step in dB")->check(CLI::PositiveNumber);
  path->add_option("--max-db", max_db, "Largest attenuation in dB")->check(CLI::NonNegativeNumber);
  add_output(path, "csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  for (auto* sub : app.get_subcommands()) {
    if (common.format.empty()) common.format = default_format[sub];
  }

  try {
    if (*threshold) {
      const qng::ThresholdGrid grid = parse_grid(grid_spec);
      const Json config{{"n", order}, {"grid", {{"min", grid.r_n1_min}, {"max", grid.r_n1_max}, {"points", grid.points}}}};
      qng::SolverOptions opt;
      Json meta = qng::make_metadata("threshold", config);
      meta["solver"] = {{"slices", opt.slices}, {"scan_points", opt.scan_points}, {"t_min", opt.t_min},
                        {"variance_floor", opt.variance_floor}, {"root_tolerance", "toms748, 50 bits"}};
      const qng::ThresholdCurve curve = qng::threshold_exact(order, grid, opt);
      emit(common, common.format == "json" ? qng::threshold_table_json(curve, meta).dump(2)
                                           : qng::threshold_table_csv(curve, meta));
    } else if (*witness) {
      const auto recs = qng::parse_count_records(qng::read_file(in_path));
      std::vector<qng::Verdict> verdicts;
      std::optional<qng::ThresholdCurve> slot;
      for (const auto& r : recs) {
        const auto& curve = curve_for(r.order, curve_path, slot);
        verdicts.push_back(qng::classify(r, curve, subset_mean ? qng::SubsetPolicy::mean : qng::SubsetPolicy::designated));
      }
      if (common.format == "csv") {
        emit(common, qng::verdicts_csv(recs, verdicts));
      } else {
        const Json meta = qng::make_metadata("witness", {{"in", in_path}, {"curve", curve_path}, {"subset_mean", subset_mean}});
        Json results = Json::array();
        for (size_t i = 0; i < recs.size(); ++i) results.push_back({{"record", qng::to_json(recs[i])}, {"verdict", qng::to_json(verdicts[i])}});
        emit(common, Json{{"metadata", meta}, {"results", results}}.dump(2));
      }
    } else if (*depth) {
      const Json doc = Json::parse(qng::read_file(in_path), nullptr, false);
      if (doc.is_discarded()) throw qng::InputError("depth input is not valid JSON");
      Json out;
      std::optional<qng::ThresholdCurve> slot;
      if (doc.contains("p1")) {
        const qng::ExperimentModel model = qng::experiment_model_from_json(doc);
        const int n = order > 0 ? order : model.order();
        const int N = channels > 0 ? channels : n + 1;
        const auto& curve = curve_for(n, curve_path, slot);
        const qng::Depth d = qng::qng_depth(qng::merged_state(model), n, N, curve);
        out = {{"source", "model"}, {"model", qng::to_json(model)}, {"order", n}, {"channels", N}, {"depth_db", qng::to_json(d)}};
      } else {
        const qng::CountRecord rec = qng::count_record_from_json(doc.contains("record") ? doc.at("record") : doc);
        const auto& curve = curve_for(rec.order, curve_path, slot);
        const qng::Verdict v = qng::classify(rec, curve);
        out = {{"source", "counts"}, {"record", qng::to_json(rec)}, {"verdict", qng::to_json(v)}};
        out["depth_db"] = v.depth ? qng::to_json(*v.depth) : Json("not QNG at source");
      }
      out["metadata"] = qng::make_metadata("depth", {{"in", in_path}, {"order", order}, {"channels", channels}, {"curve", curve_path}});
      emit(common, out.dump(2));
    } else if (*simulate) {
      qng::ExperimentModel model = qng::experiment_model_from_json(Json::parse(qng::read_file(in_path), nullptr, false));
      if (seed) model.seed = *seed;
      for (const auto& w : model.source.warnings()) std::cerr << "warning: " << w << "\n";
      const qng::CountRecord rec = qng::simulate_counts(model, model.seed);
      if (common.format == "csv") {
        emit(common, qng::count_records_csv({rec}));
      } else {
        Json out = qng::to_json(rec);
        out["metadata"] = qng::make_metadata("simulate", qng::to_json(model));
        emit(common, out.dump(2));
      }
    } else if (*verify) {
      const std::uint64_t s = seed.value_or(0);
      std::uint64_t last_pct = 101;
      const qng::McReport report = qng::verify(order, modes, runs, s, [&](std::uint64_t done, std::uint64_t total) {
        const std::uint64_t pct = done * 10 / total * 10;
        if (pct != last_pct) {
          std::cerr << "verify: " << done << "/" << total << "\n";
          last_pct = pct;
        }
      });
      Json out = qng::to_json(report);
      out["metadata"] = qng::make_metadata("verify", {{"n", order}, {"modes", modes}, {"runs", runs}, {"seed", s}});
      emit(common, out.dump(2));
    } else if (*path) {
      const qng::ExperimentModel model = qng::experiment_model_from_json(Json::parse(qng::read_file(in_path), nullptr, false));
      const int n = order > 0 ? order : model.order();
      const int N = channels > 0 ? channels : n + 1;
      const auto points = qng::attenuation_path(qng::merged_state(model), n, N, step_db, max_db);
      const Json meta = qng::make_metadata("path", {{"model", qng::to_json(model)}, {"order", n}, {"channels", N},
                                                    {"step_db", step_db}, {"max_db", max_db}});
      if (common.format == "json") {
        Json rows = Json::array();
        for (const auto& p : points) rows.push_back({{"db", p.db}, {"eta", p.eta}, {"r_n", p.clicks.r_n}, {"r_n1", p.clicks.r_n1}});
        emit(common, Json{{"metadata", meta}, {"points", rows}}.dump(2));
      } else {
        std::string text;
        for (const auto& [k, v] : meta.items()) text += "# " + k + "=" + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
        emit(common, text + qng::path_csv(points));
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const qng::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kUsage;
  } catch (const qng::DomainError& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kUsage;
  } catch (const Json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
  return 0;
}
