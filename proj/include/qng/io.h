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

#ifndef QNG_IO_H
#define QNG_IO_H

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "qng/montecarlo_verifier.h"
#include "qng/source_sim.h"
#include "qng/threshold_engine.h"
#include "qng/witness.h"

namespace qng {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::ordered_json;

/// Tool name, version and the configuration that produced an output, with a
/// stable 64-bit FNV-1a hash of the configuration.
Json make_metadata(const std::string& command, const Json& config);
std::string config_hash(const Json& config);

/// Writes via a temporary file in the same directory and renames it in place.
void atomic_write(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

/// Finite values as numbers, infinities as "inf"/"-inf", NaN as null.
Json json_number(double x);
double number_from_json(const Json& j);

// Threshold tables. CSV starts with '#'-prefixed metadata lines, then the
// header n,r_n1,r_n_max,beta,V,residual.
std::string threshold_table_csv(const ThresholdCurve& curve, const Json& metadata);
Json threshold_table_json(const ThresholdCurve& curve, const Json& metadata);
/// Reads either format (JSON if the first non-space character is '{').
ThresholdCurve parse_threshold_table(const std::string& text);

// Count records: JSON object {order, trials, count_n, count_n1, subsets?},
// or a JSON array of them, or CSV with header
// order,trials,count_n,count_n1[,subsets] where subsets is ';'-separated.
Json to_json(const CountRecord& rec);
CountRecord count_record_from_json(const Json& j);
std::vector<CountRecord> parse_count_records(const std::string& text);
std::string count_records_csv(const std::vector<CountRecord>& recs);

Json to_json(const IntervalEstimate& e);
Json to_json(const Depth& d);
Json to_json(const Verdict& v);
std::string verdicts_csv(const std::vector<CountRecord>& recs, const std::vector<Verdict>& verdicts);

Json to_json(const McReport& r);

// Model spec: {p1, p2, p3?, efficiency, n, trials, seed, channels?}.
ExperimentModel experiment_model_from_json(const Json& j);
Json to_json(const ExperimentModel& m);

std::string path_csv(const std::vector<PathPoint>& path);
std::string suite_csv(const std::vector<SuiteEntry>& suite);

}  // namespace qng

#endif  // QNG_IO_H
