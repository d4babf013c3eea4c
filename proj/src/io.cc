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

#include "qng/io.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "qng/errors.h"

namespace qng {
namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& s) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (trim(s.substr(pos)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw InputError("not a number: '" + s + "'");
}

std::uint64_t to_count(const std::string& s) {
  const std::string t = trim(s);
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) throw InputError("not a count: '" + s + "'");
  return std::stoull(t);
}

bool looks_like_json(const std::string& text) {
  const auto p = text.find_first_not_of(" \t\r\n");
  return p != std::string::npos && (text[p] == '{' || text[p] == '[');
}

// Data lines of a CSV text, skipping '#' comments and blank lines.
std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    out.push_back(line);
  }
  return out;
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

std::string regime_name(ThresholdRegime r) { return r == ThresholdRegime::asymptotic ? "asymptotic" : "interpolated"; }

}  // namespace

std::string config_hash(const Json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

Json make_metadata(const std::string& command, const Json& config) {
  return Json{{"tool", "qng"}, {"version", kVersion}, {"command", command}, {"config", config},
              {"config_hash", config_hash(config)}};
}

void atomic_write(const fs::path& path, const std::string& content) {
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw InputError("cannot write " + tmp.string());
    os << content;
    os.flush();
    if (!os) throw InputError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw InputError("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot read " + path.string());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

Json json_number(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const Json& j) {
  if (j.is_null()) return NAN;
  if (j.is_string()) {
    if (j == "inf") return INFINITY;
    if (j == "-inf") return -INFINITY;
    throw InputError("unexpected string in numeric field");
  }
  if (!j.is_number()) throw InputError("expected a number");
  return j.get<double>();
}

std::string threshold_table_csv(const ThresholdCurve& curve, const Json& metadata) {
  std::ostringstream os;
  for (const auto& [k, v] : metadata.items()) os << "# " << k << "=" << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  os << "n,r_n1,r_n_max,beta,V,residual\n";
  for (const auto& s : curve.samples()) {
    os << curve.order() << "," << fmt(s.r_n1) << "," << fmt(s.r_n_max) << "," << fmt(s.beta) << "," << fmt(s.variance)
       << "," << fmt(s.residual) << "\n";
  }
  return os.str();
}

Json threshold_table_json(const ThresholdCurve& curve, const Json& metadata) {
  Json samples = Json::array();
  for (const auto& s : curve.samples()) {
    samples.push_back({{"r_n1", s.r_n1}, {"r_n_max", s.r_n_max}, {"beta", s.beta}, {"V", s.variance},
                       {"residual", s.residual}});
  }
  return Json{{"metadata", metadata}, {"n", curve.order()}, {"samples", samples}};
}

ThresholdCurve parse_threshold_table(const std::string& text) {
  std::vector<ThresholdSample> samples;
  int order = 0;
  if (looks_like_json(text)) {
    const Json j = parse_json(text);
    try {
      order = j.at("n").get<int>();
      for (const auto& s : j.at("samples")) {
        samples.push_back({s.at("r_n1").get<double>(), s.at("r_n_max").get<double>(), s.at("beta").get<double>(),
                           s.at("V").get<double>(), number_from_json(s.at("residual"))});
      }
    } catch (const Json::exception& e) {
      throw InputError(std::string("bad threshold table: ") + e.what());
    }
  } else {
    const auto lines = csv_lines(text);
    if (lines.empty() || lines[0] != "n,r_n1,r_n_max,beta,V,residual") throw InputError("bad threshold table header");
    for (size_t i = 1; i < lines.size(); ++i) {
      const auto c = split(lines[i], ',');
      if (c.size() != 6) throw InputError("threshold table row " + std::to_string(i) + " needs 6 fields");
      const int n = static_cast<int>(to_count(c[0]));
      if (order != 0 && n != order) throw InputError("threshold table mixes orders");
      order = n;
      samples.push_back({to_double(c[1]), to_double(c[2]), to_double(c[3]), to_double(c[4]), to_double(c[5])});
    }
  }
  return ThresholdCurve(order, std::move(samples));
}

Json to_json(const CountRecord& rec) {
  Json j{{"order", rec.order}, {"trials", rec.trials}, {"count_n", rec.count_n}, {"count_n1", rec.count_n1}};
  if (!rec.subsets.empty()) j["subsets"] = rec.subsets;
  return j;
}

CountRecord count_record_from_json(const Json& j) {
  CountRecord rec;
  try {
    rec.order = j.at("order").get<int>();
    rec.trials = j.at("trials").get<std::uint64_t>();
    rec.count_n = j.at("count_n").get<std::uint64_t>();
    rec.count_n1 = j.at("count_n1").get<std::uint64_t>();
    if (j.contains("subsets")) rec.subsets = j.at("subsets").get<std::vector<std::uint64_t>>();
  } catch (const Json::exception& e) {
    throw InputError(std::string("bad count record: ") + e.what());
  }
  rec.validate();
  return rec;
}

std::vector<CountRecord> parse_count_records(const std::string& text) {
  std::vector<CountRecord> out;
  if (looks_like_json(text)) {
    const Json j = parse_json(text);
    if (j.is_array()) {
      for (const auto& r : j) out.push_back(count_record_from_json(r));
    } else {
      out.push_back(count_record_from_json(j.contains("record") ? j.at("record") : j));
    }
    return out;
  }
  const auto lines = csv_lines(text);
  if (lines.empty()) throw InputError("empty count file");
  const auto header = split(lines[0], ',');
  const bool with_subsets = header.size() == 5 && header[4] == "subsets";
  if (!(header.size() == 4 || with_subsets) || header[0] != "order" || header[1] != "trials" || header[2] != "count_n" ||
      header[3] != "count_n1") {
    throw InputError("count CSV header must be order,trials,count_n,count_n1[,subsets]");
  }
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto c = split(lines[i], ',');
    if (c.size() != header.size()) throw InputError("count CSV row " + std::to_string(i) + " has wrong field count");
    CountRecord rec;
    rec.order = static_cast<int>(to_count(c[0]));
    rec.trials = to_count(c[1]);
    rec.count_n = to_count(c[2]);
    rec.count_n1 = to_count(c[3]);
    if (with_subsets && !trim(c[4]).empty()) {
      for (const auto& s : split(c[4], ';')) rec.subsets.push_back(to_count(s));
    }
    rec.validate();
    out.push_back(std::move(rec));
  }
  return out;
}

std::string count_records_csv(const std::vector<CountRecord>& recs) {
  std::ostringstream os;
  os << "order,trials,count_n,count_n1,subsets\n";
  for (const auto& r : recs) {
    os << r.order << "," << r.trials << "," << r.count_n << "," << r.count_n1 << ",";
    for (size_t i = 0; i < r.subsets.size(); ++i) os << (i ? ";" : "") << r.subsets[i];
    os << "\n";
  }
  return os.str();
}

Json to_json(const IntervalEstimate& e) { return Json{{"point", e.point}, {"lo", e.lo}, {"hi", e.hi}}; }

Json to_json(const Depth& d) {
  switch (d.kind) {
    case DepthKind::unbounded: return "unbounded";
    case DepthKind::not_qng_at_source: return "not QNG at source";
    case DepthKind::finite: break;
  }
  return d.db;
}

Json to_json(const Verdict& v) {
  Json j{{"state", to_string(v.state)},
         {"r_n", to_json(v.rates.r_n)},
         {"r_n1", to_json(v.rates.r_n1)},
         {"subset_policy", v.rates.policy == SubsetPolicy::mean ? "mean" : "designated"},
         {"effective_trials", v.rates.effective_trials},
         {"d_n", json_number(v.d_n)},
         {"d_n1", json_number(v.d_n1)},
         {"regime", regime_name(v.regime)}};
  j["depth_db"] = v.depth ? to_json(*v.depth) : Json(nullptr);
  j["depth_db_bracket"] = v.depth_lo && v.depth_hi ? Json::array({to_json(*v.depth_lo), to_json(*v.depth_hi)}) : Json(nullptr);
  return j;
}

std::string verdicts_csv(const std::vector<CountRecord>& recs, const std::vector<Verdict>& verdicts) {
  std::ostringstream os;
  os << "order,trials,count_n,count_n1,state,r_n,r_n_lo,r_n_hi,r_n1,r_n1_lo,r_n1_hi,d_n,d_n1,regime,depth_db,depth_lo,"
        "depth_hi\n";
  auto depth = [](const std::optional<Depth>& d) { return d ? to_string(*d) : std::string(); };
  for (size_t i = 0; i < verdicts.size(); ++i) {
    const auto& r = recs.at(i);
    const auto& v = verdicts[i];
    os << r.order << "," << r.trials << "," << r.count_n << "," << r.count_n1 << "," << to_string(v.state) << ","
       << fmt(v.rates.r_n.point) << "," << fmt(v.rates.r_n.lo) << "," << fmt(v.rates.r_n.hi) << ","
       << fmt(v.rates.r_n1.point) << "," << fmt(v.rates.r_n1.lo) << "," << fmt(v.rates.r_n1.hi) << "," << fmt(v.d_n)
       << "," << fmt(v.d_n1) << "," << regime_name(v.regime) << "," << depth(v.depth) << "," << depth(v.depth_lo)
       << "," << depth(v.depth_hi) << "\n";
  }
  return os.str();
}

Json to_json(const McReport& r) {
  Json closest = Json::array();
  for (const auto& s : r.closest_points) {
    Json modes = Json::array();
    for (const auto& m : s.modes) modes.push_back({{"beta", m.beta}, {"V", m.variance}, {"phi", m.phi}});
    closest.push_back({{"index", s.index},
                       {"modes", modes},
                       {"r_n", s.r_n},
                       {"r_n1", s.r_n1},
                       {"threshold", s.threshold},
                       {"log_gap", json_number(s.log_gap)},
                       {"regime", regime_name(s.regime)}});
  }
  return Json{{"order", r.order},
              {"modes", r.modes},
              {"runs", r.runs},
              {"seed", r.seed},
              {"violations", r.violations},
              {"tolerance", r.tolerance},
              {"asymptotic_samples", r.asymptotic_samples},
              {"out_of_range", r.out_of_range},
              {"min_signed_log_distance", json_number(r.min_signed_log_distance)},
              {"beyond_paper", r.beyond_paper},
              {"closest_points", closest}};
}

ExperimentModel experiment_model_from_json(const Json& j) {
  ExperimentModel m;
  try {
    m.source.p1 = j.at("p1").get<double>();
    m.source.p2 = j.value("p2", 0.0);
    m.source.p3 = j.value("p3", 0.0);
    m.merge_count = j.at("n").get<int>();
    m.detector.efficiency = j.value("efficiency", 1.0);
    m.detector.channels = j.value("channels", m.merge_count + 1);
    m.trials = j.value("trials", std::uint64_t{1000000});
    m.seed = j.value("seed", std::uint64_t{0});
  } catch (const Json::exception& e) {
    throw InputError(std::string("bad model spec: ") + e.what());
  }
  try {
    m.validate();
  } catch (const DomainError& e) {
    throw InputError(std::string("bad model spec: ") + e.what());
  }
  return m;
}

Json to_json(const ExperimentModel& m) {
  Json j{{"p1", m.source.p1}, {"p2", m.source.p2}};
  if (m.source.p3 != 0.0) j["p3"] = m.source.p3;
  j["efficiency"] = m.detector.efficiency;
  j["n"] = m.merge_count;
  j["channels"] = m.detector.channels;
  j["trials"] = m.trials;
  j["seed"] = m.seed;
  return j;
}

std::string path_csv(const std::vector<PathPoint>& path) {
  std::ostringstream os;
  os << "db,eta,r_n,r_n1\n";
  for (const auto& p : path) os << fmt(p.db) << "," << fmt(p.eta) << "," << fmt(p.clicks.r_n) << "," << fmt(p.clicks.r_n1) << "\n";
  return os.str();
}

std::string suite_csv(const std::vector<SuiteEntry>& suite) {
  std::ostringstream os;
  os << "state_n,order,r_n,r_n1,count_n,count_n1,state,d_n,d_n1,depth_db\n";
  for (const auto& e : suite) {
    os << e.state_n << "," << e.order << "," << fmt(e.clicks.r_n) << "," << fmt(e.clicks.r_n1) << ","
       << e.expected_counts.count_n << "," << e.expected_counts.count_n1 << "," << to_string(e.verdict.state) << ","
       << fmt(e.verdict.d_n) << "," << fmt(e.verdict.d_n1) << "," << to_string(e.depth) << "\n";
  }
  return os.str();
}

}  // namespace qng
