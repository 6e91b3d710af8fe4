// Copyright 2026 The magcoloc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// File formats: JSON Lines traces and trajectories, match report JSON and
// the synthetic ground-truth file.

#ifndef MAGCOLOC_IO_HPP_
#define MAGCOLOC_IO_HPP_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "magcoloc/error.hpp"
#include "magcoloc/matching.hpp"
#include "magcoloc/model.hpp"

namespace magcoloc {

using json = nlohmann::json;

namespace detail {

[[noreturn]] inline void bad_line(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::kInvalidInput,
              "line " + std::to_string(line) + ": " + what);
}

inline json parse_line(const std::string& text, std::size_t line) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) bad_line(line, "not a JSON object");
  return j;
}

inline const json& field(const json& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end()) bad_line(line, std::string("missing field '") + key + "'");
  return *it;
}

inline std::int64_t int_field(const json& j, const char* key, std::size_t line) {
  const json& v = field(j, key, line);
  if (!v.is_number_integer()) {
    bad_line(line, std::string("field '") + key + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

inline double number_field(const json& j, const char* key, std::size_t line) {
  const json& v = field(j, key, line);
  if (!v.is_number()) {
    bad_line(line, std::string("field '") + key + "' must be a number");
  }
  return v.get<double>();
}

inline std::string string_field(const json& j, const char* key,
                                std::size_t line) {
  const json& v = field(j, key, line);
  if (!v.is_string()) {
    bad_line(line, std::string("field '") + key + "' must be a string");
  }
  return v.get<std::string>();
}

// Non-blank lines with their 1-based line numbers.
inline std::vector<std::pair<std::size_t, std::string>> read_lines(
    std::istream& in) {
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string text;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    lines.emplace_back(number, std::move(text));
  }
  return lines;
}

}  // namespace detail

// Header {"device_id", "clock_offset_ms"} then one object per sample.
inline void write_trace(std::ostream& out, const Trace& trace) {
  out << json{{"device_id", trace.device_id},
              {"clock_offset_ms", trace.clock_offset_ms}}
             .dump()
      << '\n';
  for (const MagneticSample& s : trace.samples) {
    out << json{{"t_ms", s.t_ms},
                {"mx", s.mx},
                {"my", s.my},
                {"mz", s.mz},
                {"activity", to_string(s.activity)}}
               .dump()
        << '\n';
  }
}

inline Trace read_trace(std::istream& in) {
  const auto lines = detail::read_lines(in);
  if (lines.empty()) throw Error(ErrorKind::kInvalidInput, "empty trace file");
  Trace trace;
  {
    const auto& [number, text] = lines.front();
    const json header = detail::parse_line(text, number);
    trace.device_id = detail::string_field(header, "device_id", number);
    trace.clock_offset_ms = detail::int_field(header, "clock_offset_ms", number);
  }
  trace.samples.reserve(lines.size() - 1);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& [number, text] = lines[k];
    const json j = detail::parse_line(text, number);
    MagneticSample s;
    s.t_ms = detail::int_field(j, "t_ms", number);
    s.mx = detail::number_field(j, "mx", number);
    s.my = detail::number_field(j, "my", number);
    s.mz = detail::number_field(j, "mz", number);
    try {
      s.activity = parse_activity(detail::string_field(j, "activity", number));
    } catch (const Error& e) {
      detail::bad_line(number, e.what());
    }
    trace.samples.push_back(s);
  }
  validate(trace);
  return trace;
}

// Header {"trace_id", "start_ms", "sample_rate_hz"} then one {"v"} per
// sample.
inline void write_trajectory(std::ostream& out, const Trajectory& traj) {
  out << json{{"trace_id", traj.trace_id()},
              {"start_ms", traj.start_ms()},
              {"sample_rate_hz", traj.sample_rate_hz()}}
             .dump()
      << '\n';
  for (double v : traj.values()) out << json{{"v", v}}.dump() << '\n';
}

inline Trajectory read_trajectory(std::istream& in) {
  const auto lines = detail::read_lines(in);
  if (lines.empty()) {
    throw Error(ErrorKind::kInvalidInput, "empty trajectory file");
  }
  const auto& [header_line, header_text] = lines.front();
  const json header = detail::parse_line(header_text, header_line);
  std::string id = detail::string_field(header, "trace_id", header_line);
  const std::int64_t start = detail::int_field(header, "start_ms", header_line);
  const double rate = detail::number_field(header, "sample_rate_hz", header_line);
  std::vector<double> values;
  values.reserve(lines.size() - 1);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& [number, text] = lines[k];
    values.push_back(detail::number_field(detail::parse_line(text, number), "v",
                                          number));
  }
  try {
    return Trajectory(std::move(id), start, rate, std::move(values));
  } catch (const Error& e) {
    throw Error(ErrorKind::kInvalidInput, e.what());
  }
}

// Everything one matching run produces.
struct MatchRun {
  std::vector<PairDecision> pairs;
  Thresholds thresholds;
  MatchConfig config;

  bool operator==(const MatchRun&) const = default;
};

inline json to_json(const Thresholds& t) {
  return {{"max_temporal_offset_s", t.max_temporal_offset_s},
          {"max_compression_rate", t.max_compression_rate},
          {"max_ddtw_score", t.max_ddtw_score}};
}

// The worker count and path retention do not affect results and are left
// out so reports stay byte-identical across them.
inline json to_json(const MatchConfig& c) {
  return {{"decimation_factor", c.decimation_factor},
          {"band", c.band ? json(*c.band) : json(nullptr)},
          {"score_space", to_string(c.score_space)},
          {"ignore_timestamps", c.ignore_timestamps},
          {"prefilter", c.prefilter}};
}

inline json to_json(const PairDecision& d) {
  const MatchReport& r = d.report;
  json reasons = json::array();
  for (RejectionReason reason : d.rejection_reasons) {
    reasons.push_back(to_string(reason));
  }
  json j{{"a", r.trajectory_a},
         {"b", r.trajectory_b},
         {"temporal_offset_s", r.temporal_offset_s},
         {"compression_rate", r.compression_rate},
         {"ddtw_score", r.ddtw_score ? json(*r.ddtw_score) : json(nullptr)},
         {"accepted", r.accepted},
         {"rejection_reasons", std::move(reasons)}};
  if (r.warp_path) {
    json path = json::array();
    for (const IndexPair& p : r.warp_path->pairs()) path.push_back({p.i, p.j});
    j["warp_path"] = {{"rows", r.warp_path->rows()},
                      {"cols", r.warp_path->cols()},
                      {"pairs", std::move(path)}};
  }
  return j;
}

inline json to_json(const MatchRun& run) {
  json pairs = json::array();
  for (const PairDecision& d : run.pairs) pairs.push_back(to_json(d));
  return {{"pairs", std::move(pairs)},
          {"thresholds", to_json(run.thresholds)},
          {"config", to_json(run.config)}};
}

inline void write_match_report(std::ostream& out, const MatchRun& run) {
  out << to_json(run).dump(2) << '\n';
}

// Verdicts are not stored; they are recomputed from the numbers and the
// recorded thresholds.
inline MatchRun read_match_report(std::istream& in) {
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorKind::kInvalidInput, "match report is not a JSON object");
  }
  try {
    MatchRun run;
    const json& t = doc.at("thresholds");
    run.thresholds.max_temporal_offset_s = t.at("max_temporal_offset_s").get<double>();
    run.thresholds.max_compression_rate = t.at("max_compression_rate").get<double>();
    run.thresholds.max_ddtw_score = t.at("max_ddtw_score").get<double>();
    run.thresholds.validate();

    const json& c = doc.at("config");
    run.config.decimation_factor = c.at("decimation_factor").get<std::size_t>();
    if (!c.at("band").is_null()) run.config.band = c.at("band").get<std::size_t>();
    run.config.score_space = parse_cost_space(c.at("score_space").get<std::string>());
    run.config.ignore_timestamps = c.at("ignore_timestamps").get<bool>();
    run.config.prefilter = c.at("prefilter").get<bool>();
    run.config.validate();

    for (const json& p : doc.at("pairs")) {
      MatchReport r;
      r.trajectory_a = p.at("a").get<std::string>();
      r.trajectory_b = p.at("b").get<std::string>();
      r.temporal_offset_s = p.at("temporal_offset_s").get<double>();
      r.compression_rate = p.at("compression_rate").get<double>();
      if (!p.at("ddtw_score").is_null()) {
        r.ddtw_score = p.at("ddtw_score").get<double>();
      }
      if (p.contains("warp_path")) {
        const json& w = p.at("warp_path");
        std::vector<IndexPair> pairs;
        for (const json& ij : w.at("pairs")) {
          pairs.push_back({ij.at(0).get<std::size_t>(), ij.at(1).get<std::size_t>()});
        }
        r.warp_path.emplace(std::move(pairs), w.at("rows").get<std::size_t>(),
                            w.at("cols").get<std::size_t>());
      }
      PairDecision d =
          detail::decide(std::move(r), run.thresholds, run.config.ignore_timestamps);
      std::vector<RejectionReason> stored;
      for (const json& reason : p.at("rejection_reasons")) {
        stored.push_back(parse_rejection_reason(reason.get<std::string>()));
      }
      if (stored != d.rejection_reasons ||
          p.at("accepted").get<bool>() != d.report.accepted) {
        throw Error(ErrorKind::kInvalidInput,
                    "pair " + d.report.trajectory_a + "/" + d.report.trajectory_b +
                        " disagrees with the recorded thresholds");
      }
      run.pairs.push_back(std::move(d));
    }
    return run;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidInput,
                std::string("malformed match report: ") + e.what());
  }
}

using IdPairs = std::vector<std::pair<std::string, std::string>>;

inline void write_ground_truth(std::ostream& out, const IdPairs& pairs) {
  json list = json::array();
  for (const auto& [a, b] : pairs) list.push_back({a, b});
  out << json{{"coloc_pairs", std::move(list)}}.dump(2) << '\n';
}

inline IdPairs read_ground_truth(std::istream& in) {
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorKind::kInvalidInput, "ground truth is not a JSON object");
  }
  try {
    IdPairs out;
    for (const json& p : doc.at("coloc_pairs")) {
      out.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidInput,
                std::string("malformed ground truth: ") + e.what());
  }
}

}  // namespace magcoloc

#endif  // MAGCOLOC_IO_HPP_
