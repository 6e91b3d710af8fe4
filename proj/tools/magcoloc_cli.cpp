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

// Command-line front end: gen -> segment -> match -> report.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "magcoloc/magcoloc.hpp"

namespace fs = std::filesystem;
using magcoloc::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

constexpr const char* kTraceSuffix = ".trace.jsonl";
constexpr const char* kTrajectorySuffix = ".traj.jsonl";

// Input problems (missing files, malformed records) map to exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw InputError("cannot create output directory " + dir.string());
  }
}

template <class Fn>
auto with_file_context(const fs::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const magcoloc::Error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

magcoloc::Trace load_trace(const fs::path& path) {
  auto in = open_input(path);
  return with_file_context(path, [&] { return magcoloc::read_trace(in); });
}

magcoloc::Trajectory load_trajectory(const fs::path& path) {
  auto in = open_input(path);
  return with_file_context(path, [&] { return magcoloc::read_trajectory(in); });
}

// A directory contributes every *.traj.jsonl inside it, in name order.
std::vector<fs::path> trajectory_files(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const std::string& input : inputs) {
    const fs::path p(input);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() &&
            ends_with(entry.path().filename().string(), kTrajectorySuffix)) {
          found.push_back(entry.path());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(p)) {
      files.push_back(p);
    } else {
      throw InputError("no such file or directory: " + input);
    }
  }
  return files;
}

std::vector<magcoloc::Trajectory> load_trajectory_dir(const std::string& dir) {
  if (!fs::is_directory(dir)) throw InputError("not a directory: " + dir);
  std::vector<magcoloc::Trajectory> out;
  for (const fs::path& f : trajectory_files({dir})) {
    out.push_back(load_trajectory(f));
  }
  if (out.empty()) throw InputError("no trajectory files in " + dir);
  return out;
}

// Records what a command did next to its outputs.
class Manifest {
 public:
  explicit Manifest(std::string command)
      : command_(std::move(command)), start_(std::chrono::steady_clock::now()) {}

  void config(json c) { config_ = std::move(c); }
  void input(const fs::path& p) { inputs_.push_back(p.string()); }
  void output(const fs::path& p) { outputs_.push_back(p.string()); }

  void write(const fs::path& path) const {
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start_)
                               .count();
    json doc{{"command", command_},
             {"config", config_},
             {"inputs", inputs_},
             {"outputs", outputs_},
             {"tool_version", MAGCOLOC_VERSION},
             {"wall_clock_s", seconds}};
    auto out = open_output(path);
    out << doc.dump(2) << '\n';
  }

 private:
  std::string command_;
  std::chrono::steady_clock::time_point start_;
  json config_ = json::object();
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
};

// ---------------------------------------------------------------- gen

struct GenOptions {
  std::size_t users = 2;
  std::size_t journeys = 3;
  double coloc = 0.5;
  std::uint64_t seed = 1;
  std::string vehicle = "overground";
  double min_leg_s = 60.0;
  double max_leg_s = 540.0;
  std::string out;
};

int run_gen(const GenOptions& o) {
  Manifest manifest("gen");
  magcoloc::CorpusOptions options;
  options.vehicle_kind = magcoloc::parse_vehicle_kind(o.vehicle);
  options.min_leg_s = o.min_leg_s;
  options.max_leg_s = o.max_leg_s;
  const magcoloc::Corpus corpus =
      magcoloc::generate_corpus(o.users, o.journeys, o.coloc, o.seed, options);

  ensure_dir(o.out);
  for (const magcoloc::Trace& trace : corpus.traces) {
    const fs::path path = fs::path(o.out) / (trace.device_id + kTraceSuffix);
    auto out = open_output(path);
    magcoloc::write_trace(out, trace);
    manifest.output(path);
  }
  const fs::path truth = fs::path(o.out) / "ground_truth.json";
  {
    auto out = open_output(truth);
    magcoloc::write_ground_truth(out, corpus.coloc_pairs);
  }
  manifest.output(truth);
  manifest.config({{"users", o.users},
                   {"journeys", o.journeys},
                   {"coloc", o.coloc},
                   {"seed", o.seed},
                   {"vehicle", o.vehicle},
                   {"min_leg_s", o.min_leg_s},
                   {"max_leg_s", o.max_leg_s}});
  manifest.write(fs::path(o.out) / "manifest.json");
  return kExitOk;
}

// ------------------------------------------------------------ segment

struct SegmentOptions {
  std::vector<std::string> traces;
  std::string out;
  std::size_t window = magcoloc::kDefaultSmoothingWindow;
  double min_duration_s = 60.0;
  double debounce_s = 10.0;
};

int run_segment(const SegmentOptions& o) {
  Manifest manifest("segment");
  magcoloc::SegmentationConfig config;
  config.smoothing_window = o.window;
  config.min_vehicle_duration_s = o.min_duration_s;
  config.activity_debounce_s = o.debounce_s;
  config.validate();

  ensure_dir(o.out);
  for (const std::string& file : o.traces) {
    const magcoloc::Trace trace = load_trace(file);
    manifest.input(file);
    const auto trajectories = with_file_context(
        file, [&] { return magcoloc::segment(trace, config); });
    for (const magcoloc::Trajectory& t : trajectories) {
      const fs::path path = fs::path(o.out) / (t.trace_id() + kTrajectorySuffix);
      auto out = open_output(path);
      magcoloc::write_trajectory(out, t);
      manifest.output(path);
    }
  }
  manifest.config({{"window", o.window},
                   {"min_vehicle_duration_s", o.min_duration_s},
                   {"activity_debounce_s", o.debounce_s}});
  manifest.write(fs::path(o.out) / "manifest.json");
  return kExitOk;
}

// -------------------------------------------------------------- match

struct MatchOptions {
  std::string dir_a;
  std::string dir_b;
  std::string out;
  std::vector<double> thresholds;
  std::size_t decimate = magcoloc::kDefaultDecimationFactor;
  std::optional<std::size_t> band;
  std::string score_space = "derivative";
  bool ignore_timestamps = false;
  bool emit_paths = false;
  bool no_prefilter = false;
  std::size_t workers = 1;
};

magcoloc::Thresholds thresholds_from(const std::vector<double>& values) {
  magcoloc::Thresholds t;
  if (!values.empty()) {
    if (values.size() != 3) {
      throw magcoloc::Error(magcoloc::ErrorKind::kInvalidArgument,
                            "--thresholds expects T,C,S");
    }
    t.max_temporal_offset_s = values[0];
    t.max_compression_rate = values[1];
    t.max_ddtw_score = values[2];
  }
  t.validate();
  return t;
}

int run_match(const MatchOptions& o) {
  Manifest manifest("match");
  magcoloc::MatchRun run;
  run.thresholds = thresholds_from(o.thresholds);
  run.config.decimation_factor = o.decimate;
  run.config.band = o.band;
  run.config.score_space = magcoloc::parse_cost_space(o.score_space);
  run.config.ignore_timestamps = o.ignore_timestamps;
  run.config.prefilter = !o.no_prefilter;
  run.config.keep_paths = o.emit_paths;
  run.config.workers = o.workers;
  run.config.validate();

  const auto a = load_trajectory_dir(o.dir_a);
  const auto b = load_trajectory_dir(o.dir_b);
  manifest.input(o.dir_a);
  manifest.input(o.dir_b);
  run.pairs = magcoloc::match_users(a, b, run.thresholds, run.config);

  const fs::path out_path(o.out);
  if (out_path.has_parent_path()) ensure_dir(out_path.parent_path());
  {
    auto out = open_output(out_path);
    magcoloc::write_match_report(out, run);
  }
  manifest.output(out_path);
  json config = magcoloc::to_json(run.config);
  config["thresholds"] = magcoloc::to_json(run.thresholds);
  config["emit_paths"] = o.emit_paths;
  config["workers"] = o.workers;
  manifest.config(std::move(config));
  manifest.write(fs::path(o.out + ".manifest.json"));

  std::size_t accepted = 0;
  for (const auto& d : run.pairs) accepted += d.report.accepted ? 1 : 0;
  std::clog << "evaluated " << run.pairs.size() << " pairs, accepted "
            << accepted << '\n';
  return kExitOk;
}

// ------------------------------------------------------------- report

struct ReportOptions {
  std::string report;
  std::vector<std::string> trajectories;
  std::vector<std::string> traces;
  std::string out;
  std::size_t max_lag = 100;
  std::size_t window = magcoloc::kDefaultSmoothingWindow;
};

std::string csv_number(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

int run_report(const ReportOptions& o) {
  Manifest manifest("report");
  const magcoloc::MatchRun run = [&] {
    auto in = open_input(o.report);
    return with_file_context(o.report,
                             [&] { return magcoloc::read_match_report(in); });
  }();
  manifest.input(o.report);

  std::map<std::string, magcoloc::Trajectory> by_id;
  for (const fs::path& f : trajectory_files(o.trajectories)) {
    magcoloc::Trajectory t = load_trajectory(f);
    manifest.input(f);
    const std::string id = t.trace_id();
    by_id.insert_or_assign(id, std::move(t));
  }
  for (const auto& d : run.pairs) {
    for (const std::string& id : {d.report.trajectory_a, d.report.trajectory_b}) {
      if (!by_id.count(id)) throw InputError("dangling trajectory id " + id);
    }
  }
  ensure_dir(o.out);
  const fs::path dir(o.out);

  // Score / compression scatter with the threshold lines.
  {
    const fs::path path = dir / "scatter.csv";
    auto out = open_output(path);
    out << "a,b,temporal_offset_s,compression_rate,ddtw_score,accepted,"
           "max_temporal_offset_s,max_compression_rate,max_ddtw_score\n";
    for (const auto& d : run.pairs) {
      const auto& r = d.report;
      out << r.trajectory_a << ',' << r.trajectory_b << ','
          << csv_number(r.temporal_offset_s) << ','
          << csv_number(r.compression_rate) << ','
          << (r.ddtw_score ? csv_number(*r.ddtw_score) : std::string()) << ','
          << (r.accepted ? 1 : 0) << ','
          << csv_number(run.thresholds.max_temporal_offset_s) << ','
          << csv_number(run.thresholds.max_compression_rate) << ','
          << csv_number(run.thresholds.max_ddtw_score) << '\n';
    }
    manifest.output(path);
  }

  // Autocorrelation per trajectory; flat series are flagged instead.
  {
    const fs::path acf_path = dir / "autocorrelation.csv";
    const fs::path flag_path = dir / "degenerate.csv";
    auto acf = open_output(acf_path);
    auto flags = open_output(flag_path);
    acf << "trajectory,lag,coefficient\n";
    flags << "trajectory,flag\n";
    for (const auto& [id, traj] : by_id) {
      const std::size_t lag = std::min(o.max_lag, traj.size() - 2);
      if (lag < 1) continue;
      try {
        const auto series = magcoloc::autocorrelation(traj.values(), lag);
        for (std::size_t k = 0; k < series.lags.size(); ++k) {
          acf << id << ',' << series.lags[k] << ','
              << csv_number(series.coefficients[k]) << '\n';
        }
      } catch (const magcoloc::Error& e) {
        if (e.kind() != magcoloc::ErrorKind::kDegenerateSeries) throw;
        flags << id << ",degenerate: zero variance\n";
      }
    }
    manifest.output(acf_path);
    manifest.output(flag_path);
  }

  // Aligned overlays of accepted pairs, on the decimated series.
  {
    const fs::path path = dir / "alignment.csv";
    auto out = open_output(path);
    out << "a,b,step,i,j,value_a,value_b\n";
    for (const auto& d : run.pairs) {
      if (!d.report.accepted) continue;
      const auto a = magcoloc::decimate(by_id.at(d.report.trajectory_a),
                                        run.config.decimation_factor);
      const auto b = magcoloc::decimate(by_id.at(d.report.trajectory_b),
                                        run.config.decimation_factor);
      std::optional<std::size_t> band = run.config.band;
      if (band) {
        band = std::max(*band, a.size() > b.size() ? a.size() - b.size()
                                                   : b.size() - a.size());
      }
      const auto result = magcoloc::ddtw(a.values(), b.values(), band);
      std::size_t step = 0;
      for (const auto& p : result.path.pairs()) {
        out << d.report.trajectory_a << ',' << d.report.trajectory_b << ','
            << step++ << ',' << p.i << ',' << p.j << ','
            << csv_number(a.values()[p.i]) << ','
            << csv_number(b.values()[p.j]) << '\n';
      }
    }
    manifest.output(path);
  }

  // Raw versus smoothed magnitude, when the source traces are given.
  if (!o.traces.empty()) {
    const fs::path path = dir / "magnitude.csv";
    auto out = open_output(path);
    out << "device,t_ms,raw,smoothed\n";
    for (const std::string& file : o.traces) {
      const magcoloc::Trace trace =
          magcoloc::apply_clock_offset(load_trace(file));
      manifest.input(file);
      if (trace.samples.size() <= o.window) continue;
      std::vector<double> raw;
      raw.reserve(trace.samples.size());
      for (const auto& s : trace.samples) raw.push_back(magcoloc::magnitude(s));
      const std::vector<double> smoothed = magcoloc::smooth(raw, o.window);
      for (std::size_t k = 0; k < smoothed.size(); ++k) {
        const std::size_t i = k + o.window;
        out << trace.device_id << ',' << trace.samples[i].t_ms << ','
            << csv_number(raw[i]) << ',' << csv_number(smoothed[k]) << '\n';
      }
    }
    manifest.output(path);
  }

  manifest.config({{"max_lag", o.max_lag}, {"window", o.window}});
  manifest.write(dir / "manifest.json");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Co-location detection from magnetometer trajectories"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic corpus");
  gen_cmd->add_option("--users", gen.users, "Number of users")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--journeys", gen.journeys, "Journeys per user");
  gen_cmd->add_option("--coloc", gen.coloc, "Shared-ride probability")
      ->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--seed", gen.seed, "Master seed");
  gen_cmd->add_option("--vehicle", gen.vehicle, "overground|underground|bus")
      ->check(CLI::IsMember({"overground", "underground", "bus"}));
  gen_cmd->add_option("--min-leg", gen.min_leg_s, "Shortest leg in seconds");
  gen_cmd->add_option("--max-leg", gen.max_leg_s, "Longest leg in seconds");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  SegmentOptions seg;
  auto* seg_cmd = app.add_subcommand("segment", "Extract vehicle trajectories");
  seg_cmd->add_option("traces", seg.traces, "Trace files")->required();
  seg_cmd->add_option("--out", seg.out, "Output directory")->required();
  seg_cmd->add_option("--window", seg.window, "Moving-average window")
      ->check(CLI::PositiveNumber);
  seg_cmd->add_option("--min-duration", seg.min_duration_s,
                      "Shortest kept ride in seconds");
  seg_cmd->add_option("--debounce", seg.debounce_s,
                      "Shortest activity episode in seconds");

  MatchOptions match;
  auto* match_cmd = app.add_subcommand("match", "Match two users' trajectories");
  match_cmd->add_option("dir_a", match.dir_a, "First user's trajectories")
      ->required();
  match_cmd->add_option("dir_b", match.dir_b, "Second user's trajectories")
      ->required();
  match_cmd->add_option("--out", match.out, "Report file")->required();
  match_cmd->add_option("--thresholds", match.thresholds,
                        "Offset s, compression rate, score")
      ->delimiter(',')
      ->expected(3);
  match_cmd->add_option("--decimate", match.decimate, "Decimation factor")
      ->check(CLI::PositiveNumber);
  match_cmd->add_option("--band", match.band, "Sakoe-Chiba radius (samples)")
      ->check(CLI::PositiveNumber);
  match_cmd->add_option("--score-space", match.score_space, "derivative|raw")
      ->check(CLI::IsMember({"derivative", "raw"}));
  match_cmd->add_flag("--ignore-timestamps", match.ignore_timestamps,
                      "Skip the start-time check");
  match_cmd->add_flag("--emit-paths", match.emit_paths,
                      "Include warp paths in the report");
  match_cmd->add_flag("--no-prefilter", match.no_prefilter,
                      "Align every pair before applying the checks");
  match_cmd->add_option("--workers", match.workers, "Worker threads")
      ->check(CLI::PositiveNumber);

  ReportOptions report;
  auto* report_cmd = app.add_subcommand("report", "Export plot data");
  report_cmd->add_option("--report", report.report, "Match report")->required();
  report_cmd->add_option("trajectories", report.trajectories,
                         "Trajectory files or directories")
      ->required();
  report_cmd->add_option("--traces", report.traces,
                         "Trace files for raw/smoothed export");
  report_cmd->add_option("--out", report.out, "Output directory")->required();
  report_cmd->add_option("--max-lag", report.max_lag, "Autocorrelation lags")
      ->check(CLI::PositiveNumber);
  report_cmd->add_option("--window", report.window, "Moving-average window")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, std::cerr, std::cerr);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*seg_cmd) return run_segment(seg);
    if (*match_cmd) return run_match(match);
    if (*report_cmd) return run_report(report);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const magcoloc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}
