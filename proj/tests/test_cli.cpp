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

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "magcoloc/io.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace magcoloc;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    root_ = fs::temp_directory_path() /
            (std::string("magcoloc_cli_") + info->name() + "_" +
             std::to_string(::getpid()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  // Runs the tool with stderr captured; returns the exit status.
  int run(const std::string& args) {
    const std::string cmd = std::string(MAGCOLOC_CLI_PATH) + " " + args + " 2>" +
                            (root_ / "stderr.txt").string() + " >" +
                            (root_ / "stdout.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  std::string path(const std::string& rel) { return (root_ / rel).string(); }

  // gen + segment into one directory per user.
  void make_corpus(const std::string& flags = "--users 2 --journeys 3 --coloc 1 --seed 7") {
    ASSERT_EQ(run("gen " + flags + " --out " + path("corpus")), 0) << slurp(root_ / "stderr.txt");
    ASSERT_EQ(run("segment " + path("corpus/u00.trace.jsonl") + " --out " + path("a")), 0);
    ASSERT_EQ(run("segment " + path("corpus/u01.trace.jsonl") + " --out " + path("b")), 0);
  }

  std::vector<std::vector<std::string>> csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
      std::vector<std::string> cells;
      std::stringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      if (!line.empty() && line.back() == ',') cells.emplace_back();
      rows.push_back(cells);
    }
    return rows;
  }

  fs::path root_;
};

}  // namespace

TEST_F(Cli, GenWritesTracesTruthAndManifest) {
  ASSERT_EQ(run("gen --users 4 --journeys 3 --coloc 0.5 --seed 7 --out " + path("c")), 0);
  for (const char* f : {"u00", "u01", "u02", "u03"}) {
    EXPECT_TRUE(fs::exists(root_ / "c" / (std::string(f) + ".trace.jsonl")));
  }
  EXPECT_TRUE(fs::exists(root_ / "c" / "ground_truth.json"));
  const auto manifest = nlohmann::json::parse(slurp(root_ / "c" / "manifest.json"));
  EXPECT_EQ(manifest.at("command"), "gen");
  EXPECT_EQ(manifest.at("outputs").size(), 5u);
  EXPECT_TRUE(manifest.contains("tool_version"));
  EXPECT_TRUE(manifest.contains("wall_clock_s"));
  EXPECT_EQ(manifest.at("config").at("seed"), 7);
}

TEST_F(Cli, GenIsDeterministic) {
  ASSERT_EQ(run("gen --users 2 --journeys 2 --seed 9 --out " + path("x")), 0);
  ASSERT_EQ(run("gen --users 2 --journeys 2 --seed 9 --out " + path("y")), 0);
  for (const char* f : {"u00.trace.jsonl", "u01.trace.jsonl", "ground_truth.json"}) {
    EXPECT_EQ(slurp(root_ / "x" / f), slurp(root_ / "y" / f)) << f;
  }
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("gen --users 2"), 2);
  EXPECT_EQ(run("gen --coloc 2 --out " + path("bad")), 2);
  EXPECT_EQ(run("gen --vehicle tram --out " + path("bad")), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run("segment " + path("missing.jsonl") + " --out " + path("o")), 2);
}

TEST_F(Cli, SegmentReportsBadLine) {
  std::ofstream(path("bad.trace.jsonl"))
      << "{\"device_id\":\"d\",\"clock_offset_ms\":0}\n"
      << "{\"t_ms\":0,\"mx\":1,\"my\":1,\"mz\":1,\"activity\":\"Still\"}\n"
      << "{\"t_ms\":20,\"mx\":1,\"my\":1\n";
  EXPECT_EQ(run("segment " + path("bad.trace.jsonl") + " --out " + path("o")), 2);
  EXPECT_NE(slurp(root_ / "stderr.txt").find("line 3"), std::string::npos);
}

TEST_F(Cli, SegmentWithoutRidesWritesNothing) {
  {
    std::ofstream out(path("still.trace.jsonl"));
    Trace t{"still", 0, {}};
    for (int k = 0; k < 500; ++k) t.samples.push_back({k * 20, 30, 20, 10, ActivityLabel::kStill});
    write_trace(out, t);
  }
  EXPECT_EQ(run("segment " + path("still.trace.jsonl") + " --out " + path("o")), 0);
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(root_ / "o")) {
    n += e.path().string().find(".traj.jsonl") != std::string::npos;
  }
  EXPECT_EQ(n, 0u);
}

TEST_F(Cli, SegmentOneFilePerJourney) {
  make_corpus();
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(root_ / "a")) {
    n += e.path().string().find(".traj.jsonl") != std::string::npos;
  }
  EXPECT_EQ(n, 3u);
  std::ifstream in(path("a/u00.0.traj.jsonl"));
  const Trajectory t = read_trajectory(in);
  EXPECT_EQ(t.trace_id(), "u00.0");
}

TEST_F(Cli, MatchFindsGroundTruth) {
  make_corpus();
  ASSERT_EQ(run("match " + path("a") + " " + path("b") + " --out " + path("r.json")), 0);
  std::ifstream in(path("r.json"));
  const MatchRun r = read_match_report(in);
  EXPECT_EQ(r.pairs.size(), 9u);
  EXPECT_EQ(r.thresholds, Thresholds{});
  std::ifstream gt(path("corpus/ground_truth.json"));
  const auto truth = read_ground_truth(gt);
  std::set<std::pair<std::string, std::string>> accepted;
  for (const auto& d : r.pairs) {
    if (d.report.accepted) accepted.insert({d.report.trajectory_a, d.report.trajectory_b});
  }
  EXPECT_EQ(accepted, (std::set<std::pair<std::string, std::string>>(truth.begin(), truth.end())));
  EXPECT_TRUE(fs::exists(path("r.json.manifest.json")));
}

TEST_F(Cli, MatchIsByteDeterministicAcrossWorkers) {
  make_corpus();
  const std::string base = "match " + path("a") + " " + path("b") + " --ignore-timestamps";
  ASSERT_EQ(run(base + " --out " + path("r1.json")), 0);
  ASSERT_EQ(run(base + " --out " + path("r2.json") + " --workers 3"), 0);
  EXPECT_EQ(slurp(path("r1.json")), slurp(path("r2.json")));
}

TEST_F(Cli, MatchFlagsAndErrors) {
  make_corpus();
  const std::string ab = "match " + path("a") + " " + path("b");
  EXPECT_EQ(run(ab + " --out " + path("t.json") + " --thresholds 5,1.5"), 2);
  EXPECT_EQ(run(ab + " --out " + path("t.json") + " --score-space log"), 2);
  EXPECT_EQ(run(ab + " --out " + path("t.json") + " --decimate 0"), 2);
  fs::create_directories(root_ / "empty");
  EXPECT_EQ(run("match " + path("a") + " " + path("empty") + " --out " + path("t.json")), 2);
  ASSERT_EQ(run(ab + " --out " + path("t.json") + " --thresholds 5,1.5,9 --score-space raw"), 0);
  std::ifstream in(path("t.json"));
  const MatchRun r = read_match_report(in);
  EXPECT_EQ(r.thresholds.max_ddtw_score, 9.0);
  EXPECT_EQ(r.config.score_space, CostSpace::kRaw);
}

TEST_F(Cli, BandNeverLowersDistance) {
  make_corpus();
  const std::string ab = "match " + path("a") + " " + path("b") +
                         " --ignore-timestamps --no-prefilter --emit-paths";
  ASSERT_EQ(run(ab + " --out " + path("free.json")), 0);
  ASSERT_EQ(run(ab + " --band 50 --out " + path("band.json")), 0);
  std::ifstream f1(path("free.json")), f2(path("band.json"));
  const MatchRun free = read_match_report(f1), banded = read_match_report(f2);
  ASSERT_EQ(free.pairs.size(), banded.pairs.size());
  auto load = [&](const std::string& dir, const std::string& id) {
    std::ifstream in(path(dir + "/" + id + ".traj.jsonl"));
    return decimate(read_trajectory(in), 10);
  };
  for (std::size_t k = 0; k < free.pairs.size(); ++k) {
    const auto& p = free.pairs[k].report;
    const auto a = load("a", p.trajectory_a), b = load("b", p.trajectory_b);
    const auto da = derivative_estimate(a.values()), db = derivative_estimate(b.values());
    const double d_free = path_cost(da, db, *p.warp_path);
    const double d_band = path_cost(da, db, *banded.pairs[k].report.warp_path);
    EXPECT_GE(d_band, d_free * (1.0 - 1e-12));
  }
}

TEST_F(Cli, ReportExportsPlotData) {
  make_corpus();
  ASSERT_EQ(run("match " + path("a") + " " + path("b") + " --out " + path("r.json")), 0);
  {
    std::ofstream out(path("a/flat.0.traj.jsonl"));
    write_trajectory(out, Trajectory("flat.0", 0, 4.965, std::vector<double>(300, 48.0)));
  }
  ASSERT_EQ(run("report --report " + path("r.json") + " " + path("a") + " " + path("b") +
                " --traces " + path("corpus/u00.trace.jsonl") + " --out " + path("plots")),
            0)
      << slurp(root_ / "stderr.txt");

  const auto scatter = csv(root_ / "plots" / "scatter.csv");
  EXPECT_EQ(scatter.size(), 1u + 9u);
  EXPECT_EQ(scatter[0][0], "a");

  const auto acf = csv(root_ / "plots" / "autocorrelation.csv");
  std::set<std::string> seen;
  for (std::size_t k = 1; k < acf.size(); ++k) {
    if (acf[k][1] == "0") {
      EXPECT_EQ(acf[k][2], "1");
      seen.insert(acf[k][0]);
    }
  }
  EXPECT_EQ(seen.size(), 6u);
  EXPECT_FALSE(seen.count("flat.0"));
  const std::string flags = slurp(root_ / "plots" / "degenerate.csv");
  EXPECT_NE(flags.find("flat.0,degenerate: zero variance"), std::string::npos);

  const auto overlay = csv(root_ / "plots" / "alignment.csv");
  EXPECT_GT(overlay.size(), 1u);
  const auto mags = csv(root_ / "plots" / "magnitude.csv");
  EXPECT_EQ(mags[0], (std::vector<std::string>{"device", "t_ms", "raw", "smoothed"}));
  EXPECT_GT(mags.size(), 1000u);
  EXPECT_TRUE(fs::exists(root_ / "plots" / "manifest.json"));
}

TEST_F(Cli, ReportRejectsDanglingIds) {
  make_corpus();
  ASSERT_EQ(run("match " + path("a") + " " + path("b") + " --out " + path("r.json")), 0);
  EXPECT_EQ(run("report --report " + path("r.json") + " " + path("a") + " --out " +
                path("plots")),
            2);
  EXPECT_NE(slurp(root_ / "stderr.txt").find("dangling"), std::string::npos);
}

TEST_F(Cli, FullPipelineOnBusCorpus) {
  make_corpus("--users 2 --journeys 2 --coloc 1 --seed 3 --vehicle bus");
  EXPECT_EQ(run("match " + path("a") + " " + path("b") + " --out " + path("r.json")), 0);
}
