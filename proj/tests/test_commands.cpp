// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "tacklerisk/commands.hpp"

using namespace tacklerisk;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(::testing::TempDir()) / ("tacklerisk_cmd_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

fs::path write_segment(const fs::path& dir, const ScenarioSpec& s) {
  const fs::path p = dir / (s.id + ".json");
  spit(p, serialize_segment(gen_segment(s).first));
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(TACKLERISK_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::vector<std::string> csv_rows(const std::string& csv) {
  std::vector<std::string> rows;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);) rows.push_back(line);
  return rows;
}

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

TEST(ConfigTest, LayeringAndPctParsing) {
  const fs::path dir = scratch("config");
  spit(dir / "cfg.json", R"({"tracker": {"meas_std_x": 40}, "resolver": {"tackle_frame_offset": -2}})");
  ConfigOverrides o;
  o.tackle_frame_offset = -1;
  o.pcts = parse_pct_list("10,15");
  const PipelineConfig c = build_config((dir / "cfg.json").string(), o);
  EXPECT_EQ(c.tracker.meas_std_x, 40.0);
  EXPECT_EQ(c.tracker.meas_std_y, 15.0);
  EXPECT_EQ(c.resolver.tackle_frame_offset, -1);
  ASSERT_EQ(c.risk.region_pcts.size(), 2u);
  EXPECT_DOUBLE_EQ(c.risk.region_pcts[0], 0.10);

  EXPECT_EQ(pipeline_config_from_json(pipeline_config_to_json(c)).risk.region_pcts, c.risk.region_pcts);
  spit(dir / "bad.json", R"({"tracker": {"meas_stdx": 40}})");
  EXPECT_ANY_THROW(build_config((dir / "bad.json").string(), {}));
  EXPECT_ANY_THROW(parse_pct_list("15,abc"));
}

TEST(CmdRunTest, HighRiskSegment) {
  const fs::path dir = scratch("run_high");
  const fs::path seg = write_segment(dir, ScenarioSpec{});
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(seg.string(), PipelineConfig{}, std::nullopt, out, err), kExitOk);
  const auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j["status"], "ok");
  for (const auto& r : j["regions"]) {
    if (std::abs(r["pct"].get<double>() - 0.15) < 1e-9) {
      EXPECT_EQ(r["label"], "high");
    }
  }
}

TEST(CmdRunTest, SinglePersonAndMissingFile) {
  const fs::path dir = scratch("run_fail");
  ScenarioSpec s;
  s.tackler.reset();
  s.allow_no_contact = true;
  const fs::path seg = write_segment(dir, s);
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(seg.string(), PipelineConfig{}, std::nullopt, out, err), kExitPipeline);
  EXPECT_EQ(nlohmann::json::parse(out.str())["reason"], "NoTackler");

  std::ostringstream out2, err2;
  EXPECT_EQ(cmd_run((dir / "absent.json").string(), PipelineConfig{}, std::nullopt, out2, err2), kExitUsage);
  EXPECT_FALSE(err2.str().empty());
}

TEST(CmdEvalTest, EmptyDirectoryAndMissingLabels) {
  const fs::path dir = scratch("eval_empty");
  spit(dir / "labels.csv", "segment_id,label\n");
  std::ostringstream out, err;
  EXPECT_EQ(cmd_eval(dir.string(), (dir / "labels.csv").string(), PipelineConfig{}, {}, out, err), kExitUsage);

  write_segment(dir, ScenarioSpec{});
  EXPECT_EQ(cmd_eval(dir.string(), (dir / "labels.csv").string(), PipelineConfig{}, {}, out, err), kExitUsage);
}

TEST(CmdEvalTest, PublishedCountReplay) {
  const fs::path dir = scratch("eval_replay");
  sweep(fixtures::published_replay_specs(), dir / "corpus");
  const fs::path csv_path = dir / "metrics.csv";
  EvalOptions opt;
  opt.jobs = 4;
  opt.out_path = csv_path.string();
  opt.results_dir = (dir / "results").string();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_eval((dir / "corpus").string(), (dir / "corpus" / "labels.csv").string(), PipelineConfig{}, opt, out, err),
            kExitOk)
      << err.str();
  EXPECT_TRUE(fs::exists(dir / "metrics.json"));
  EXPECT_TRUE(fs::exists(dir / "results" / "pub_fail_000.result.json"));

  const auto rows = csv_rows(slurp(csv_path));
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0], kMetricsCsvHeader);
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& t = fixtures::kPublishedCounts[i];
    const double n = double(t.chd + t.hll + t.llh + t.cld);
    const std::string expected = fixed6(fixtures::kPcts[i]) + "," + std::to_string(t.chd) + "," + std::to_string(t.hll) +
                                 "," + std::to_string(t.llh) + "," + std::to_string(t.cld) + ",45," +
                                 fixed6((t.chd + t.cld) / n) + "," + fixed6((t.chd + t.cld) / 109.0) + "," +
                                 fixed6(double(t.chd) / double(t.chd + t.hll)) + "," +
                                 fixed6(double(t.chd) / double(t.chd + t.llh)) + "," +
                                 fixed6(t.chd / (t.chd + 0.5 * double(t.hll + t.llh)));
    EXPECT_EQ(rows[i + 1].substr(0, expected.size()), expected) << "pct row " << i;
  }

  // Single- and multi-threaded runs agree byte for byte.
  std::ostringstream serial;
  EvalOptions one;
  ASSERT_EQ(cmd_eval((dir / "corpus").string(), (dir / "corpus" / "labels.csv").string(), PipelineConfig{}, one, serial,
                     err),
            kExitOk);
  EXPECT_EQ(serial.str(), slurp(csv_path));
}

TEST(CmdGenTest, WritesCorpusDeterministically) {
  const fs::path dir = scratch("gen");
  ScenarioSpec a, b;
  a.id = "a";
  b.id = "b";
  b.seed = 3;
  spit(dir / "spec.json", nlohmann::json{{"scenarios", {scenario_to_json(a), scenario_to_json(b)}}}.dump());
  std::ostringstream out, err;
  ASSERT_EQ(cmd_gen((dir / "spec.json").string(), (dir / "one").string(), out, err), kExitOk) << err.str();
  ASSERT_EQ(cmd_gen((dir / "spec.json").string(), (dir / "two").string(), out, err), kExitOk);
  EXPECT_EQ(csv_rows(slurp(dir / "one" / "labels.csv")).size(), 3u);
  for (const char* f : {"a.json", "b.json", "labels.csv", "truth/a.json"})
    EXPECT_EQ(slurp(dir / "one" / f), slurp(dir / "two" / f)) << f;

  spit(dir / "bad.json", "{\"scenarios\": [ {\"id\": ");
  EXPECT_EQ(cmd_gen((dir / "bad.json").string(), (dir / "three").string(), out, err), kExitUsage);
}

TEST(CmdTrackTest, OutlierFlaggedAndCleanAccepted) {
  const fs::path dir = scratch("track");
  ScenarioSpec s;
  s.id = "outlier";
  s.carrier.start_x = 400;
  s.outliers.push_back({17, 700, -250, 0.9});
  const fs::path seg = write_segment(dir, s);
  std::ostringstream err;
  const fs::path dump = dir / "dump.json";
  std::ostringstream out;
  ASSERT_EQ(cmd_track(seg.string(), PipelineConfig{}, dump.string(), std::nullopt, out, err), kExitOk);
  const auto j = nlohmann::json::parse(slurp(dump));
  // The filter starts at the image centre; early frames may be gated until
  // the covariance opens up. From the first accepted frame on, only the
  // outlier is rejected.
  bool locked = false;
  for (const auto& f : j["frames"]) {
    locked = locked || f["accepted"].get<bool>();
    if (locked) {
      EXPECT_EQ(f["accepted"], f["index"] != 17) << f["index"];
    }
  }
  EXPECT_TRUE(j["frames"][5]["accepted"].get<bool>());
  EXPECT_EQ(j["frames"][17]["reason"], "GateExceeded");
  EXPECT_TRUE(fs::exists(dir / "dump.csv"));

  s = ScenarioSpec{};
  s.id = "clean";
  const fs::path clean = write_segment(dir, s);
  std::ostringstream out2;
  ASSERT_EQ(cmd_track(clean.string(), PipelineConfig{}, std::nullopt, std::nullopt, out2, err), kExitOk);
  for (const auto& f : nlohmann::json::parse(out2.str())["frames"]) EXPECT_TRUE(f["accepted"].get<bool>());

  EXPECT_EQ(cmd_track((dir / "absent.json").string(), PipelineConfig{}, std::nullopt, std::nullopt, out2, err), kExitUsage);
}

TEST(CliBinaryTest, ExitCodes) {
  const fs::path dir = scratch("cli");
  const fs::path good = write_segment(dir, ScenarioSpec{});
  ScenarioSpec lonely;
  lonely.id = "lonely";
  lonely.tackler.reset();
  lonely.allow_no_contact = true;
  const fs::path bad = write_segment(dir, lonely);

  EXPECT_EQ(run_cli("run " + good.string()), 0);
  EXPECT_EQ(run_cli("run " + bad.string()), 2);
  EXPECT_EQ(run_cli("run " + (dir / "nope.json").string()), 1);
  EXPECT_EQ(run_cli("run " + good.string() + " --tackle-frame-offset -9"), 1);
  EXPECT_EQ(run_cli("frobnicate"), 1);
  EXPECT_EQ(run_cli("track " + good.string() + " --out " + (dir / "t.json").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "t.csv"));
  EXPECT_EQ(run_cli("run " + good.string() + " --pcts 10,20 --out " + (dir / "r.json").string()), 0);
  EXPECT_EQ(nlohmann::json::parse(slurp(dir / "r.json"))["regions"].size(), 2u);
}
