/* Copyright 2026 The tacklerisk Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "tacklerisk/commands.hpp"

namespace {

struct SharedFlags {
  std::optional<std::string> config;
  std::optional<double> ball_conf_floor;
  std::optional<int> tackle_frame_offset;
  std::optional<double> meas_std_x;
  std::optional<double> meas_std_y;
  std::optional<std::string> pcts;
};

void add_pipeline_flags(CLI::App* cmd, SharedFlags& f) {
  cmd->add_option("--config", f.config, "JSON config file (tracker/resolver/head/risk sections)");
  cmd->add_option("--ball-conf-floor", f.ball_conf_floor, "ball confidence below which a detection is distrusted");
  cmd->add_option("--tackle-frame-offset", f.tackle_frame_offset, "frames to shift the tackle frame (-5..0)");
  cmd->add_option("--meas-std-x", f.meas_std_x, "ball measurement std in x (px)");
  cmd->add_option("--meas-std-y", f.meas_std_y, "ball measurement std in y (px)");
  cmd->add_option("--pcts", f.pcts, "high-risk region sizes in percent, e.g. 5,10,15,20,25");
}

tacklerisk::PipelineConfig resolve(const SharedFlags& f) {
  tacklerisk::ConfigOverrides o;
  o.ball_conf_floor = f.ball_conf_floor;
  o.tackle_frame_offset = f.tackle_frame_offset;
  o.meas_std_x = f.meas_std_x;
  o.meas_std_y = f.meas_std_y;
  if (f.pcts) o.pcts = tacklerisk::parse_pct_list(*f.pcts);
  return tacklerisk::build_config(f.config, o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tackle risk assessment from per-frame detections"};
  app.require_subcommand(1);

  SharedFlags flags;
  std::string segment;
  std::string corpus;
  std::string truth;
  std::string spec_file;
  std::string out_dir;
  std::optional<std::string> out;
  std::optional<std::string> csv;
  std::optional<std::string> results;
  std::size_t jobs = 1;

  auto* run = app.add_subcommand("run", "evaluate one segment");
  run->add_option("segment", segment, "segment JSON")->required();
  run->add_option("--out", out, "write result JSON here instead of stdout");
  add_pipeline_flags(run, flags);

  auto* eval = app.add_subcommand("eval", "evaluate a corpus against truth labels");
  eval->add_option("corpus", corpus, "directory of segment JSON files")->required();
  eval->add_option("truth", truth, "labels CSV (segment_id,label)")->required();
  eval->add_option("--out", out, "metrics CSV path; JSON is written beside it");
  eval->add_option("--results", results, "directory for per-segment result JSON");
  eval->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  add_pipeline_flags(eval, flags);

  auto* gen = app.add_subcommand("gen", "generate a synthetic corpus");
  gen->add_option("spec", spec_file, "scenario spec JSON")->required();
  gen->add_option("out_dir", out_dir, "output directory")->required();

  auto* track = app.add_subcommand("track", "dump the ball tracker for one segment");
  track->add_option("segment", segment, "segment JSON")->required();
  track->add_option("--out", out, "dump JSON path (default stdout)");
  track->add_option("--csv", csv, "plot CSV path (default beside --out)");
  add_pipeline_flags(track, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tacklerisk::kExitUsage;
  }

  try {
    if (*gen) return tacklerisk::cmd_gen(spec_file, out_dir, std::cout, std::cerr);
    const tacklerisk::PipelineConfig cfg = resolve(flags);
    if (*run) return tacklerisk::cmd_run(segment, cfg, out, std::cout, std::cerr);
    if (*eval) return tacklerisk::cmd_eval(corpus, truth, cfg, {jobs, out, results}, std::cout, std::cerr);
    if (*track) return tacklerisk::cmd_track(segment, cfg, out, csv, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return tacklerisk::kExitUsage;
  }
  return tacklerisk::kExitUsage;
}
