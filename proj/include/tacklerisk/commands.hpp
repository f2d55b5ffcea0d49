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

// Command implementations behind the `tacklerisk` executable. Each command
// writes machine-readable output to `out`, diagnostics to `err`, and returns
// the process exit code: 0 ok, 1 usage/IO, 2 pipeline failure.

#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "tacklerisk/ball_tracker.hpp"
#include "tacklerisk/metrics.hpp"
#include "tacklerisk/risk.hpp"
#include "tacklerisk/segment_io.hpp"
#include "tacklerisk/synthgen.hpp"

namespace tacklerisk {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPipeline = 2;

/// Optional flag overrides, applied on top of defaults and any config file.
struct ConfigOverrides {
  std::optional<double> ball_conf_floor;
  std::optional<int> tackle_frame_offset;
  std::optional<double> meas_std_x;
  std::optional<double> meas_std_y;
  std::optional<std::vector<double>> pcts;  // ratios, e.g. 0.15
};

namespace cli_detail {

using nlohmann::json;

template <typename T>
void field(const json& j, const char* key, T& out, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw SchemaError(where + "." + key, "wrong type");
  }
}

inline void known(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where, "expected object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; }))
      throw SchemaError(where + "." + it.key(), "unknown field");
  }
}

}  // namespace cli_detail

/// Config file layout:
/// {"tracker": {...TrackerConfig}, "resolver": {...}, "head": {...}, "risk": {...}}
inline PipelineConfig pipeline_config_from_json(const nlohmann::json& j) {
  using cli_detail::field;
  using cli_detail::known;
  PipelineConfig c;
  known(j, {"tracker", "resolver", "head", "risk"}, "$");
  if (auto it = j.find("tracker"); it != j.end()) {
    known(*it, {"meas_std_x", "meas_std_y", "max_daccel_x", "max_daccel_y", "gate_sigma", "conf_floor",
                "degraded_daccel", "init_pos_var", "init_vel_var", "init_acc_var"},
          "$.tracker");
    auto& t = c.tracker;
    field(*it, "meas_std_x", t.meas_std_x, "$.tracker");
    field(*it, "meas_std_y", t.meas_std_y, "$.tracker");
    field(*it, "max_daccel_x", t.max_daccel_x, "$.tracker");
    field(*it, "max_daccel_y", t.max_daccel_y, "$.tracker");
    field(*it, "gate_sigma", t.gate_sigma, "$.tracker");
    field(*it, "conf_floor", t.conf_floor, "$.tracker");
    field(*it, "degraded_daccel", t.degraded_daccel, "$.tracker");
    field(*it, "init_pos_var", t.init_pos_var, "$.tracker");
    field(*it, "init_vel_var", t.init_vel_var, "$.tracker");
    field(*it, "init_acc_var", t.init_acc_var, "$.tracker");
  }
  if (auto it = j.find("resolver"); it != j.end()) {
    known(*it, {"tackle_frame_offset", "min_person_height_frac"}, "$.resolver");
    field(*it, "tackle_frame_offset", c.resolver.tackle_frame_offset, "$.resolver");
    field(*it, "min_person_height_frac", c.resolver.min_person_height_frac, "$.resolver");
  }
  if (auto it = j.find("head"); it != j.end()) {
    known(*it, {"head_meas_std", "head_init_pos_var", "head_gate_sigma", "tail_frames", "head_frac"}, "$.head");
    field(*it, "head_meas_std", c.head.head_meas_std, "$.head");
    field(*it, "head_init_pos_var", c.head.head_init_pos_var, "$.head");
    field(*it, "head_gate_sigma", c.head.head_gate_sigma, "$.head");
    field(*it, "tail_frames", c.head.tail_frames, "$.head");
    field(*it, "head_frac", c.head.head_frac, "$.head");
  }
  if (auto it = j.find("risk"); it != j.end()) {
    known(*it, {"region_pcts", "primary_pct"}, "$.risk");
    field(*it, "region_pcts", c.risk.region_pcts, "$.risk");
    field(*it, "primary_pct", c.risk.primary_pct, "$.risk");
  }
  return c;
}

inline nlohmann::json pipeline_config_to_json(const PipelineConfig& c) {
  const auto& t = c.tracker;
  return {{"tracker",
           {{"meas_std_x", t.meas_std_x},
            {"meas_std_y", t.meas_std_y},
            {"max_daccel_x", t.max_daccel_x},
            {"max_daccel_y", t.max_daccel_y},
            {"gate_sigma", t.gate_sigma},
            {"conf_floor", t.conf_floor},
            {"degraded_daccel", t.degraded_daccel},
            {"init_pos_var", t.init_pos_var},
            {"init_vel_var", t.init_vel_var},
            {"init_acc_var", t.init_acc_var}}},
          {"resolver",
           {{"tackle_frame_offset", c.resolver.tackle_frame_offset},
            {"min_person_height_frac", c.resolver.min_person_height_frac}}},
          {"head",
           {{"head_meas_std", c.head.head_meas_std},
            {"head_init_pos_var", c.head.head_init_pos_var},
            {"head_gate_sigma", c.head.head_gate_sigma},
            {"tail_frames", c.head.tail_frames},
            {"head_frac", c.head.head_frac}}},
          {"risk", {{"region_pcts", c.risk.region_pcts}, {"primary_pct", c.risk.primary_pct}}}};
}

/// Defaults <- config file <- flags. Throws on unreadable or invalid input.
inline PipelineConfig build_config(const std::optional<std::string>& config_path, const ConfigOverrides& o) {
  PipelineConfig c;
  if (config_path) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_file(*config_path));
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError("$", std::string("malformed config JSON: ") + e.what());
    }
    c = pipeline_config_from_json(j);
  }
  if (o.ball_conf_floor) c.tracker.conf_floor = *o.ball_conf_floor;
  if (o.tackle_frame_offset) c.resolver.tackle_frame_offset = *o.tackle_frame_offset;
  if (o.meas_std_x) c.tracker.meas_std_x = *o.meas_std_x;
  if (o.meas_std_y) c.tracker.meas_std_y = *o.meas_std_y;
  if (o.pcts) {
    c.risk.region_pcts = *o.pcts;
    if (!c.risk.index_of(c.risk.primary_pct)) c.risk.primary_pct = c.risk.region_pcts.front();
  }
  c.validate();
  return c;
}

/// Parses "5,10,15" (percent) into ratios.
inline std::vector<double> parse_pct_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InvariantError("invalid pct list entry \"" + item + "\"");
    }
    if (used != item.size()) throw InvariantError("invalid pct list entry \"" + item + "\"");
    out.push_back(v / 100.0);
    pos = comma + 1;
  }
  return out;
}

namespace cli_detail {

inline bool write_text(const std::string& path, const std::string& text, std::ostream& err) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) {
    err << "error: cannot write " << path << "\n";
    return false;
  }
  f << text;
  return static_cast<bool>(f);
}

inline bool emit(const std::optional<std::string>& path, const std::string& text, std::ostream& out, std::ostream& err) {
  if (path) return write_text(*path, text, err);
  out << text;
  return true;
}

inline std::optional<Segment> load_or_report(const std::string& path, std::ostream& err) {
  try {
    return load_segment(path);
  } catch (const std::exception& e) {
    err << "error: " << path << ": " << e.what() << "\n";
    return std::nullopt;
  }
}

}  // namespace cli_detail

/// Evaluates one segment. Failure JSON is still emitted on exit 2.
inline int cmd_run(const std::string& segment_path, const PipelineConfig& cfg, const std::optional<std::string>& out_path,
                   std::ostream& out, std::ostream& err) {
  const auto seg = cli_detail::load_or_report(segment_path, err);
  if (!seg) return kExitUsage;
  const SegmentOutcome o = assess_segment(*seg, cfg);
  if (!cli_detail::emit(out_path, outcome_to_json(o).dump(2) + "\n", out, err)) return kExitUsage;
  if (const auto* f = std::get_if<SegmentFailure>(&o)) {
    err << "segment " << f->segment_id << " failed: " << to_string(f->reason) << " (" << f->message << ")\n";
    return kExitPipeline;
  }
  return kExitOk;
}

/// Segment files of a corpus directory: regular `*.json` files, sorted.
inline std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

struct EvalOptions {
  std::size_t jobs = 1;
  std::optional<std::string> out_path;     // metrics CSV; JSON goes beside it
  std::optional<std::string> results_dir;  // per-segment result JSON
};

/// Evaluates every segment in `corpus_dir` and writes the metrics table.
inline int cmd_eval(const std::string& corpus_dir, const std::string& truth_csv, const PipelineConfig& cfg,
                    const EvalOptions& opt, std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(corpus_dir, ec)) {
    err << "error: " << corpus_dir << " is not a directory\n";
    return kExitUsage;
  }
  const auto files = corpus_files(corpus_dir);
  if (files.empty()) {
    err << "error: no segment files in " << corpus_dir << "\n";
    return kExitUsage;
  }
  std::vector<GroundTruthLabel> truth;
  try {
    truth = parse_labels_csv(read_file(truth_csv));
  } catch (const std::exception& e) {
    err << "error: " << truth_csv << ": " << e.what() << "\n";
    return kExitUsage;
  }

  std::vector<std::optional<SegmentOutcome>> outcomes(files.size());
  std::vector<std::string> load_errors(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      try {
        outcomes[i] = assess_segment(load_segment(files[i].string()), cfg);
      } catch (const std::exception& e) {
        load_errors[i] = files[i].string() + ": " + e.what();
      }
    }
  };
  const std::size_t n_workers = std::clamp<std::size_t>(opt.jobs, 1, files.size());
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : load_errors) {
    if (!e.empty()) {
      err << "error: " << e << "\n";
      return kExitUsage;
    }
  }

  std::vector<SegmentOutcome> done;
  done.reserve(outcomes.size());
  for (auto& o : outcomes) done.push_back(std::move(*o));

  if (opt.results_dir) {
    fs::create_directories(*opt.results_dir, ec);
    for (const auto& o : done) {
      const std::string id = std::visit([](const auto& v) { return v.segment_id; }, o);
      if (!cli_detail::write_text((fs::path(*opt.results_dir) / (id + ".result.json")).string(),
                                  outcome_to_json(o).dump(2) + "\n", err))
        return kExitUsage;
    }
  }

  MetricsReport rep;
  try {
    rep = report(done, truth, cfg.risk, done.size());
  } catch (const MetricsError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  const std::string csv = report_to_csv(rep);
  if (opt.out_path) {
    fs::path json_path(*opt.out_path);
    json_path.replace_extension(".json");
    if (!cli_detail::write_text(*opt.out_path, csv, err)) return kExitUsage;
    if (!cli_detail::write_text(json_path.string(), report_to_json(rep).dump(2) + "\n", err)) return kExitUsage;
  } else {
    out << csv;
  }
  return kExitOk;
}

/// Generates a synthetic corpus from a scenario spec file.
inline int cmd_gen(const std::string& spec_file, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  try {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(read_file(spec_file));
    } catch (const nlohmann::json::parse_error& e) {
      err << "error: " << spec_file << ": malformed JSON: " << e.what() << "\n";
      return kExitUsage;
    }
    const SweepOutput res = sweep(scenarios_from_json(doc), out_dir);
    out << "wrote " << res.segment_files.size() << " segments and " << res.labels_csv.string() << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

/// Ball-tracker dump (JSON) plus a plot-ready CSV. The CSV goes to `csv_path`,
/// or beside `out_path` when only that is given.
inline int cmd_track(const std::string& segment_path, const PipelineConfig& cfg, const std::optional<std::string>& out_path,
                     const std::optional<std::string>& csv_path, std::ostream& out, std::ostream& err) {
  const auto seg = cli_detail::load_or_report(segment_path, err);
  if (!seg) return kExitUsage;
  BallTrack track;
  try {
    track = track_ball(*seg, cfg.tracker);
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitPipeline;
  }
  if (!cli_detail::emit(out_path, track_dump_json(*seg, track).dump(2) + "\n", out, err)) return kExitUsage;
  std::optional<std::string> csv = csv_path;
  if (!csv && out_path) csv = std::filesystem::path(*out_path).replace_extension(".csv").string();
  if (csv && !cli_detail::write_text(*csv, track_plot_csv(track), err)) return kExitUsage;
  return kExitOk;
}

}  // namespace tacklerisk
