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

#pragma once

#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tacklerisk/detection.hpp"
#include "tacklerisk/kalman.hpp"

namespace tacklerisk {

struct BallTrack {
  std::vector<std::optional<Measurement>> measured;  // selected candidate per frame
  std::vector<Point2> filtered;
  std::vector<Point2> smoothed;
  std::vector<StepDiagnostics> diagnostics;
  FilterRun run;
};

/// Nearest ball candidate (by bbox centre) to the predicted position. Ties go
/// to the higher confidence, then to the earlier candidate.
inline std::optional<Measurement> select_measurement(const FrameRecord& frame, Point2 predicted) {
  std::optional<Measurement> best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const BallDetection& b : frame.balls) {
    if (b.confidence < 0.0) continue;
    const Point2 c = bbox_center(b.bbox);
    const double d = distance(c, predicted);
    if (!best || d < best_dist || (d == best_dist && b.confidence > best->confidence)) {
      best = Measurement{c, b.confidence};
      best_dist = d;
    }
  }
  return best;
}

/// Per-frame time step. The first frame is one nominal period after the
/// image-centre initialisation; later steps scale with index gaps.
inline std::vector<FilterInput> frame_inputs(const Segment& seg) {
  std::vector<FilterInput> inputs;
  inputs.reserve(seg.frames.size());
  const double period = 1.0 / seg.fps;
  for (std::size_t k = 0; k < seg.frames.size(); ++k) {
    const std::int64_t gap = k == 0 ? 1 : seg.frames[k].index - seg.frames[k - 1].index;
    inputs.push_back({seg.frames[k].index, period * static_cast<double>(gap), std::nullopt});
  }
  return inputs;
}

/// init -> per frame (predict, select, gate, update) -> smooth.
/// Throws DivergenceError on filter blow-up.
inline BallTrack track_ball(const Segment& seg, const TrackerConfig& cfg) {
  cfg.validate();
  const std::vector<FilterInput> inputs = frame_inputs(seg);
  BallTrack track;
  track.measured.reserve(seg.frames.size());
  std::size_t k = 0;
  track.run = run_filter(init_state(seg.width, seg.height, cfg), inputs, cfg, seg.width, seg.height,
                         [&](const FilterInput&, const TrackerState& prior) {
                           auto m = select_measurement(seg.frames[k++], prior.position());
                           track.measured.push_back(m);
                           return m;
                         });
  for (std::size_t i = 0; i < track.run.steps.size(); ++i) {
    track.filtered.push_back(track.run.steps[i].posterior.position());
    track.smoothed.push_back(track.run.smoothed[i].position());
  }
  track.diagnostics = track.run.diagnostics;
  return track;
}

/// Per-frame debug dump: {index, measured, filtered, smoothed, accepted,
/// reason, innovation, S_diag}.
inline nlohmann::json track_dump_json(const Segment& seg, const BallTrack& t) {
  using nlohmann::json;
  json frames = json::array();
  for (std::size_t i = 0; i < t.diagnostics.size(); ++i) {
    const StepDiagnostics& d = t.diagnostics[i];
    json measured = nullptr;
    if (t.measured[i])
      measured = {{"x", t.measured[i]->pos.x}, {"y", t.measured[i]->pos.y}, {"confidence", t.measured[i]->confidence}};
    frames.push_back({{"index", d.frame_index},
                      {"measured", measured},
                      {"filtered", json::array({t.filtered[i].x, t.filtered[i].y})},
                      {"smoothed", json::array({t.smoothed[i].x, t.smoothed[i].y})},
                      {"accepted", d.accepted},
                      {"reason", std::string(to_string(d.reason))},
                      {"innovation", json::array({d.innovation(0), d.innovation(1)})},
                      {"S_diag", json::array({d.innovation_cov(0, 0), d.innovation_cov(1, 1)})}});
  }
  return {{"segment_id", seg.id}, {"frames", std::move(frames)}};
}

/// Plot-ready table. Missing measurements are empty cells.
inline std::string track_plot_csv(const BallTrack& t) {
  std::string out = "frame,measured_x,measured_y,filtered_x,filtered_y,smoothed_x,smoothed_y,accepted\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (std::size_t i = 0; i < t.diagnostics.size(); ++i) {
    out += std::to_string(t.diagnostics[i].frame_index) + ",";
    if (t.measured[i])
      out += num(t.measured[i]->pos.x) + "," + num(t.measured[i]->pos.y) + ",";
    else
      out += ",,";
    out += num(t.filtered[i].x) + "," + num(t.filtered[i].y) + "," + num(t.smoothed[i].x) + "," +
           num(t.smoothed[i].y) + "," + (t.diagnostics[i].accepted ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace tacklerisk
