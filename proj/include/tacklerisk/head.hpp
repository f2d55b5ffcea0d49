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

// Head-centre estimation for the ball-carrier and the tackler.
//
// The carrier's head is tracked through the frames leading up to the tackle
// with the same constant-acceleration filter used for the ball (wider
// measurement noise, tighter gate) and the last few smoothed positions are
// averaged. The tackler is usually only visible near contact, so its head
// height blends the pose estimate with an anthropometric prior: with a 1:8
// head-to-body ratio the head centre sits at ~7.5% of the box height.

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tacklerisk/ball_tracker.hpp"
#include "tacklerisk/detection.hpp"
#include "tacklerisk/errors.hpp"
#include "tacklerisk/kalman.hpp"

namespace tacklerisk {

struct HeadConfig {
  double head_meas_std = 50.0;     // px, both axes
  double head_init_pos_var = 70.0;  // px^2
  double head_gate_sigma = 3.0;
  int tail_frames = 3;
  double head_frac = 0.075;

  void validate() const {
    if (!(head_meas_std > 0.0 && head_init_pos_var > 0.0 && head_gate_sigma > 0.0 && tail_frames > 0))
      throw InvariantError("head config values must be positive");
    if (!(head_frac > 0.0 && head_frac < 0.5)) throw InvariantError("head_frac must lie in (0, 0.5)");
  }

  /// Ball filter parameters with the head-specific overrides applied.
  TrackerConfig filter_config(const TrackerConfig& base) const {
    TrackerConfig c = base;
    c.meas_std_x = head_meas_std;
    c.meas_std_y = head_meas_std;
    c.init_pos_var = head_init_pos_var;
    c.gate_sigma = head_gate_sigma;
    return c;
  }
};

enum class HeadSource { KeypointsOnly, Fused, GeometricOnly };

inline std::string_view to_string(HeadSource s) {
  switch (s) {
    case HeadSource::KeypointsOnly: return "KeypointsOnly";
    case HeadSource::Fused: return "Fused";
    case HeadSource::GeometricOnly: return "GeometricOnly";
  }
  return "Unknown";
}

struct HeadEstimate {
  double x = 0.0;
  double y = 0.0;
  HeadSource source = HeadSource::GeometricOnly;
};

/// Mean of the visible nose/eye/ear keypoints; needs at least two of the five.
inline std::optional<Point2> head_center_from_keypoints(const KeypointSet& kp) {
  double sx = 0.0;
  double sy = 0.0;
  int n = 0;
  for (BodyPart part : kFacialParts) {
    if (const auto& p = kp[part]) {
      sx += p->x;
      sy += p->y;
      ++n;
    }
  }
  if (n < 2) return std::nullopt;
  return Point2{sx / n, sy / n};
}

inline std::optional<Point2> head_center(const PersonDetection& p) {
  if (!p.keypoints) return std::nullopt;
  return head_center_from_keypoints(*p.keypoints);
}

inline double geometric_head_y(const BBox& b, double head_frac) { return b.y_min + head_frac * b.height(); }

/// Carrier head-centre at the tackle frame: head filter over the carrier's
/// keypoint head-centres up to `tackle_frame` (a position in seg.frames),
/// then the mean of the last `tail_frames` smoothed positions. Falls back to
/// the box geometry when no keypoint head-centre exists in the tail window.
inline HeadEstimate carrier_head(const Segment& seg, std::span<const std::optional<std::size_t>> carriers,
                                 std::size_t tackle_frame, const HeadConfig& cfg,
                                 const TrackerConfig& base = TrackerConfig{}) {
  cfg.validate();
  const std::size_t last = std::min(tackle_frame, seg.frames.size() - 1);
  const std::size_t tail = static_cast<std::size_t>(cfg.tail_frames);
  const std::size_t tail_begin = last + 1 >= tail ? last + 1 - tail : 0;

  auto carrier_at = [&](std::size_t k) -> const PersonDetection* {
    if (k >= carriers.size() || !carriers[k]) return nullptr;
    return &seg.frames[k].persons[*carriers[k]];
  };

  std::vector<std::optional<Point2>> meas(last + 1);
  std::optional<std::size_t> first;
  bool tail_has_carrier = false;
  bool tail_has_keypoints = false;
  for (std::size_t k = 0; k <= last; ++k) {
    const PersonDetection* p = carrier_at(k);
    if (k >= tail_begin && p) tail_has_carrier = true;
    if (!p) continue;
    meas[k] = head_center(*p);
    if (meas[k]) {
      if (!first) first = k;
      if (k >= tail_begin) tail_has_keypoints = true;
    }
  }
  if (!tail_has_carrier) throw PipelineError(FailureReason::NoCarrierHead, "ball-carrier unresolved in the tail window");

  if (!tail_has_keypoints) {
    for (std::size_t k = last + 1; k-- > tail_begin;) {
      if (const PersonDetection* p = carrier_at(k))
        return {bbox_center(p->bbox).x, geometric_head_y(p->bbox, cfg.head_frac), HeadSource::GeometricOnly};
    }
  }

  const TrackerConfig fc = cfg.filter_config(base);
  const double period = 1.0 / seg.fps;
  std::vector<FilterInput> inputs;
  for (std::size_t k = *first; k <= last; ++k) {
    FilterInput in;
    in.frame_index = seg.frames[k].index;
    in.dt = k == *first ? 0.0 : period * static_cast<double>(seg.frames[k].index - seg.frames[k - 1].index);
    if (meas[k]) in.measurement = Measurement{*meas[k], 1.0};
    inputs.push_back(in);
  }
  const FilterRun run = run_filter(init_state_at(*meas[*first], fc.init_pos_var, fc), inputs, fc, seg.width, seg.height);

  const std::size_t begin = std::max(tail_begin, *first);
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t k = begin; k <= last; ++k) {
    const Point2 p = run.smoothed[k - *first].position();
    sx += p.x;
    sy += p.y;
  }
  const double n = static_cast<double>(last - begin + 1);
  return {sx / n, sy / n, HeadSource::KeypointsOnly};
}

/// Tackler head-centre: keypoint y averaged with the geometric prior; x from
/// the keypoints. Without usable keypoints, pure geometry at the box centre.
inline HeadEstimate tackler_head(const PersonDetection& p, const HeadConfig& cfg) {
  const double geo_y = geometric_head_y(p.bbox, cfg.head_frac);
  if (auto kp = head_center(p)) return {kp->x, 0.5 * (kp->y + geo_y), HeadSource::Fused};
  return {bbox_center(p.bbox).x, geo_y, HeadSource::GeometricOnly};
}

}  // namespace tacklerisk
