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

// Ball-carrier, tackle frame and tackler resolution.
//
// Person indices always refer to the frame's original `persons` list, even
// when small (far-background) detections have been filtered out.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tacklerisk/detection.hpp"
#include "tacklerisk/errors.hpp"

namespace tacklerisk {

struct ResolverConfig {
  int tackle_frame_offset = 0;          // frames, in [-5, 0]
  double min_person_height_frac = 0.14;  // of frame height

  void validate() const {
    if (tackle_frame_offset < -5 || tackle_frame_offset > 0)
      throw InvariantError("tackle_frame_offset must lie in [-5, 0]");
    if (!(min_person_height_frac >= 0.0 && min_person_height_frac < 1.0))
      throw InvariantError("min_person_height_frac must lie in [0, 1)");
  }
};

struct RoleAssignment {
  std::size_t tackle_frame = 0;  // position within Segment::frames
  std::vector<std::optional<std::size_t>> carrier_index_per_frame;
  std::size_t tackler_index = 0;
};

/// Indices of persons tall enough to take part in role logic.
inline std::vector<std::size_t> eligible_persons(const FrameRecord& frame, double frame_height,
                                                 const ResolverConfig& cfg) {
  std::vector<std::size_t> out;
  const double min_h = cfg.min_person_height_frac * frame_height;
  for (std::size_t i = 0; i < frame.persons.size(); ++i) {
    if (frame.persons[i].bbox.height() >= min_h) out.push_back(i);
  }
  return out;
}

namespace detail {
inline std::vector<std::size_t> all_indices(const FrameRecord& frame) {
  std::vector<std::size_t> out(frame.persons.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}
}  // namespace detail

/// Person whose bbox centre is nearest the ball; lowest index on ties.
inline std::optional<std::size_t> find_carrier(const FrameRecord& frame, Point2 ball,
                                               std::span<const std::size_t> candidates) {
  std::optional<std::size_t> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i : candidates) {
    const double d = distance(bbox_center(frame.persons[i].bbox), ball);
    if (d < best_d || (d == best_d && best && i < *best)) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

inline std::optional<std::size_t> find_carrier(const FrameRecord& frame, Point2 ball) {
  const auto all = detail::all_indices(frame);
  return find_carrier(frame, ball, all);
}

/// Whether any other candidate overlaps the carrier in this frame.
inline bool carrier_contacted(const FrameRecord& frame, std::size_t carrier, std::span<const std::size_t> candidates) {
  const BBox& cb = frame.persons[carrier].bbox;
  return std::any_of(candidates.begin(), candidates.end(),
                     [&](std::size_t i) { return i != carrier && overlaps(frame.persons[i].bbox, cb); });
}

/// Last frame (position) where a non-carrier person overlaps the carrier,
/// shifted by the configured offset and clamped to the segment. Throws
/// PipelineError(NoTackleFrame) when no overlap ever occurs.
inline std::size_t find_tackle_frame(const Segment& seg, std::span<const std::optional<std::size_t>> carriers,
                                     const ResolverConfig& cfg) {
  std::optional<std::size_t> last;
  for (std::size_t k = 0; k < seg.frames.size() && k < carriers.size(); ++k) {
    if (!carriers[k]) continue;
    const auto cand = eligible_persons(seg.frames[k], seg.height, cfg);
    if (carrier_contacted(seg.frames[k], *carriers[k], cand)) last = k;
  }
  if (!last) throw PipelineError(FailureReason::NoTackleFrame, "no bbox overlap with the ball-carrier in any frame");
  const long shifted = static_cast<long>(*last) + cfg.tackle_frame_offset;
  return static_cast<std::size_t>(std::clamp(shifted, 0L, static_cast<long>(seg.frames.size()) - 1));
}

struct TacklerChoice {
  std::size_t index = 0;
  bool height_filter_dropped = false;
};

/// Among the other candidates whose bbox-centre y lies within the carrier's
/// vertical extent, the one horizontally closest to the carrier. If nobody
/// passes the height test it is dropped and horizontal distance alone decides.
inline TacklerChoice find_tackler(const FrameRecord& frame, std::size_t carrier, std::span<const std::size_t> candidates) {
  const BBox& cb = frame.persons[carrier].bbox;
  const double cx = bbox_center(cb).x;
  auto pick = [&](bool use_height) -> std::optional<std::size_t> {
    std::optional<std::size_t> best;
    double best_dx = std::numeric_limits<double>::infinity();
    for (std::size_t i : candidates) {
      if (i == carrier) continue;
      const Point2 c = bbox_center(frame.persons[i].bbox);
      if (use_height && (c.y < cb.y_min || c.y > cb.y_max)) continue;
      const double dx = std::abs(c.x - cx);
      if (dx < best_dx || (dx == best_dx && best && i < *best)) {
        best = i;
        best_dx = dx;
      }
    }
    return best;
  };
  if (auto i = pick(true)) return {*i, false};
  if (auto i = pick(false)) return {*i, true};
  throw PipelineError(FailureReason::NoTackler, "no person other than the ball-carrier in the tackle frame");
}

inline TacklerChoice find_tackler(const FrameRecord& frame, std::size_t carrier) {
  const auto all = detail::all_indices(frame);
  return find_tackler(frame, carrier, all);
}

}  // namespace tacklerisk
