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

// High-risk region test and the per-segment pipeline:
// ball track -> carrier per frame -> tackle frame -> tackler -> head centres
// -> region labels.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "tacklerisk/ball_tracker.hpp"
#include "tacklerisk/detection.hpp"
#include "tacklerisk/errors.hpp"
#include "tacklerisk/head.hpp"
#include "tacklerisk/roles.hpp"

namespace tacklerisk {

inline constexpr double kPctTolerance = 1e-9;

struct RiskConfig {
  std::vector<double> region_pcts{0.05, 0.10, 0.15, 0.20, 0.25};
  double primary_pct = 0.15;

  void validate() const {
    if (region_pcts.empty()) throw InvariantError("region_pcts must not be empty");
    for (double p : region_pcts) {
      if (!(p > 0.0 && p <= 0.5)) throw InvariantError("region pct must lie in (0, 0.5]");
    }
    if (!index_of(primary_pct)) throw InvariantError("primary_pct must be one of region_pcts");
  }

  std::optional<std::size_t> index_of(double pct) const {
    for (std::size_t i = 0; i < region_pcts.size(); ++i) {
      if (std::abs(region_pcts[i] - pct) <= kPctTolerance) return i;
    }
    return std::nullopt;
  }
};

struct RiskRegion {
  double y_low = 0.0;
  double y_high = 0.0;
};

/// Band centred on the carrier head with half-height pct * carrier box height.
inline RiskRegion risk_region(double carrier_head_y, double carrier_bbox_height, double pct) {
  const double half = pct * carrier_bbox_height;
  return {carrier_head_y - half, carrier_head_y + half};
}

/// Boundary inclusive.
inline RiskLabel classify(double tackler_head_y, const RiskRegion& r) {
  return (tackler_head_y >= r.y_low && tackler_head_y <= r.y_high) ? RiskLabel::High : RiskLabel::Low;
}

struct RegionResult {
  double pct = 0.0;
  RiskRegion region;
  RiskLabel label = RiskLabel::Low;
};

/// Compact per-frame reference into the ball track; `cmd_track` gives the
/// full dump.
struct TrackSummary {
  std::size_t frames = 0;
  std::size_t accepted = 0;
  std::size_t low_confidence = 0;
  std::size_t no_measurement = 0;
  std::vector<std::int64_t> gate_exceeded;  // frame indices
};

inline TrackSummary summarize(const BallTrack& t) {
  TrackSummary s;
  s.frames = t.diagnostics.size();
  for (const auto& d : t.diagnostics) {
    switch (d.reason) {
      case RejectionReason::None: ++s.accepted; break;
      case RejectionReason::LowConfidence: ++s.low_confidence; break;
      case RejectionReason::NoMeasurement: ++s.no_measurement; break;
      case RejectionReason::GateExceeded: s.gate_exceeded.push_back(d.frame_index); break;
    }
  }
  return s;
}

struct TackleAssessment {
  std::string segment_id;
  std::size_t tackle_frame = 0;        // position in Segment::frames
  std::int64_t tackle_frame_index = 0;  // FrameRecord::index at that position
  std::size_t carrier_index = 0;
  std::size_t tackler_index = 0;
  std::vector<std::optional<std::size_t>> carrier_index_per_frame;
  HeadEstimate carrier_head;
  HeadEstimate tackler_head;
  std::vector<RegionResult> regions;
  std::vector<std::string> warnings;
  TrackSummary ball_track;

  std::optional<RiskLabel> label_at(double pct) const {
    for (const auto& r : regions) {
      if (std::abs(r.pct - pct) <= kPctTolerance) return r.label;
    }
    return std::nullopt;
  }
};

struct SegmentFailure {
  std::string segment_id;
  FailureReason reason = FailureReason::NoTackleFrame;
  std::string message;
};

/// Either a full assessment or a failure; failures count toward the total.
using SegmentOutcome = std::variant<TackleAssessment, SegmentFailure>;

struct PipelineConfig {
  TrackerConfig tracker;
  ResolverConfig resolver;
  HeadConfig head;
  RiskConfig risk;

  void validate() const {
    tracker.validate();
    resolver.validate();
    head.validate();
    risk.validate();
  }
};

/// Ball-carrier for every frame, resolved from a ball position per frame.
inline std::vector<std::optional<std::size_t>> resolve_carriers(const Segment& seg, std::span<const Point2> ball,
                                                                const ResolverConfig& cfg) {
  std::vector<std::optional<std::size_t>> out(seg.frames.size());
  for (std::size_t k = 0; k < seg.frames.size(); ++k) {
    const auto cand = eligible_persons(seg.frames[k], seg.height, cfg);
    out[k] = find_carrier(seg.frames[k], ball[k], cand);
  }
  return out;
}

/// Full pipeline for one segment. Throws PipelineError (including
/// DivergenceError) when the segment cannot be evaluated.
inline TackleAssessment evaluate_segment(const Segment& seg, const PipelineConfig& cfg) {
  cfg.validate();
  TackleAssessment a;
  a.segment_id = seg.id;
  a.warnings = validation_warnings(seg);

  const BallTrack track = track_ball(seg, cfg.tracker);
  a.ball_track = summarize(track);
  a.carrier_index_per_frame = resolve_carriers(seg, track.smoothed, cfg.resolver);

  // A tackle needs a second player somewhere in the segment.
  bool any_other = false;
  for (std::size_t k = 0; k < seg.frames.size() && !any_other; ++k) {
    any_other = a.carrier_index_per_frame[k] && eligible_persons(seg.frames[k], seg.height, cfg.resolver).size() >= 2;
  }
  if (!any_other) throw PipelineError(FailureReason::NoTackler, "no person other than the ball-carrier in any frame");

  a.tackle_frame = find_tackle_frame(seg, a.carrier_index_per_frame, cfg.resolver);
  const FrameRecord& tf = seg.frames[a.tackle_frame];
  a.tackle_frame_index = tf.index;
  if (!a.carrier_index_per_frame[a.tackle_frame])
    throw PipelineError(FailureReason::NoTackler, "no ball-carrier in the tackle frame");
  a.carrier_index = *a.carrier_index_per_frame[a.tackle_frame];

  const auto cand = eligible_persons(tf, seg.height, cfg.resolver);
  const TacklerChoice tc = find_tackler(tf, a.carrier_index, cand);
  a.tackler_index = tc.index;
  if (tc.height_filter_dropped)
    a.warnings.push_back("no tackler candidate within the carrier's height range; using horizontal distance only");

  a.carrier_head = carrier_head(seg, a.carrier_index_per_frame, a.tackle_frame, cfg.head, cfg.tracker);
  a.tackler_head = tackler_head(tf.persons[a.tackler_index], cfg.head);

  const double carrier_h = tf.persons[a.carrier_index].bbox.height();
  if (!(carrier_h > 0.0)) throw PipelineError(FailureReason::NoCarrierHead, "ball-carrier box has zero height");
  for (double pct : cfg.risk.region_pcts) {
    RegionResult r;
    r.pct = pct;
    r.region = risk_region(a.carrier_head.y, carrier_h, pct);
    r.label = classify(a.tackler_head.y, r.region);
    a.regions.push_back(r);
  }
  return a;
}

inline SegmentOutcome assess_segment(const Segment& seg, const PipelineConfig& cfg) {
  try {
    return evaluate_segment(seg, cfg);
  } catch (const PipelineError& e) {
    return SegmentFailure{seg.id, e.reason(), e.what()};
  }
}

inline nlohmann::json head_json(const HeadEstimate& h) {
  return {{"x", h.x}, {"y", h.y}, {"source", std::string(to_string(h.source))}};
}

inline nlohmann::json outcome_to_json(const SegmentOutcome& o) {
  using nlohmann::json;
  if (const auto* f = std::get_if<SegmentFailure>(&o)) {
    return {{"status", "failed"},
            {"segment_id", f->segment_id},
            {"reason", std::string(to_string(f->reason))},
            {"message", f->message}};
  }
  const auto& a = std::get<TackleAssessment>(o);
  json carriers = json::array();
  for (const auto& c : a.carrier_index_per_frame) {
    if (c)
      carriers.push_back(*c);
    else
      carriers.push_back(nullptr);
  }
  json regions = json::array();
  for (const auto& r : a.regions) {
    regions.push_back({{"pct", r.pct},
                       {"y_low", r.region.y_low},
                       {"y_high", r.region.y_high},
                       {"label", std::string(to_string(r.label))}});
  }
  return {{"status", "ok"},
          {"segment_id", a.segment_id},
          {"tackle_frame", a.tackle_frame_index},
          {"tackle_frame_position", a.tackle_frame},
          {"carrier_index", a.carrier_index},
          {"tackler_index", a.tackler_index},
          {"carrier_index_per_frame", std::move(carriers)},
          {"carrier_head", head_json(a.carrier_head)},
          {"tackler_head", head_json(a.tackler_head)},
          {"regions", std::move(regions)},
          {"warnings", a.warnings},
          {"ball_track",
           {{"frames", a.ball_track.frames},
            {"accepted", a.ball_track.accepted},
            {"low_confidence", a.ball_track.low_confidence},
            {"no_measurement", a.ball_track.no_measurement},
            {"gate_exceeded", a.ball_track.gate_exceeded}}}};
}

}  // namespace tacklerisk
