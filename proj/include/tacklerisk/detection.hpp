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

// Domain types for a tackle segment: per-frame ball candidates and person
// detections (with optional 18-point pose keypoints), plus the geometric
// primitives the rest of the pipeline is built on.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tacklerisk/errors.hpp"

namespace tacklerisk {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Axis-aligned box in continuous image pixels (y grows downward).
struct BBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }

  friend bool operator==(const BBox&, const BBox&) = default;
};

inline bool is_valid(const BBox& b) {
  const std::array<double, 4> v{b.x_min, b.y_min, b.x_max, b.y_max};
  for (double c : v) {
    if (!std::isfinite(c) || c < 0.0) return false;
  }
  return b.x_min <= b.x_max && b.y_min <= b.y_max;
}

inline Point2 bbox_center(const BBox& b) {
  return {(b.x_min + b.x_max) / 2.0, (b.y_min + b.y_max) / 2.0};
}

inline double intersection_area(const BBox& a, const BBox& b) {
  const double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

/// Intersection over union. Zero for disjoint boxes and whenever the union
/// has no area.
inline double iou(const BBox& a, const BBox& b) {
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

/// Strictly positive intersection area; boxes that only share an edge do not
/// overlap.
inline bool overlaps(const BBox& a, const BBox& b) { return intersection_area(a, b) > 0.0; }

/// Box grown by `frac` of its size on every side.
inline BBox inflate(const BBox& b, double frac) {
  const double dx = b.width() * frac;
  const double dy = b.height() * frac;
  return {b.x_min - dx, b.y_min - dy, b.x_max + dx, b.y_max + dy};
}

inline bool contains(const BBox& b, Point2 p) {
  return p.x >= b.x_min && p.x <= b.x_max && p.y >= b.y_min && p.y <= b.y_max;
}

struct BallDetection {
  BBox bbox;
  double confidence = 0.0;  // detector objectness x IoU, in [0, 1]
  friend bool operator==(const BallDetection&, const BallDetection&) = default;
};

struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  double score = 0.0;
  Point2 pos() const { return {x, y}; }
  friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

/// 18-part body layout emitted by the pose extractor.
enum class BodyPart : std::size_t {
  Nose = 0,
  Neck = 1,
  RShoulder = 2,
  RElbow = 3,
  RWrist = 4,
  LShoulder = 5,
  LElbow = 6,
  LWrist = 7,
  RHip = 8,
  RKnee = 9,
  RAnkle = 10,
  LHip = 11,
  LKnee = 12,
  LAnkle = 13,
  REye = 14,
  LEye = 15,
  REar = 16,
  LEar = 17,
};

inline constexpr std::size_t kNumKeypoints = 18;

inline constexpr std::array<BodyPart, 5> kFacialParts{BodyPart::Nose, BodyPart::LEye,
                                                      BodyPart::REye, BodyPart::LEar,
                                                      BodyPart::REar};

struct KeypointSet {
  std::array<std::optional<Keypoint>, kNumKeypoints> points{};

  const std::optional<Keypoint>& operator[](BodyPart p) const {
    return points[static_cast<std::size_t>(p)];
  }
  std::optional<Keypoint>& operator[](BodyPart p) { return points[static_cast<std::size_t>(p)]; }

  friend bool operator==(const KeypointSet&, const KeypointSet&) = default;
};

struct PersonDetection {
  BBox bbox;
  std::optional<KeypointSet> keypoints;
  friend bool operator==(const PersonDetection&, const PersonDetection&) = default;
};

struct FrameRecord {
  std::int64_t index = 0;
  std::vector<BallDetection> balls;
  std::vector<PersonDetection> persons;
  friend bool operator==(const FrameRecord&, const FrameRecord&) = default;
};

struct Segment {
  std::string id;
  int width = 0;
  int height = 0;
  double fps = 0.0;
  std::vector<FrameRecord> frames;
  friend bool operator==(const Segment&, const Segment&) = default;
};

enum class RiskLabel { High, Low };

inline std::string_view to_string(RiskLabel l) { return l == RiskLabel::High ? "high" : "low"; }

inline std::optional<RiskLabel> parse_risk_label(std::string_view s) {
  if (s == "high") return RiskLabel::High;
  if (s == "low") return RiskLabel::Low;
  return std::nullopt;
}

struct GroundTruthLabel {
  std::string segment_id;
  RiskLabel label = RiskLabel::Low;
  friend bool operator==(const GroundTruthLabel&, const GroundTruthLabel&) = default;
};

/// Throws InvariantError on the first violated segment invariant.
inline void validate(const Segment& seg) {
  if (seg.width <= 0 || seg.height <= 0) throw InvariantError("segment dimensions must be positive");
  if (!(seg.fps >= 1.0 && seg.fps <= 240.0)) throw InvariantError("fps must lie in [1, 240]");
  if (seg.frames.empty()) throw InvariantError("segment has no frames");
  for (std::size_t k = 0; k < seg.frames.size(); ++k) {
    const FrameRecord& f = seg.frames[k];
    const std::string where = "frame " + std::to_string(f.index);
    if (f.index < 0) throw InvariantError(where + ": negative index");
    if (k > 0 && f.index <= seg.frames[k - 1].index)
      throw InvariantError(where + ": frame indices must be strictly increasing");
    for (const BallDetection& b : f.balls) {
      if (!is_valid(b.bbox)) throw InvariantError(where + ": invalid ball bbox");
      if (!(b.confidence >= 0.0 && b.confidence <= 1.0))
        throw InvariantError(where + ": ball confidence outside [0, 1]");
    }
    for (const PersonDetection& p : f.persons) {
      if (!is_valid(p.bbox)) throw InvariantError(where + ": invalid person bbox");
      if (!p.keypoints) continue;
      for (const auto& kp : p.keypoints->points) {
        if (!kp) continue;
        if (!std::isfinite(kp->x) || !std::isfinite(kp->y))
          throw InvariantError(where + ": non-finite keypoint");
        if (!(kp->score >= 0.0 && kp->score <= 1.0))
          throw InvariantError(where + ": keypoint score outside [0, 1]");
      }
    }
  }
}

/// Soft checks that do not reject a segment: keypoints lying outside their
/// person's box inflated by 10%.
inline std::vector<std::string> validation_warnings(const Segment& seg) {
  std::vector<std::string> out;
  for (const FrameRecord& f : seg.frames) {
    for (std::size_t i = 0; i < f.persons.size(); ++i) {
      const PersonDetection& p = f.persons[i];
      if (!p.keypoints) continue;
      const BBox grown = inflate(p.bbox, 0.10);
      for (const auto& kp : p.keypoints->points) {
        if (kp && !contains(grown, kp->pos())) {
          out.push_back("frame " + std::to_string(f.index) + " person " + std::to_string(i) +
                        ": keypoint outside inflated bbox");
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace tacklerisk
