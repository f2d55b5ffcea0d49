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

// Canonical segment JSON and ground-truth CSV.
//
// Segment schema:
//   { "id": str, "width": int, "height": int, "fps": number,
//     "frames": [ { "index": int,
//                   "balls":   [ {"bbox": [x_min, y_min, x_max, y_max], "confidence": number} ],
//                   "persons": [ {"bbox": [...], "keypoints": [[x, y, score] | null] x 18} ] } ] }
//
// "keypoints" may be omitted or null for a person without pose. Keypoint
// slots follow BodyPart ordering.
//
// Labels CSV: header `segment_id,label`, label in {high, low}.

#pragma once

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tacklerisk/detection.hpp"
#include "tacklerisk/errors.hpp"

namespace tacklerisk {

namespace detail {

using nlohmann::json;

inline const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "." + key, "missing required field \"" + std::string(key) + "\"");
  return *it;
}

inline double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected number");
  return v.get<double>();
}

inline std::int64_t as_integer(const json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.0e15) return static_cast<std::int64_t>(d);
  }
  throw SchemaError(path, "expected integer");
}

inline const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path, "expected array");
  return v;
}

inline BBox parse_bbox(const json& v, const std::string& path) {
  as_array(v, path);
  if (v.size() != 4) throw SchemaError(path, "bbox must have 4 elements");
  BBox b{as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]"), as_number(v[2], path + "[2]"),
         as_number(v[3], path + "[3]")};
  if (!is_valid(b)) throw InvariantError(path + ": bbox must be finite, non-negative and ordered");
  return b;
}

inline KeypointSet parse_keypoints(const json& v, const std::string& path) {
  as_array(v, path);
  if (v.size() != kNumKeypoints) throw SchemaError(path, "expected 18 keypoint entries");
  KeypointSet out;
  for (std::size_t i = 0; i < kNumKeypoints; ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const json& e = v[i];
    if (e.is_null()) continue;
    as_array(e, p);
    if (e.size() != 3) throw SchemaError(p, "keypoint must be [x, y, score] or null");
    Keypoint kp{as_number(e[0], p + "[0]"), as_number(e[1], p + "[1]"), as_number(e[2], p + "[2]")};
    if (!std::isfinite(kp.x) || !std::isfinite(kp.y)) throw InvariantError(p + ": keypoint not finite");
    if (!(kp.score >= 0.0 && kp.score <= 1.0)) throw InvariantError(p + ": keypoint score outside [0, 1]");
    out.points[i] = kp;
  }
  return out;
}

inline json bbox_json(const BBox& b) { return json::array({b.x_min, b.y_min, b.x_max, b.y_max}); }

}  // namespace detail

/// Parses and fully validates a canonical segment document. Malformed data is
/// rejected, never repaired.
inline Segment parse_segment(std::string_view raw) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(raw.begin(), raw.end());
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("$", "expected object");

  Segment seg;
  const json& id = detail::require(doc, "id", "$");
  if (!id.is_string()) throw SchemaError("$.id", "expected string");
  seg.id = id.get<std::string>();
  seg.width = static_cast<int>(detail::as_integer(detail::require(doc, "width", "$"), "$.width"));
  seg.height = static_cast<int>(detail::as_integer(detail::require(doc, "height", "$"), "$.height"));
  seg.fps = detail::as_number(detail::require(doc, "fps", "$"), "$.fps");

  const json& frames = detail::as_array(detail::require(doc, "frames", "$"), "$.frames");
  seg.frames.reserve(frames.size());
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const std::string fp = "$.frames[" + std::to_string(k) + "]";
    const json& fj = frames[k];
    FrameRecord fr;
    fr.index = detail::as_integer(detail::require(fj, "index", fp), fp + ".index");

    const json& balls = detail::as_array(detail::require(fj, "balls", fp), fp + ".balls");
    for (std::size_t i = 0; i < balls.size(); ++i) {
      const std::string bp = fp + ".balls[" + std::to_string(i) + "]";
      BallDetection b;
      b.bbox = detail::parse_bbox(detail::require(balls[i], "bbox", bp), bp + ".bbox");
      b.confidence = detail::as_number(detail::require(balls[i], "confidence", bp), bp + ".confidence");
      fr.balls.push_back(b);
    }

    const json& persons = detail::as_array(detail::require(fj, "persons", fp), fp + ".persons");
    for (std::size_t i = 0; i < persons.size(); ++i) {
      const std::string pp = fp + ".persons[" + std::to_string(i) + "]";
      PersonDetection p;
      p.bbox = detail::parse_bbox(detail::require(persons[i], "bbox", pp), pp + ".bbox");
      auto it = persons[i].find("keypoints");
      if (it != persons[i].end() && !it->is_null()) p.keypoints = detail::parse_keypoints(*it, pp + ".keypoints");
      fr.persons.push_back(std::move(p));
    }
    seg.frames.push_back(std::move(fr));
  }

  validate(seg);
  return seg;
}

inline nlohmann::json segment_to_json(const Segment& seg) {
  using detail::json;
  json frames = json::array();
  for (const FrameRecord& f : seg.frames) {
    json balls = json::array();
    for (const BallDetection& b : f.balls) balls.push_back({{"bbox", detail::bbox_json(b.bbox)}, {"confidence", b.confidence}});
    json persons = json::array();
    for (const PersonDetection& p : f.persons) {
      json pj = {{"bbox", detail::bbox_json(p.bbox)}};
      if (p.keypoints) {
        json kps = json::array();
        for (const auto& kp : p.keypoints->points) {
          if (kp)
            kps.push_back(json::array({kp->x, kp->y, kp->score}));
          else
            kps.push_back(nullptr);
        }
        pj["keypoints"] = std::move(kps);
      } else {
        pj["keypoints"] = nullptr;
      }
      persons.push_back(std::move(pj));
    }
    frames.push_back({{"index", f.index}, {"balls", std::move(balls)}, {"persons", std::move(persons)}});
  }
  return {{"id", seg.id},
          {"width", seg.width},
          {"height", seg.height},
          {"fps", seg.fps},
          {"frames", std::move(frames)}};
}

/// Compact canonical text. Doubles are written with shortest round-trip
/// precision, so parse_segment(serialize_segment(s)) == s.
inline std::string serialize_segment(const Segment& seg) { return segment_to_json(seg).dump(); }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Segment load_segment(const std::string& path) { return parse_segment(read_file(path)); }

inline std::vector<GroundTruthLabel> parse_labels_csv(std::string_view text) {
  std::vector<GroundTruthLabel> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "segment_id,label") throw SchemaError("line 1", "expected header `segment_id,label`");
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    const std::string where = "line " + std::to_string(lineno);
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      throw SchemaError(where, "expected two columns");
    GroundTruthLabel g;
    g.segment_id = line.substr(0, comma);
    if (g.segment_id.empty()) throw InvariantError(where + ": empty segment_id");
    auto label = parse_risk_label(line.substr(comma + 1));
    if (!label) throw SchemaError(where, "label must be `high` or `low`");
    g.label = *label;
    out.push_back(std::move(g));
  }
  if (!header_seen) throw SchemaError("line 1", "expected header `segment_id,label`");
  return out;
}

inline std::string labels_to_csv(const std::vector<GroundTruthLabel>& labels) {
  std::string out = "segment_id,label\n";
  for (const auto& g : labels) {
    out += g.segment_id;
    out += ',';
    out += to_string(g.label);
    out += '\n';
  }
  return out;
}

}  // namespace tacklerisk
