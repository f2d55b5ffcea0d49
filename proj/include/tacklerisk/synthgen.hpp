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

// Seeded generator of synthetic tackle segments with known ground truth.
//
// Scene model: the ball-carrier runs with constant acceleration and carries
// the ball at chest height. The tackler starts `start_dx` pixels to the side
// of the carrier and closes linearly to `end_dx` at the last frame, sharing
// the carrier's ground line; its box is cropped from the top so that its head
// centre sits `head_offset_frac` carrier-heights below the carrier's head.
// Spectators drift at constant velocity. Keypoints come from a fixed
// stick-figure layout whose facial points average to the head centre at
// `head_frac` of the box height.

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tacklerisk/detection.hpp"
#include "tacklerisk/errors.hpp"
#include "tacklerisk/segment_io.hpp"

namespace tacklerisk {

/// Portable normal sampler: mt19937_64 bits through Box-Muller, so corpora are
/// identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    // 53 random bits -> [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal(double mean, double stddev) {
    if (stddev == 0.0) return mean;
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return mean + stddev * z;
  }

 private:
  std::mt19937_64 engine_;
};

struct CarrierSpec {
  double start_x = 640.0;  // box centre x at frame 0
  double feet_y = 620.0;   // box bottom at frame 0
  double velocity_x = 60.0;
  double velocity_y = 0.0;
  double accel_x = 0.0;
  double accel_y = 0.0;
  double body_height = 320.0;
};

struct TacklerSpec {
  double start_dx = 400.0;  // horizontal offset from the carrier at frame 0
  double end_dx = 70.0;     // offset at the final frame
  double head_offset_frac = 0.0;
};

struct SpectatorSpec {
  double start_x = 100.0;
  double feet_y = 600.0;
  double velocity_x = 0.0;
  double body_height = 280.0;
};

struct NoiseSpec {
  double ball_mean_x = -0.43;
  double ball_mean_y = -0.09;
  double ball_std_x = 2.65;
  double ball_std_y = 3.46;
  double keypoint_std = 0.0;
  double bbox_std = 0.0;
};

struct OutlierSpec {
  std::size_t frame = 0;
  double dx = 0.0;
  double dy = 0.0;
  double confidence = 0.9;
};

struct ScenarioSpec {
  std::string id = "scenario";
  std::uint64_t seed = 0;
  std::size_t n_frames = 30;
  double fps = 30.0;
  int width = 1280;
  int height = 720;
  CarrierSpec carrier;
  std::optional<TacklerSpec> tackler = TacklerSpec{};
  std::vector<SpectatorSpec> spectators;
  NoiseSpec noise;
  std::vector<OutlierSpec> outliers;
  double ball_confidence = 0.9;
  double head_frac = 0.075;
  bool allow_no_contact = false;
  std::optional<RiskLabel> label;  // overrides the geometric truth in the labels CSV
  std::vector<double> truth_pcts{0.05, 0.10, 0.15, 0.20, 0.25};
  double primary_pct = 0.15;
};

struct ScenarioTruth {
  std::vector<Point2> ball;
  std::vector<Point2> carrier_head;
  std::vector<std::optional<Point2>> tackler_head;
  std::optional<std::size_t> tackle_frame;
  std::vector<std::pair<double, RiskLabel>> labels;  // per truth pct
  RiskLabel label = RiskLabel::Low;                  // CSV label
};

inline constexpr double kChestFrac = 0.35;
inline constexpr double kBodyWidthFrac = 0.4;
inline constexpr double kBallSizeFrac = 0.06;
inline constexpr double kKeypointScore = 0.9;

namespace synth {

struct Body {
  double cx = 0.0;
  double top = 0.0;
  double height = 0.0;

  BBox box() const {
    const double hw = 0.5 * kBodyWidthFrac * height;
    return {cx - hw, top, cx + hw, top + height};
  }
};

/// Stick-figure keypoints as (dx, dy) fractions of body height from
/// (centre x, box top). Facial entries are relative to the head centre.
inline KeypointSet stick_figure(const Body& b, double head_frac, Rng& rng, double jitter) {
  struct Off {
    BodyPart part;
    double dx, dy;
    bool facial;
  };
  static constexpr Off kLayout[] = {
      {BodyPart::Nose, 0.0, 0.01, true},        {BodyPart::REye, -0.02, -0.005, true},
      {BodyPart::LEye, 0.02, -0.005, true},     {BodyPart::REar, -0.04, 0.0, true},
      {BodyPart::LEar, 0.04, 0.0, true},        {BodyPart::Neck, 0.0, 0.16, false},
      {BodyPart::RShoulder, -0.12, 0.19, false}, {BodyPart::LShoulder, 0.12, 0.19, false},
      {BodyPart::RElbow, -0.15, 0.33, false},   {BodyPart::LElbow, 0.15, 0.33, false},
      {BodyPart::RWrist, -0.13, 0.45, false},   {BodyPart::LWrist, 0.13, 0.45, false},
      {BodyPart::RHip, -0.07, 0.52, false},     {BodyPart::LHip, 0.07, 0.52, false},
      {BodyPart::RKnee, -0.07, 0.74, false},    {BodyPart::LKnee, 0.07, 0.74, false},
      {BodyPart::RAnkle, -0.07, 0.96, false},   {BodyPart::LAnkle, 0.07, 0.96, false},
  };
  KeypointSet kp;
  const double head_y = b.top + head_frac * b.height;
  for (const Off& o : kLayout) {
    const double base_y = o.facial ? head_y : b.top;
    const double x = b.cx + o.dx * b.height + rng.normal(0.0, jitter);
    const double y = base_y + o.dy * b.height + rng.normal(0.0, jitter);
    kp[o.part] = Keypoint{x, y, kKeypointScore};
  }
  return kp;
}

inline BBox clamp_box(BBox b) {
  b.x_min = std::max(0.0, b.x_min);
  b.y_min = std::max(0.0, b.y_min);
  b.x_max = std::max(b.x_min, b.x_max);
  b.y_max = std::max(b.y_min, b.y_max);
  return b;
}

inline BBox jitter_box(const BBox& b, Rng& rng, double std) {
  const double dx = rng.normal(0.0, std);
  const double dy = rng.normal(0.0, std);
  return clamp_box({b.x_min + dx, b.y_min + dy, b.x_max + dx, b.y_max + dy});
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw GeneratorError(GeneratorError::Kind::InvalidSpec, what);
}

}  // namespace synth

inline void validate(const ScenarioSpec& s) {
  using synth::require;
  require(!s.id.empty(), "scenario id must not be empty");
  require(s.n_frames >= 3, s.id + ": n_frames must be at least 3");
  require(s.fps >= 1.0 && s.fps <= 240.0, s.id + ": fps must lie in [1, 240]");
  require(s.width > 0 && s.height > 0, s.id + ": frame dimensions must be positive");
  require(s.head_frac > 0.0 && s.head_frac < 0.5, s.id + ": head_frac must lie in (0, 0.5)");
  require(s.ball_confidence >= 0.0 && s.ball_confidence <= 1.0, s.id + ": ball_confidence outside [0, 1]");
  const double min_h = 0.14 * s.height;
  require(s.carrier.body_height > min_h, s.id + ": carrier body height must exceed 14% of frame height");
  if (s.tackler) {
    const double a = s.tackler->head_offset_frac / (1.0 - s.head_frac);
    require(s.carrier.body_height * (1.0 - a) > min_h, s.id + ": tackler body height must exceed 14% of frame height");
  }
  for (const auto& o : s.outliers) {
    require(o.frame < s.n_frames, s.id + ": outlier frame out of range");
    require(o.confidence >= 0.0 && o.confidence <= 1.0, s.id + ": outlier confidence outside [0, 1]");
  }
  const NoiseSpec& n = s.noise;
  require(n.ball_std_x >= 0.0 && n.ball_std_y >= 0.0 && n.keypoint_std >= 0.0 && n.bbox_std >= 0.0,
          s.id + ": noise std must be non-negative");
}

/// Builds the segment and its ground truth. Deterministic for a fixed spec.
inline std::pair<Segment, ScenarioTruth> gen_segment(const ScenarioSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  Segment seg;
  seg.id = spec.id;
  seg.width = spec.width;
  seg.height = spec.height;
  seg.fps = spec.fps;

  ScenarioTruth truth;
  const CarrierSpec& c = spec.carrier;
  const double H = c.body_height;
  const double last_t = static_cast<double>(spec.n_frames - 1);

  std::optional<std::size_t> last_contact;
  for (std::size_t k = 0; k < spec.n_frames; ++k) {
    const double t = static_cast<double>(k) / spec.fps;
    synth::Body carrier{c.start_x + c.velocity_x * t + 0.5 * c.accel_x * t * t, 0.0, H};
    const double feet = c.feet_y + c.velocity_y * t + 0.5 * c.accel_y * t * t;
    carrier.top = feet - H;

    const Point2 ball{carrier.cx, carrier.top + kChestFrac * H};
    const Point2 c_head{carrier.cx, carrier.top + spec.head_frac * H};
    truth.ball.push_back(ball);
    truth.carrier_head.push_back(c_head);

    FrameRecord fr;
    fr.index = static_cast<std::int64_t>(k);

    // Ball detection: calibrated centre noise plus any scripted outlier.
    Point2 det{ball.x + rng.normal(spec.noise.ball_mean_x, spec.noise.ball_std_x),
               ball.y + rng.normal(spec.noise.ball_mean_y, spec.noise.ball_std_y)};
    double conf = spec.ball_confidence;
    for (const auto& o : spec.outliers) {
      if (o.frame == k) {
        det.x += o.dx;
        det.y += o.dy;
        conf = o.confidence;
      }
    }
    const double half = 0.5 * kBallSizeFrac * H;
    fr.balls.push_back({synth::clamp_box({det.x - half, det.y - half, det.x + half, det.y + half}), conf});

    PersonDetection cp{synth::jitter_box(carrier.box(), rng, spec.noise.bbox_std),
                       synth::stick_figure(carrier, spec.head_frac, rng, spec.noise.keypoint_std)};
    fr.persons.push_back(std::move(cp));

    if (spec.tackler) {
      const TacklerSpec& ts = *spec.tackler;
      const double frac = last_t > 0.0 ? static_cast<double>(k) / last_t : 1.0;
      const double dx = ts.start_dx + (ts.end_dx - ts.start_dx) * frac;
      const double top = carrier.top + ts.head_offset_frac * H / (1.0 - spec.head_frac);
      synth::Body tackler{carrier.cx + dx, top, feet - top};
      if (overlaps(tackler.box(), carrier.box())) last_contact = k;
      truth.tackler_head.push_back(Point2{tackler.cx, tackler.top + spec.head_frac * tackler.height});
      fr.persons.push_back({synth::jitter_box(tackler.box(), rng, spec.noise.bbox_std),
                            synth::stick_figure(tackler, spec.head_frac, rng, spec.noise.keypoint_std)});
    } else {
      truth.tackler_head.push_back(std::nullopt);
    }

    for (const SpectatorSpec& sp : spec.spectators) {
      synth::Body b{sp.start_x + sp.velocity_x * t, sp.feet_y - sp.body_height, sp.body_height};
      fr.persons.push_back({synth::jitter_box(b.box(), rng, spec.noise.bbox_std),
                            synth::stick_figure(b, spec.head_frac, rng, spec.noise.keypoint_std)});
    }
    seg.frames.push_back(std::move(fr));
  }

  if (!last_contact && !spec.allow_no_contact)
    throw GeneratorError(GeneratorError::Kind::Geometry, spec.id + ": tackler never overlaps the ball-carrier");
  truth.tackle_frame = last_contact;

  // Truth labels at the contact frame: tackler head inside the band centred
  // on the carrier head with half-height pct * H.
  for (double pct : spec.truth_pcts) {
    RiskLabel l = RiskLabel::Low;
    if (last_contact && truth.tackler_head[*last_contact]) {
      const double dy = truth.tackler_head[*last_contact]->y - truth.carrier_head[*last_contact].y;
      if (std::abs(dy) <= pct * H) l = RiskLabel::High;
    }
    truth.labels.emplace_back(pct, l);
    if (std::abs(pct - spec.primary_pct) < 1e-9) truth.label = l;
  }
  if (spec.label) truth.label = *spec.label;

  validate(seg);
  return {std::move(seg), std::move(truth)};
}

// --- JSON mirror of ScenarioSpec (used by the `gen` command) ---------------

namespace synth {

using nlohmann::json;

template <typename T>
void read_opt(const json& j, const char* key, T& out, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw GeneratorError(GeneratorError::Kind::InvalidSpec, where + "." + key + ": wrong type");
  }
}

inline void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw GeneratorError(GeneratorError::Kind::InvalidSpec, where + ": expected object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw GeneratorError(GeneratorError::Kind::InvalidSpec, where + ": unknown field \"" + it.key() + "\"");
  }
}

}  // namespace synth

inline ScenarioSpec scenario_from_json(const nlohmann::json& j, const std::string& where = "$") {
  using synth::check_keys;
  using synth::read_opt;
  check_keys(j,
             {"id", "seed", "n_frames", "fps", "width", "height", "carrier", "tackler", "spectators", "noise", "outliers",
              "ball_confidence", "head_frac", "allow_no_contact", "label", "truth_pcts", "primary_pct"},
             where);
  ScenarioSpec s;
  read_opt(j, "id", s.id, where);
  read_opt(j, "seed", s.seed, where);
  read_opt(j, "n_frames", s.n_frames, where);
  read_opt(j, "fps", s.fps, where);
  read_opt(j, "width", s.width, where);
  read_opt(j, "height", s.height, where);
  read_opt(j, "ball_confidence", s.ball_confidence, where);
  read_opt(j, "head_frac", s.head_frac, where);
  read_opt(j, "allow_no_contact", s.allow_no_contact, where);
  read_opt(j, "truth_pcts", s.truth_pcts, where);
  read_opt(j, "primary_pct", s.primary_pct, where);
  if (auto it = j.find("carrier"); it != j.end()) {
    const std::string w = where + ".carrier";
    check_keys(*it, {"start_x", "feet_y", "velocity_x", "velocity_y", "accel_x", "accel_y", "body_height"}, w);
    read_opt(*it, "start_x", s.carrier.start_x, w);
    read_opt(*it, "feet_y", s.carrier.feet_y, w);
    read_opt(*it, "velocity_x", s.carrier.velocity_x, w);
    read_opt(*it, "velocity_y", s.carrier.velocity_y, w);
    read_opt(*it, "accel_x", s.carrier.accel_x, w);
    read_opt(*it, "accel_y", s.carrier.accel_y, w);
    read_opt(*it, "body_height", s.carrier.body_height, w);
  }
  if (auto it = j.find("tackler"); it != j.end()) {
    if (it->is_null()) {
      s.tackler.reset();
    } else {
      const std::string w = where + ".tackler";
      check_keys(*it, {"start_dx", "end_dx", "head_offset_frac"}, w);
      read_opt(*it, "start_dx", s.tackler->start_dx, w);
      read_opt(*it, "end_dx", s.tackler->end_dx, w);
      read_opt(*it, "head_offset_frac", s.tackler->head_offset_frac, w);
    }
  }
  if (auto it = j.find("spectators"); it != j.end()) {
    if (!it->is_array()) throw GeneratorError(GeneratorError::Kind::InvalidSpec, where + ".spectators: expected array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string w = where + ".spectators[" + std::to_string(i) + "]";
      const auto& e = (*it)[i];
      check_keys(e, {"start_x", "feet_y", "velocity_x", "body_height"}, w);
      SpectatorSpec sp;
      read_opt(e, "start_x", sp.start_x, w);
      read_opt(e, "feet_y", sp.feet_y, w);
      read_opt(e, "velocity_x", sp.velocity_x, w);
      read_opt(e, "body_height", sp.body_height, w);
      s.spectators.push_back(sp);
    }
  }
  if (auto it = j.find("noise"); it != j.end()) {
    const std::string w = where + ".noise";
    check_keys(*it, {"ball_mean_x", "ball_mean_y", "ball_std_x", "ball_std_y", "keypoint_std", "bbox_std"}, w);
    read_opt(*it, "ball_mean_x", s.noise.ball_mean_x, w);
    read_opt(*it, "ball_mean_y", s.noise.ball_mean_y, w);
    read_opt(*it, "ball_std_x", s.noise.ball_std_x, w);
    read_opt(*it, "ball_std_y", s.noise.ball_std_y, w);
    read_opt(*it, "keypoint_std", s.noise.keypoint_std, w);
    read_opt(*it, "bbox_std", s.noise.bbox_std, w);
  }
  if (auto it = j.find("outliers"); it != j.end()) {
    if (!it->is_array()) throw GeneratorError(GeneratorError::Kind::InvalidSpec, where + ".outliers: expected array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string w = where + ".outliers[" + std::to_string(i) + "]";
      const auto& e = (*it)[i];
      check_keys(e, {"frame", "dx", "dy", "confidence"}, w);
      OutlierSpec o;
      read_opt(e, "frame", o.frame, w);
      read_opt(e, "dx", o.dx, w);
      read_opt(e, "dy", o.dy, w);
      read_opt(e, "confidence", o.confidence, w);
      s.outliers.push_back(o);
    }
  }
  if (auto it = j.find("label"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw GeneratorError(GeneratorError::Kind::InvalidSpec, where + ".label: expected string");
    s.label = parse_risk_label(it->get<std::string>());
    if (!s.label) throw GeneratorError(GeneratorError::Kind::InvalidSpec, where + ".label: expected high or low");
  }
  validate(s);
  return s;
}

inline nlohmann::json scenario_to_json(const ScenarioSpec& s) {
  using nlohmann::json;
  json spectators = json::array();
  for (const auto& sp : s.spectators)
    spectators.push_back(
        {{"start_x", sp.start_x}, {"feet_y", sp.feet_y}, {"velocity_x", sp.velocity_x}, {"body_height", sp.body_height}});
  json outliers = json::array();
  for (const auto& o : s.outliers)
    outliers.push_back({{"frame", o.frame}, {"dx", o.dx}, {"dy", o.dy}, {"confidence", o.confidence}});
  json j = {{"id", s.id},
            {"seed", s.seed},
            {"n_frames", s.n_frames},
            {"fps", s.fps},
            {"width", s.width},
            {"height", s.height},
            {"carrier",
             {{"start_x", s.carrier.start_x},
              {"feet_y", s.carrier.feet_y},
              {"velocity_x", s.carrier.velocity_x},
              {"velocity_y", s.carrier.velocity_y},
              {"accel_x", s.carrier.accel_x},
              {"accel_y", s.carrier.accel_y},
              {"body_height", s.carrier.body_height}}},
            {"spectators", std::move(spectators)},
            {"noise",
             {{"ball_mean_x", s.noise.ball_mean_x},
              {"ball_mean_y", s.noise.ball_mean_y},
              {"ball_std_x", s.noise.ball_std_x},
              {"ball_std_y", s.noise.ball_std_y},
              {"keypoint_std", s.noise.keypoint_std},
              {"bbox_std", s.noise.bbox_std}}},
            {"outliers", std::move(outliers)},
            {"ball_confidence", s.ball_confidence},
            {"head_frac", s.head_frac},
            {"allow_no_contact", s.allow_no_contact},
            {"truth_pcts", s.truth_pcts},
            {"primary_pct", s.primary_pct}};
  if (s.tackler)
    j["tackler"] = {{"start_dx", s.tackler->start_dx}, {"end_dx", s.tackler->end_dx},
                    {"head_offset_frac", s.tackler->head_offset_frac}};
  else
    j["tackler"] = nullptr;
  j["label"] = s.label ? json(std::string(to_string(*s.label))) : json(nullptr);
  return j;
}

/// Accepts either a bare array of scenarios or {"scenarios": [...]}.
inline std::vector<ScenarioSpec> scenarios_from_json(const nlohmann::json& doc) {
  const nlohmann::json* arr = &doc;
  if (doc.is_object()) {
    auto it = doc.find("scenarios");
    if (it == doc.end()) throw GeneratorError(GeneratorError::Kind::InvalidSpec, "$: missing \"scenarios\"");
    arr = &*it;
  }
  if (!arr->is_array()) throw GeneratorError(GeneratorError::Kind::InvalidSpec, "$: expected array of scenarios");
  std::vector<ScenarioSpec> out;
  for (std::size_t i = 0; i < arr->size(); ++i)
    out.push_back(scenario_from_json((*arr)[i], "$.scenarios[" + std::to_string(i) + "]"));
  return out;
}

inline nlohmann::json truth_to_json(const ScenarioTruth& t) {
  using nlohmann::json;
  json ball = json::array();
  for (const auto& p : t.ball) ball.push_back({p.x, p.y});
  json ch = json::array();
  for (const auto& p : t.carrier_head) ch.push_back({p.x, p.y});
  json th = json::array();
  for (const auto& p : t.tackler_head) th.push_back(p ? json::array({p->x, p->y}) : json(nullptr));
  json labels = json::array();
  for (const auto& [pct, l] : t.labels) labels.push_back({{"pct", pct}, {"label", std::string(to_string(l))}});
  return {{"ball", std::move(ball)},
          {"carrier_head", std::move(ch)},
          {"tackler_head", std::move(th)},
          {"tackle_frame", t.tackle_frame ? json(*t.tackle_frame) : json(nullptr)},
          {"labels", std::move(labels)},
          {"label", std::string(to_string(t.label))}};
}

struct SweepOutput {
  std::vector<std::filesystem::path> segment_files;
  std::filesystem::path labels_csv;
  std::vector<ScenarioTruth> truths;
};

inline constexpr const char* kLabelsFileName = "labels.csv";

/// Writes `<id>.json` per scenario, `labels.csv`, and `truth/<id>.json` into
/// `out_dir`.
inline SweepOutput sweep(const std::vector<ScenarioSpec>& specs, const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  if (specs.empty()) throw GeneratorError(GeneratorError::Kind::InvalidSpec, "no scenarios given");
  std::set<std::string> ids;
  for (const auto& s : specs) {
    if (!ids.insert(s.id).second) throw GeneratorError(GeneratorError::Kind::DuplicateId, "duplicate scenario id " + s.id);
  }

  std::error_code ec;
  fs::create_directories(out_dir / "truth", ec);
  if (ec) throw GeneratorError(GeneratorError::Kind::Io, "cannot create " + (out_dir / "truth").string() + ": " + ec.message());

  auto write = [](const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw GeneratorError(GeneratorError::Kind::Io, "cannot write " + p.string());
    out << text;
    if (!out) throw GeneratorError(GeneratorError::Kind::Io, "write failed for " + p.string());
  };

  SweepOutput result;
  std::vector<GroundTruthLabel> labels;
  for (const auto& s : specs) {
    auto [seg, truth] = gen_segment(s);
    const fs::path seg_path = out_dir / (s.id + ".json");
    write(seg_path, serialize_segment(seg));
    write(out_dir / "truth" / (s.id + ".json"), truth_to_json(truth).dump());
    labels.push_back({s.id, truth.label});
    result.segment_files.push_back(seg_path);
    result.truths.push_back(std::move(truth));
  }
  result.labels_csv = out_dir / kLabelsFileName;
  write(result.labels_csv, labels_to_csv(labels));
  return result;
}

}  // namespace tacklerisk
