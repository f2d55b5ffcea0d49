// SPDX-License-Identifier: Apache-2.0
//
// Synthetic corpora shared by the command tests and the acceptance run.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tacklerisk/synthgen.hpp"

namespace fixtures {

using tacklerisk::RiskLabel;
using tacklerisk::ScenarioSpec;

inline constexpr std::array<double, 5> kPcts{0.05, 0.10, 0.15, 0.20, 0.25};

// Per-pct confusion counts of the published 64-tackle evaluation.
struct CountRow {
  std::size_t chd, hll, llh, cld;
};
inline constexpr std::array<CountRow, 5> kPublishedCounts{{{5, 12, 9, 38}, {8, 9, 14, 33}, {12, 5, 19, 28},
                                                  {12, 5, 23, 24}, {14, 3, 28, 19}}};
inline constexpr std::size_t kPublishedTotal = 109;

inline std::string numbered(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%03zu", prefix, i);
  return buf;
}

// Segments whose predicted label first turns High at region index i (or
// never) so that per-pct tallies reproduce kPublishedCounts, plus single-person
// segments that fail and pad the total to 109.
inline std::vector<ScenarioSpec> published_replay_specs() {
  // Offsets half-way between consecutive pcts; 0.35 is outside every region.
  constexpr std::array<double, 6> kOffset{0.025, 0.075, 0.125, 0.175, 0.225, 0.35};
  std::vector<ScenarioSpec> specs;
  auto add_group = [&](RiskLabel truth, auto count_at) {
    std::size_t prev = 0;
    const std::size_t group = truth == RiskLabel::High ? kPublishedCounts[0].chd + kPublishedCounts[0].hll : kPublishedCounts[0].llh + kPublishedCounts[0].cld;
    for (std::size_t i = 0; i <= kPcts.size(); ++i) {
      const std::size_t cum = i < kPcts.size() ? count_at(kPublishedCounts[i]) : group;
      for (std::size_t n = prev; n < cum; ++n) {
        ScenarioSpec s;
        s.id = numbered(truth == RiskLabel::High ? "pub_high_" : "pub_low_", n);
        s.seed = 1000 + specs.size();
        s.tackler->head_offset_frac = kOffset[i];
        s.label = truth;
        specs.push_back(s);
      }
      prev = cum;
    }
  };
  add_group(RiskLabel::High, [](const CountRow& r) { return r.chd; });
  add_group(RiskLabel::Low, [](const CountRow& r) { return r.llh; });
  const std::size_t evaluated = specs.size();
  for (std::size_t n = 0; evaluated + n < kPublishedTotal; ++n) {
    ScenarioSpec s;
    s.id = numbered("pub_fail_", n);
    s.seed = 5000 + n;
    s.tackler.reset();
    s.allow_no_contact = true;
    s.label = RiskLabel::Low;
    specs.push_back(s);
  }
  return specs;
}

struct EndToEndCorpus {
  std::vector<ScenarioSpec> specs;
  std::vector<std::pair<std::string, std::size_t>> outlier_frames;  // (id, frame)
};

// 50 high / 50 low tackles with the default (calibrated) ball noise, small
// keypoint and box jitter, and one gross ball outlier in every tenth segment.
inline EndToEndCorpus end_to_end_corpus(std::uint64_t seed = 2024) {
  tacklerisk::Rng rng(seed);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  EndToEndCorpus c;
  for (std::size_t i = 0; i < 100; ++i) {
    const bool high = i % 2 == 0;
    ScenarioSpec s;
    s.id = numbered(high ? "e2e_high_" : "e2e_low_", i);
    s.seed = seed * 1000 + i;
    s.carrier.start_x = uni(380, 900);
    s.carrier.feet_y = uni(560, 700);
    s.carrier.velocity_x = uni(-80, 80);
    s.carrier.body_height = uni(260, 380);
    s.tackler->start_dx = (rng.uniform() < 0.5 ? -1.0 : 1.0) * uni(300, 420);
    s.tackler->end_dx = (s.tackler->start_dx < 0 ? -1.0 : 1.0) * uni(30, 60);
    s.tackler->head_offset_frac = high ? uni(-0.10, 0.10) : uni(0.22, 0.45);
    s.noise.keypoint_std = 1.5;
    s.noise.bbox_std = 1.5;
    if (i % 7 == 3) s.spectators.push_back({uni(60, 200), uni(500, 620), 0.0, uni(200, 260)});
    if (i % 10 == 5) {
      const std::size_t frame = 8 + static_cast<std::size_t>(uni(0, 16));
      const double t = static_cast<double>(frame) / s.fps;
      const double ball_x = s.carrier.start_x + s.carrier.velocity_x * t;
      const double dx = (ball_x < 640 ? 1.0 : -1.0) * uni(420, 520);
      const double dy = (rng.uniform() < 0.5 ? -1.0 : 1.0) * uni(200, 260);
      s.outliers.push_back({frame, dx, dy, 0.9});
      c.outlier_frames.emplace_back(s.id, frame);
    }
    c.specs.push_back(s);
  }
  return c;
}

}  // namespace fixtures
