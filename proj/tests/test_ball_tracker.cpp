// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "oracle/textbook_kf.hpp"
#include "tacklerisk/ball_tracker.hpp"
#include "tacklerisk/synthgen.hpp"

using namespace tacklerisk;

namespace {

Segment ball_only(const std::vector<std::optional<BallDetection>>& dets, int w = 1280, int h = 720, double fps = 30) {
  Segment s;
  s.id = "ball";
  s.width = w;
  s.height = h;
  s.fps = fps;
  for (std::size_t k = 0; k < dets.size(); ++k) {
    FrameRecord f;
    f.index = static_cast<std::int64_t>(k);
    if (dets[k]) f.balls.push_back(*dets[k]);
    s.frames.push_back(f);
  }
  return s;
}

BallDetection ball_at(double x, double y, double conf = 0.9) { return {{x - 5, y - 5, x + 5, y + 5}, conf}; }

}  // namespace

TEST(SelectMeasurementTest, Examples) {
  FrameRecord f;
  f.balls.push_back(ball_at(100, 100, 0.4));
  auto m = select_measurement(f, {0, 0});
  ASSERT_TRUE(m);
  EXPECT_EQ(m->pos, (Point2{100, 100}));

  FrameRecord tie;
  tie.balls.push_back(ball_at(90, 100, 0.3));
  tie.balls.push_back(ball_at(110, 100, 0.8));
  m = select_measurement(tie, {100, 100});
  ASSERT_TRUE(m);
  EXPECT_DOUBLE_EQ(m->confidence, 0.8);

  FrameRecord same;
  same.balls.push_back(ball_at(90, 100, 0.5));
  same.balls.push_back(ball_at(110, 100, 0.5));
  EXPECT_EQ(select_measurement(same, {100, 100})->pos, (Point2{90, 100}));

  EXPECT_FALSE(select_measurement(FrameRecord{}, {0, 0}));
}

TEST(TrackBallTest, ConvergesOnFixedBall) {
  std::vector<std::optional<BallDetection>> dets(30, ball_at(200, 300));
  const BallTrack t = track_ball(ball_only(dets), TrackerConfig{});
  ASSERT_EQ(t.smoothed.size(), 30u);
  for (std::size_t k = 20; k < 30; ++k) {
    EXPECT_NEAR(t.smoothed[k].x, 200.0, 2.0);
    EXPECT_NEAR(t.smoothed[k].y, 300.0, 2.0);
  }
}

TEST(TrackBallTest, OutlierIsGatedAndRectified) {
  std::vector<std::optional<BallDetection>> dets(30, ball_at(200, 300));
  dets[20] = ball_at(900, 50);
  const BallTrack t = track_ball(ball_only(dets), TrackerConfig{});
  EXPECT_EQ(t.diagnostics[20].reason, RejectionReason::GateExceeded);
  EXPECT_NEAR(t.smoothed[20].x, 200.0, 5.0);
  EXPECT_NEAR(t.smoothed[20].y, 300.0, 5.0);
}

TEST(TrackBallTest, NoDetectionsIsOpenLoopFromCentre) {
  std::vector<std::optional<BallDetection>> dets(30);
  const BallTrack t = track_ball(ball_only(dets), TrackerConfig{});
  for (std::size_t k = 0; k < 30; ++k) {
    EXPECT_EQ(t.diagnostics[k].reason, RejectionReason::NoMeasurement);
    EXPECT_EQ(t.filtered[k], (Point2{640, 360}));
    EXPECT_EQ(t.smoothed[k], (Point2{640, 360}));
  }
}

TEST(TrackBallTest, LongBlackoutDiverges) {
  std::vector<std::optional<BallDetection>> dets(400);
  EXPECT_THROW(track_ball(ball_only(dets), TrackerConfig{}), DivergenceError);
}

TEST(TrackBallTest, LowConfidenceStreamStaysFinite) {
  std::vector<std::optional<BallDetection>> dets;
  for (int k = 0; k < 400; ++k) dets.push_back(ball_at(100 + (k * 7) % 900, 80 + (k * 13) % 500, 0.05));
  const BallTrack t = track_ball(ball_only(dets), TrackerConfig{});
  for (std::size_t k = 0; k < t.smoothed.size(); ++k) {
    EXPECT_EQ(t.diagnostics[k].reason, RejectionReason::LowConfidence);
    EXPECT_TRUE(std::isfinite(t.smoothed[k].x) && std::isfinite(t.smoothed[k].y));
  }
}

TEST(TrackBallTest, FilteredMeansMatchOracleOnCleanSegments) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ScenarioSpec spec;
    spec.seed = seed;
    spec.n_frames = 10;
    spec.carrier.start_x = 600 + 8.0 * static_cast<double>(seed);
    spec.carrier.velocity_x = -120 + 11.0 * static_cast<double>(seed);
    spec.allow_no_contact = true;
    spec.tackler.reset();
    const auto [seg, truth] = gen_segment(spec);
    const BallTrack t = track_ball(seg, TrackerConfig{});

    std::vector<std::array<double, 2>> z;
    for (const auto& m : t.measured) z.push_back({m->pos.x, m->pos.y});
    const auto expected = oracle::run(seg.width, seg.height, 1.0 / seg.fps, z);
    for (std::size_t k = 0; k < z.size(); ++k) {
      ASSERT_TRUE(t.diagnostics[k].accepted);
      const StateVector& x = t.run.steps[k].posterior.mean;
      for (int i = 0; i < 6; ++i)
        EXPECT_LE(std::abs(x(i) - expected[k].x[i]), 1e-9 * std::max(1.0, std::abs(expected[k].x[i])));
    }
  }
}

TEST(TrackDumpTest, JsonAndCsvShape) {
  std::vector<std::optional<BallDetection>> dets(5, ball_at(640, 360));
  dets[2].reset();
  const Segment seg = ball_only(dets);
  const BallTrack t = track_ball(seg, TrackerConfig{});
  const auto j = track_dump_json(seg, t);
  ASSERT_EQ(j["frames"].size(), 5u);
  EXPECT_TRUE(j["frames"][2]["measured"].is_null());
  EXPECT_EQ(j["frames"][2]["reason"], "NoMeasurement");
  EXPECT_EQ(j["frames"][0]["reason"], "None");
  EXPECT_EQ(j["frames"][0]["S_diag"].size(), 2u);
  const std::string csv = track_plot_csv(t);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "frame,measured_x,measured_y,filtered_x,filtered_y,smoothed_x,smoothed_y,accepted");
  EXPECT_NE(csv.find("\n2,,,"), std::string::npos);
}
