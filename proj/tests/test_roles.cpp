// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "tacklerisk/roles.hpp"

using namespace tacklerisk;

namespace {

PersonDetection centred(double x, double y, double half_w = 20, double half_h = 60) {
  return {{x - half_w, y - half_h, x + half_w, y + half_h}, std::nullopt};
}

FrameRecord frame_of(std::initializer_list<PersonDetection> ps, std::int64_t index = 0) {
  FrameRecord f;
  f.index = index;
  f.persons = ps;
  return f;
}

// Five frames, carrier at index 0; a second player overlaps at the given positions.
Segment contact_segment(std::initializer_list<std::size_t> overlap_at) {
  Segment s;
  s.id = "roles";
  s.width = 1280;
  s.height = 720;
  s.fps = 30;
  for (std::size_t k = 0; k < 5; ++k) {
    const bool touch = std::find(overlap_at.begin(), overlap_at.end(), k) != overlap_at.end();
    s.frames.push_back(frame_of({centred(400, 400, 40, 150), centred(touch ? 450 : 700, 400, 40, 150)},
                                static_cast<std::int64_t>(k)));
  }
  return s;
}

}  // namespace

TEST(FindCarrierTest, Examples) {
  EXPECT_EQ(find_carrier(frame_of({centred(10, 10), centred(50, 50)}), {48, 52}), 1u);
  EXPECT_EQ(find_carrier(frame_of({centred(10, 10)}), {900, 900}), 0u);
  EXPECT_EQ(find_carrier(frame_of({centred(30, 30), centred(30, 30)}), {77, -4}), 0u);
  EXPECT_FALSE(find_carrier(FrameRecord{}, {0, 0}));
}

TEST(FindTackleFrameTest, Examples) {
  const Segment s = contact_segment({2, 3});
  const std::vector<std::optional<std::size_t>> carriers(5, 0);
  ResolverConfig cfg;
  cfg.tackle_frame_offset = 0;
  EXPECT_EQ(find_tackle_frame(s, carriers, cfg), 3u);
  cfg.tackle_frame_offset = -2;
  EXPECT_EQ(find_tackle_frame(s, carriers, cfg), 1u);
  cfg.tackle_frame_offset = -5;
  EXPECT_EQ(find_tackle_frame(s, carriers, cfg), 0u);  // clamped

  try {
    find_tackle_frame(contact_segment({}), carriers, ResolverConfig{});
    FAIL() << "expected NoTackleFrame";
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.reason(), FailureReason::NoTackleFrame);
  }
}

TEST(FindTackleFrameTest, ShortPersonsIgnored) {
  Segment s = contact_segment({});
  // A small (distant) figure overlapping the carrier does not count.
  s.frames[4].persons.push_back(centred(400, 400, 10, 40));
  const std::vector<std::optional<std::size_t>> carriers(5, 0);
  EXPECT_THROW(find_tackle_frame(s, carriers, ResolverConfig{}), PipelineError);
}

TEST(FindTacklerTest, Examples) {
  // Carrier (100,100,160,400); candidates centred (200,250) and (180,450).
  FrameRecord f = frame_of({{{100, 100, 160, 400}, std::nullopt}, centred(200, 250), centred(180, 450)});
  TacklerChoice c = find_tackler(f, 0);
  EXPECT_EQ(c.index, 1u);
  EXPECT_FALSE(c.height_filter_dropped);

  f = frame_of({{{100, 100, 160, 400}, std::nullopt}});
  try {
    find_tackler(f, 0);
    FAIL() << "expected NoTackler";
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.reason(), FailureReason::NoTackler);
  }
}

TEST(FindTacklerTest, NearestHorizontal) {
  FrameRecord f = frame_of({{{100, 100, 160, 400}, std::nullopt}, centred(210, 300), centred(160, 200)});
  EXPECT_EQ(find_tackler(f, 0).index, 2u);  // |dx| 30 beats 80
}

TEST(FindTacklerTest, HeightFilterDroppedWhenNobodyPasses) {
  FrameRecord f = frame_of({{{100, 100, 160, 400}, std::nullopt}, centred(300, 600), centred(150, 700)});
  const TacklerChoice c = find_tackler(f, 0);
  EXPECT_EQ(c.index, 2u);
  EXPECT_TRUE(c.height_filter_dropped);
}

TEST(RolesPropertyTest, TranslationEquivariantAndNeverCarrier) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(0, 1000), size(10, 200), shift(-500, 500);
  std::uniform_int_distribution<int> count(2, 7);
  for (int trial = 0; trial < 1000; ++trial) {
    FrameRecord f;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) f.persons.push_back(centred(pos(rng), pos(rng), size(rng), size(rng)));
    const Point2 ball{pos(rng), pos(rng)};
    const double dx = shift(rng);
    const double dy = shift(rng);
    FrameRecord g = f;
    for (auto& p : g.persons) p.bbox = {p.bbox.x_min + dx, p.bbox.y_min + dy, p.bbox.x_max + dx, p.bbox.y_max + dy};

    const auto c1 = find_carrier(f, ball);
    const auto c2 = find_carrier(g, {ball.x + dx, ball.y + dy});
    ASSERT_TRUE(c1 && c2);
    // Exact translations of floating-point data can move near-ties; only
    // compare clear winners.
    const double d1 = distance(bbox_center(f.persons[*c1].bbox), ball);
    bool clear = true;
    for (std::size_t i = 0; i < f.persons.size(); ++i) {
      if (i != *c1 && std::abs(distance(bbox_center(f.persons[i].bbox), ball) - d1) < 1e-6) clear = false;
    }
    if (clear) {
      EXPECT_EQ(*c1, *c2);
    }

    const TacklerChoice t = find_tackler(f, *c1);
    EXPECT_NE(t.index, *c1);
  }
}
