// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "egokit/rewards.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace egokit;

namespace {

QARecord spatial_gt(const BBox& box) {
  QARecord gt;
  gt.qa_id = "fg_spatial:c0";
  gt.clip_ids = {"c0"};
  gt.split = Split::fg_spatial;
  gt.question_type = QuestionType::fg_spatial_grounding;
  gt.question = "where";
  gt.answer = render_box(box);
  gt.gt_box = box;
  return gt;
}

QARecord temporal_gt(const TimeInterval& iv) {
  QARecord gt;
  gt.qa_id = "fg_temporal:c0";
  gt.clip_ids = {"c0"};
  gt.split = Split::fg_temporal;
  gt.question_type = QuestionType::fg_temporal_grounding;
  gt.question = "when";
  gt.answer = render_interval(iv);
  gt.gt_interval = iv;
  return gt;
}

}  // namespace

TEST_CASE("quarter-overlap boxes score exactly one seventh") {
  const BBox a{0.0, 0.0, 0.5, 0.5};
  const BBox b{0.25, 0.25, 0.75, 0.75};
  CHECK(std::abs(box_iou(a, b) - 1.0 / 7.0) < 1e-12);
}

TEST_CASE("interval overlap worked example is one sixth") {
  CHECK(std::abs(interval_iou(TimeInterval{2.0, 5.0}, TimeInterval{4.0, 8.0}) -
                 1.0 / 6.0) < 1e-12);
}

TEST_CASE("iou is symmetric, bounded, and exact on identity") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 500; ++i) {
    const BBox a = testing::random_lattice_box(rng);
    const BBox b = testing::random_lattice_box(rng);
    const double ab = box_iou(a, b);
    CHECK(ab == box_iou(b, a));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
  }
  const BBox box{0.2, 0.3, 0.6, 0.9};
  CHECK(box_iou(box, box) == 1.0);

  const TimeInterval iv{3.5, 9.25};
  CHECK(interval_iou(iv, iv) == 1.0);
  for (int i = 0; i < 500; ++i) {
    const TimeInterval a = testing::random_lattice_interval(rng);
    const TimeInterval b = testing::random_lattice_interval(rng);
    const double ab = interval_iou(a, b);
    CHECK(ab == interval_iou(b, a));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
  }
}

TEST_CASE("zero-area unions score zero instead of dividing by zero") {
  const BBox point{0.5, 0.5, 0.5, 0.5};
  CHECK(box_iou(point, point) == 0.0);
  CHECK(box_iou(point, BBox{0.4, 0.4, 0.5, 0.5}) == 0.0);

  const TimeInterval instant{3.0, 3.0};
  CHECK(interval_iou(instant, instant) == 0.0);
  CHECK(interval_iou(instant, TimeInterval{2.0, 3.0}) == 0.0);

  // Disjoint shapes with positive union score zero through the same formula.
  CHECK(box_iou(BBox{0.0, 0.0, 0.2, 0.2}, BBox{0.5, 0.5, 0.9, 0.9}) == 0.0);
  CHECK(interval_iou(TimeInterval{0.0, 1.0}, TimeInterval{5.0, 6.0}) == 0.0);
}

TEST_CASE("interval iou is invariant to a common time shift") {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 200; ++i) {
    const TimeInterval a = testing::random_lattice_interval(rng);
    const TimeInterval b = testing::random_lattice_interval(rng);
    const double shift = 40.0;
    const TimeInterval a2{a.start_s + shift, a.end_s + shift};
    const TimeInterval b2{b.start_s + shift, b.end_s + shift};
    CHECK(interval_iou(a, b) == doctest::Approx(interval_iou(a2, b2))
                                    .epsilon(1e-12));
  }
}

TEST_CASE("library iou agrees with the rasterized oracles on the lattice") {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 40; ++i) {
    const BBox a = testing::random_lattice_box(rng);
    const BBox b = testing::random_lattice_box(rng);
    CHECK(std::abs(box_iou(a, b) - testing::raster_box_iou(a, b)) < 1e-9);
  }
  for (int i = 0; i < 40; ++i) {
    const TimeInterval a = testing::random_lattice_interval(rng, 5.0);
    const TimeInterval b = testing::random_lattice_interval(rng, 5.0);
    CHECK(std::abs(interval_iou(a, b) -
                   testing::grid_interval_iou(a, b)) < 1e-9);
  }
}

TEST_CASE("format reward pays for structure even when the payload fails") {
  CHECK(format_reward(parse_response("<think>t</think><answer>(0.1,0.1),"
                                     "(0.2,0.2)</answer>",
                                     PayloadKind::box)) == 1.0);
  CHECK(format_reward(parse_response("<think>t</think><answer>junk</answer>",
                                     PayloadKind::box)) == 1.0);
  CHECK(format_reward(parse_response("<answer>(0.1,0.1),(0.2,0.2)</answer>",
                                     PayloadKind::box)) == 0.0);
}

TEST_CASE("a perfect grounded answer earns the full reward of two") {
  const BBox box{0.25, 0.25, 0.75, 0.75};
  const QARecord gt = spatial_gt(box);
  const RewardBreakdown r = score_candidate(
      "<think>centered</think><answer>" + render_box(box) + "</answer>", gt);
  CHECK(r.task == Task::og);
  CHECK(r.r_format == 1.0);
  CHECK(r.r_iou == 1.0);
  CHECK(r.total == 2.0);

  const TimeInterval iv{2.0, 5.0};
  const RewardBreakdown t = score_candidate(
      "<think>early</think><answer>" + render_interval(iv) + "</answer>",
      temporal_gt(iv));
  CHECK(t.task == Task::tg);
  CHECK(t.total == 2.0);
}

TEST_CASE("format mismatch earns zero, partial overlap decomposes") {
  const QARecord gt = spatial_gt(BBox{0.0, 0.0, 0.5, 0.5});
  const RewardBreakdown none =
      score_candidate("no tags at all", gt);
  CHECK(none.r_format == 0.0);
  CHECK(none.r_iou == 0.0);
  CHECK(none.total == 0.0);

  const RewardBreakdown partial = score_candidate(
      "<think>t</think><answer>(0.250,0.250),(0.750,0.750)</answer>", gt);
  CHECK(partial.r_format == 1.0);
  CHECK(std::abs(partial.r_iou - 1.0 / 7.0) < 1e-12);
  CHECK(std::abs(partial.total - (1.0 + 1.0 / 7.0)) < 1e-12);

  const RewardBreakdown malformed = score_candidate(
      "<think>t</think><answer>box on the left</answer>", gt);
  CHECK(malformed.r_format == 1.0);
  CHECK(malformed.r_iou == 0.0);
  CHECK(malformed.total == 1.0);
}

TEST_CASE("score_candidate rejects non-grounding ground truth") {
  QARecord gt;
  gt.qa_id = "short:c0";
  gt.split = Split::short_term;
  gt.question_type = QuestionType::short_object_count;
  gt.question = "how many";
  gt.answer = "two";
  CHECK_THROWS_AS(score_candidate("<think>t</think><answer>x</answer>", gt),
                  Error);

  QARecord missing = spatial_gt(BBox{0.1, 0.1, 0.2, 0.2});
  missing.gt_box = std::nullopt;
  CHECK_THROWS_AS(score_candidate("x", missing), Error);
}

TEST_CASE("score_group keeps going and records errors as zero entries") {
  const QARecord gt = spatial_gt(BBox{0.25, 0.25, 0.75, 0.75});
  const std::vector<std::string> responses = {
      "<think>good</think><answer>(0.250,0.250),(0.750,0.750)</answer>",
      "just words",
  };
  const auto rewards = score_group(responses, gt);
  REQUIRE(rewards.size() == 2);
  CHECK(rewards[0].total == 2.0);
  CHECK(rewards[1].total == 0.0);
  CHECK(!rewards[1].note.has_value());  // a scoreable zero is not an error

  QARecord broken = gt;
  broken.gt_box = std::nullopt;
  const auto errored = score_group(responses, broken);
  REQUIRE(errored.size() == 2);
  CHECK(errored[0].total == 0.0);
  REQUIRE(errored[0].note.has_value());
  CHECK(errored[0].note->find("gt_box absent") != std::string::npos);
}

TEST_CASE("reward records round-trip through json") {
  RewardRecord record;
  record.qa_id = "fg_spatial:c1";
  record.breakdown.task = Task::og;
  record.breakdown.r_format = 1.0;
  record.breakdown.r_iou = 0.5;
  record.breakdown.total = 1.5;
  const json j = record;
  CHECK(j.at("note").is_null());
  CHECK(j.get<RewardRecord>() == record);

  record.breakdown.note = "gt_box absent on fg_spatial:c1";
  const json j2 = record;
  CHECK(j2.get<RewardRecord>() == record);
}
