// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "egokit/curation.hpp"
#include "egokit/grpo.hpp"
#include "egokit/rewards.hpp"
#include "egokit/structured_output.hpp"

namespace {

using namespace egokit;

std::vector<BBox> random_boxes(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<BBox> boxes;
  for (std::size_t i = 0; i < n; ++i) {
    BBox b;
    b.x_min = 0.8 * unit(rng);
    b.y_min = 0.8 * unit(rng);
    b.x_max = b.x_min + 0.2 * unit(rng);
    b.y_max = b.y_min + 0.2 * unit(rng);
    boxes.push_back(b);
  }
  return boxes;
}

void BM_box_iou(benchmark::State& state) {
  const std::vector<BBox> boxes = random_boxes(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    const double iou =
        box_iou(boxes[i % 1024], boxes[(i + 511) % 1024]);
    benchmark::DoNotOptimize(iou);
    ++i;
  }
}
BENCHMARK(BM_box_iou);

void BM_interval_iou(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(0.0, 30.0);
  std::vector<TimeInterval> ivs;
  for (int i = 0; i < 1024; ++i) {
    const double a = unit(rng);
    ivs.push_back(TimeInterval{a, a + unit(rng)});
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const double iou =
        interval_iou(ivs[i % 1024], ivs[(i + 255) % 1024]);
    benchmark::DoNotOptimize(iou);
    ++i;
  }
}
BENCHMARK(BM_interval_iou);

void BM_parse_response_ok(benchmark::State& state) {
  const std::string text =
      "<think>the object is near the sink, slightly left of the "
      "center</think><answer>(0.125,0.250),(0.500,0.750)</answer>";
  for (auto _ : state) {
    const ParseOutcome outcome = parse_response(text, PayloadKind::box);
    benchmark::DoNotOptimize(outcome.status);
  }
}
BENCHMARK(BM_parse_response_ok);

void BM_parse_response_mismatch(benchmark::State& state) {
  const std::string text =
      "I think the answer is (0.125,0.250),(0.500,0.750), roughly.";
  for (auto _ : state) {
    const ParseOutcome outcome = parse_response(text, PayloadKind::box);
    benchmark::DoNotOptimize(outcome.status);
  }
}
BENCHMARK(BM_parse_response_mismatch);

void BM_score_candidate(benchmark::State& state) {
  QARecord gt;
  gt.qa_id = "fg_spatial:bench";
  gt.split = Split::fg_spatial;
  gt.question_type = QuestionType::fg_spatial_grounding;
  gt.question = "where";
  gt.gt_box = BBox{0.3, 0.3, 0.7, 0.7};
  gt.answer = render_box(*gt.gt_box);
  const std::string response =
      "<think>roughly centered</think><answer>(0.250,0.250),(0.650,0.700)"
      "</answer>";
  for (auto _ : state) {
    const RewardBreakdown r = score_candidate(response, gt);
    benchmark::DoNotOptimize(r.total);
  }
}
BENCHMARK(BM_score_candidate);

ClipRecord bench_clip(std::mt19937_64& rng, int index) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ClipRecord clip;
  clip.clip_id = "bench_" + std::to_string(index);
  clip.video_id = "bench";
  clip.interval = TimeInterval{0.0, 10.0};
  clip.ego_score = unit(rng);
  for (int k = 0; k < 30; ++k) {
    FrameDetections frame;
    frame.frame_index = k;
    frame.timestamp_s = 0.1 + k * 0.3;
    frame.image_w = 1280;
    frame.image_h = 720;
    const double cx = 0.2 + 0.02 * k;
    frame.hand_boxes.push_back(BBox{cx, 0.5, cx + 0.05, 0.55});
    frame.hand_boxes.push_back(BBox{cx + 0.1, 0.5, cx + 0.15, 0.55});
    frame.object_boxes.push_back(BBox{0.4, 0.4, 0.6, 0.6});
    clip.frames.push_back(std::move(frame));
  }
  return clip;
}

void BM_filter_pipeline(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::vector<ClipRecord> clips;
  for (int i = 0; i < 100; ++i) clips.push_back(bench_clip(rng, i));
  const FilterConfig cfg;
  for (auto _ : state) {
    const auto decisions = run_pipeline(clips, cfg);
    benchmark::DoNotOptimize(decisions.size());
  }
}
BENCHMARK(BM_filter_pipeline);

void BM_normalize_advantages(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(0.0, 2.0);
  std::vector<double> rewards;
  for (int i = 0; i < 8; ++i) rewards.push_back(unit(rng));
  for (auto _ : state) {
    const auto adv = normalize_advantages(rewards);
    benchmark::DoNotOptimize(adv.data());
  }
}
BENCHMARK(BM_normalize_advantages);

}  // namespace

BENCHMARK_MAIN();
