// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Regenerates the bundled smoke-test corpus: 50 synthetic clips plus canned
// annotator responses and prediction files. The corpus is designed so every
// filter rule fires somewhere, segments form and get dropped, and every
// screening path of the QA builder (reject, skip, adapter failure) appears.
// Golden outputs are produced separately by running the CLI over this corpus.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "egokit/annotator.hpp"
#include "egokit/curation.hpp"
#include "egokit/jsonl.hpp"
#include "egokit/qa_builder.hpp"
#include "egokit/structured_output.hpp"
#include "egokit/types.hpp"

namespace egokit {
namespace {

namespace fs = std::filesystem;

BBox hand_box(double cx, double cy) {
  return BBox{cx - 0.04, cy - 0.04, cx + 0.04, cy + 0.04};
}

BBox object_box(double cx, double cy) {
  return BBox{cx - 0.06, cy - 0.06, cx + 0.06, cy + 0.06};
}

// Unique per clip: the grounding prompts key the mock adapter by a hash of
// the rendered prompt, and the prompt carries only this text.
std::string narration_for(int g) {
  static const char* phrases[] = {
      "the kitchen knife", "the cutting board", "the left glove",
      "the metal bowl",    "the wooden spoon",  "the right hand",
      "the onion half",    "the garden trowel",
  };
  return std::string(phrases[g % 8]) + " for step " + std::to_string(g);
}

std::vector<ClipRecord> build_clips() {
  std::vector<ClipRecord> clips;
  for (int v = 0; v < 5; ++v) {
    for (int c = 0; c < 10; ++c) {
      const int g = v * 10 + c;
      ClipRecord clip;
      clip.clip_id = "v" + std::to_string(v) + "c" + std::to_string(c);
      clip.video_id = "v" + std::to_string(v);
      clip.interval = TimeInterval{c * 10.0, c * 10.0 + 10.0};
      clip.ego_score = 0.55 + 0.04 * (g * 7 % 10);
      clip.caption = "Person works on step " + std::to_string(g) +
                     " of the task.";
      clip.narration = narration_for(g);

      const int w = v < 3 ? 640 : 1280;
      const int h = v < 3 ? 480 : 720;
      for (int k = 0; k < 10; ++k) {
        FrameDetections frame;
        frame.frame_index = k;
        frame.timestamp_s = clip.interval.start_s + k;
        frame.image_w = w;
        frame.image_h = h;
        // Two hands drifting rightward; drift spans well over 10% of the
        // frame, so the displacement rule keeps the clip.
        frame.hand_boxes.push_back(hand_box(0.2 + 0.03 * k, 0.6));
        frame.hand_boxes.push_back(hand_box(0.3 + 0.03 * k, 0.7));
        frame.object_boxes.push_back(object_box(0.5, 0.5));
        clip.frames.push_back(std::move(frame));
      }
      clips.push_back(std::move(clip));
    }
  }

  auto at = [&clips](int v, int c) -> ClipRecord& {
    return clips[static_cast<std::size_t>(v * 10 + c)];
  };

  // Ego gate hits.
  at(0, 0).ego_score = 0.2;
  at(1, 3).ego_score = 0.45;
  at(4, 9).ego_score = std::nullopt;

  // Duration gate: 1.5 s clip.
  at(0, 5).interval = TimeInterval{50.0, 51.5};
  at(0, 5).frames.resize(2);
  at(0, 5).frames[1].timestamp_s = 50.75;

  // Hand-count gate: a third hand appears.
  at(2, 2).frames[4].hand_boxes.push_back(hand_box(0.8, 0.2));
  for (auto& frame : at(3, 7).frames) {
    frame.hand_boxes.push_back(hand_box(0.8, 0.2));
  }

  // Object-coverage gate: too few object boxes in total.
  for (int k = 5; k < 10; ++k) at(1, 6).frames[k].object_boxes.clear();
  for (auto& frame : at(2, 8).frames) frame.object_boxes.clear();

  // Displacement gate: static hands, then no hands at all.
  for (auto& frame : at(0, 7).frames) {
    frame.hand_boxes.clear();
    frame.hand_boxes.push_back(hand_box(0.4, 0.5));
    frame.hand_boxes.push_back(hand_box(0.5, 0.5));
  }
  for (auto& frame : at(4, 2).frames) frame.hand_boxes.clear();

  // Zero-frame clip: the coverage rule reports it as an error.
  at(1, 9).frames.clear();

  // Text-annotation gaps for the QA builder to reject.
  at(3, 0).caption = std::nullopt;
  at(3, 1).caption = std::nullopt;
  at(3, 2).caption = std::nullopt;
  at(3, 8).caption = std::nullopt;
  at(3, 9).caption = std::nullopt;
  at(2, 9).narration = std::nullopt;

  return clips;
}

struct CannedFile {
  std::ofstream out;

  explicit CannedFile(const fs::path& path) : out(path) {
    if (!out) throw Error("cannot open " + path.string());
  }
  void add(const std::string& user_prompt, const json& payload) {
    add_text(user_prompt, payload.dump());
  }
  void add_text(const std::string& user_prompt, const std::string& text) {
    const json line = {{"prompt_hash", prompt_hash(user_prompt)},
                       {"text", text}};
    out << line.dump() << "\n";
  }
};

std::string long_rationale(const std::string& id) {
  std::string r = "Step by step over " + id + ": ";
  while (r.size() < 220) {
    r += "the captions first show the setup, then the main interaction, "
         "and finally the cleanup, so the order of actions follows. ";
  }
  return r;
}

// Box answer for a clip, on the 3-decimal lattice.
BBox fg_box(int g) {
  const double x = 0.1 + 0.02 * (g % 10);
  const double y = 0.2 + 0.03 * (g % 8);
  return BBox{x, y, x + 0.3, y + 0.3};
}

TimeInterval fg_interval(const ClipRecord& clip) {
  return TimeInterval{clip.interval.start_s + 2.25,
                      clip.interval.start_s + 7.75};
}

int clip_index(const ClipRecord& clip) {
  const int v = clip.clip_id[1] - '0';
  const int c = clip.clip_id[3] - '0';
  return v * 10 + c;
}

void write_mock_files(const fs::path& dir,
                      const std::vector<ClipRecord>& kept,
                      const std::vector<SegmentRecord>& segments) {
  CannedFile fg_spatial(dir / "mock_fg_spatial.jsonl");
  CannedFile fg_temporal(dir / "mock_fg_temporal.jsonl");
  for (const ClipRecord& clip : kept) {
    if (!clip.narration) continue;  // rejected before the adapter runs
    const PromptSource src = source_from(clip);
    const std::string spatial_prompt =
        build_prompt(template_for(QuestionType::fg_spatial_grounding), src)
            .user_prompt;
    const std::string temporal_prompt =
        build_prompt(template_for(QuestionType::fg_temporal_grounding), src)
            .user_prompt;
    const int g = clip_index(clip);

    if (clip.clip_id == "v4c8") {
      // No spatial entry: the mock raises and the builder gives up after its
      // retry budget.
    } else if (clip.clip_id == "v0c1") {
      fg_spatial.add_text(spatial_prompt, "not a json object");
    } else if (clip.clip_id == "v2c3") {
      fg_spatial.add(spatial_prompt,
                     {{"answer", "(0.900,0.900),(0.100,0.100)"}});
    } else {
      fg_spatial.add(spatial_prompt, {{"answer", render_box(fg_box(g))}});
    }

    if (clip.clip_id == "v1c2") {
      fg_temporal.add(temporal_prompt, {{"answer", "(10.25,7.33)"}});
    } else if (clip.clip_id == "v3c4") {
      fg_temporal.add(temporal_prompt, {{"answer", "   "}});
    } else {
      fg_temporal.add(temporal_prompt,
                      {{"answer", render_interval(fg_interval(clip))}});
    }
  }

  CannedFile short_file(dir / "mock_short.jsonl");
  for (const ClipRecord& clip : kept) {
    if (!clip.narration || !clip.caption) continue;
    const PromptSource src = source_from(clip);
    for (QuestionType type : question_types_for(Split::short_term)) {
      const std::string prompt =
          build_prompt(template_for(type), src).user_prompt;
      const std::string focus = to_string(type).substr(6);
      short_file.add(
          prompt,
          {{"question", "What does the " + focus + " question ask about " +
                            *clip.narration + "?"},
           {"answer", "It concerns " + *clip.narration + " during step " +
                          std::to_string(clip_index(clip)) + "."}});
    }
  }

  CannedFile long_file(dir / "mock_long.jsonl");
  CannedFile cot_file(dir / "mock_cot.jsonl");
  for (const SegmentRecord& segment : segments) {
    if (!segment.caption) continue;  // rejected before the adapter runs
    const PromptSource src = source_from(segment);
    for (QuestionType type : question_types_for(Split::long_term)) {
      const std::string prompt =
          build_prompt(template_for(type), src).user_prompt;
      if (segment.segment_id == "v2:seg0") {
        long_file.add(prompt, {{"question", "What happens in the segment?"},
                               {"answer", "What happens in the segment?"}});
      } else {
        const std::string focus = to_string(type).substr(5);
        long_file.add(
            prompt,
            {{"question", "Across " + segment.segment_id +
                              ", what does the " + focus + " concern?"},
             {"answer", "Across the segment the person advances the task "
                        "through " +
                            std::to_string(segment.clip_ids.size()) +
                            " consecutive steps."}});
      }
    }

    const std::string cot_prompt =
        build_prompt(template_for(QuestionType::cot_reasoning), src)
            .user_prompt;
    if (segment.segment_id == "v0:seg0") {
      cot_file.add(cot_prompt, {{"skip", true}});
    } else if (segment.segment_id == "v1:seg1") {
      cot_file.add(cot_prompt,
                   {{"question", "Why does the person pause mid-task?"},
                    {"answer", "To reposition the tools."},
                    {"rationale", "Too brief to count."}});
    } else {
      cot_file.add(
          cot_prompt,
          {{"question", "How does the person's workflow progress across " +
                            segment.segment_id + "?"},
           {"answer", "The person sets up, performs the main interaction, "
                      "and finishes the task in order."},
           {"rationale", long_rationale(segment.segment_id)}});
    }
  }
}

void write_prediction_files(const fs::path& dir,
                            const std::vector<QARecord>& spatial_qa,
                            const std::vector<QARecord>& temporal_qa) {
  std::vector<PredictionRecord> og;
  for (std::size_t i = 0; i < spatial_qa.size(); ++i) {
    const QARecord& qa = spatial_qa[i];
    if (i % 11 == 6) continue;  // left missing on purpose
    PredictionRecord pred;
    pred.qa_id = qa.qa_id;
    if (i % 7 == 3) {
      pred.response_text = "<answer>" + qa.answer + "</answer>";
    } else if (i % 7 == 5) {
      pred.response_text =
          "<think>hard to say</think><answer>box at the left</answer>";
    } else {
      const double dx = 0.015 * (i % 4);
      const BBox& gt = *qa.gt_box;
      const BBox shifted{gt.x_min + dx, gt.y_min, gt.x_max + dx, gt.y_max};
      pred.response_text = "<think>the object sits near the center of the "
                           "frame</think><answer>" +
                           render_box(shifted) + "</answer>";
    }
    og.push_back(std::move(pred));
  }
  write_jsonl_file(dir / "preds_og.jsonl", og);

  std::vector<PredictionRecord> tg;
  for (std::size_t i = 0; i < temporal_qa.size(); ++i) {
    const QARecord& qa = temporal_qa[i];
    if (i % 11 == 6) continue;
    PredictionRecord pred;
    pred.qa_id = qa.qa_id;
    if (i % 7 == 3) {
      pred.response_text = "<answer>" + qa.answer + "</answer>";
    } else if (i % 7 == 5) {
      pred.response_text =
          "<think>t</think><answer>(9.00,3.00)</answer>";
    } else {
      const double shift = 0.25 * (i % 4);
      const TimeInterval& gt = *qa.gt_interval;
      const TimeInterval moved{gt.start_s + shift, gt.end_s + shift};
      pred.response_text =
          "<think>the event happens mid-clip</think><answer>" +
          render_interval(moved) + "</answer>";
    }
    tg.push_back(std::move(pred));
  }
  write_jsonl_file(dir / "preds_tg.jsonl", tg);
}

void write_mc_files(const fs::path& dir) {
  const char* options[] = {"A", "B", "C", "D"};
  std::vector<QARecord> gts;
  std::vector<PredictionRecord> preds;
  for (int i = 0; i < 8; ++i) {
    QARecord qa;
    qa.qa_id = "mc:00" + std::to_string(i);
    qa.clip_ids = {"v0c1"};
    qa.split = Split::short_term;
    qa.question_type = QuestionType::short_object_count;
    qa.question = "How many objects are on the counter? A. one B. two "
                  "C. three D. four";
    qa.answer = options[i % 4];
    gts.push_back(qa);

    if (i == 7) continue;  // left missing on purpose
    PredictionRecord pred;
    pred.qa_id = qa.qa_id;
    if (i == 2) {
      pred.response_text = " " + std::string(1, 'a' + i % 4) + " ";
    } else if (i == 4 || i == 5) {
      pred.response_text = options[(i + 1) % 4];
    } else {
      pred.response_text = options[i % 4];
    }
    preds.push_back(std::move(pred));
  }
  write_jsonl_file(dir / "qa_mc.jsonl", gts);
  write_jsonl_file(dir / "preds_mc.jsonl", preds);
}

int run(const fs::path& dir) {
  fs::create_directories(dir);

  const std::vector<ClipRecord> clips = build_clips();
  for (const ClipRecord& clip : clips) {
    const ValidationReport report = validate_clip(clip);
    // The zero-frame clip is intentionally odd but still well-formed.
    if (!report.ok()) {
      std::cerr << clip.clip_id << ":";
      for (const std::string& issue : report.issues) {
        std::cerr << " " << issue << ";";
      }
      std::cerr << "\n";
      return 1;
    }
  }
  write_jsonl_file(dir / "detections.jsonl", clips);

  const FilterConfig filter_cfg;
  const auto decisions = run_pipeline(clips, filter_cfg);
  std::vector<ClipRecord> kept;
  for (std::size_t i = 0; i < clips.size(); ++i) {
    if (decisions[i].kept) kept.push_back(clips[i]);
  }

  const SegmentConfig segment_cfg;
  const auto segments = segment_long_term(kept, segment_cfg);

  write_mock_files(dir, kept, segments);

  // Replay the builder in-process to learn which records the smoke run emits;
  // the prediction files reference their qa_ids.
  QaBuildOptions build;
  build.seed = 7;
  build.backoff_base_ms = 0;
  std::vector<PromptSource> clip_sources;
  for (const ClipRecord& clip : kept) clip_sources.push_back(source_from(clip));

  MockAdapter spatial_adapter(dir / "mock_fg_spatial.jsonl");
  const RunResult spatial =
      run_split(clip_sources, Split::fg_spatial, spatial_adapter, build);
  MockAdapter temporal_adapter(dir / "mock_fg_temporal.jsonl");
  const RunResult temporal =
      run_split(clip_sources, Split::fg_temporal, temporal_adapter, build);

  write_prediction_files(dir, spatial.records, temporal.records);
  write_mc_files(dir);

  std::size_t kept_count = kept.size();
  std::cerr << "clips " << clips.size() << ", kept " << kept_count
            << ", segments " << segments.size() << ", fg_spatial "
            << spatial.records.size() << " (failed " << spatial.stats.failed
            << ", rejected " << spatial.stats.rejected << "), fg_temporal "
            << temporal.records.size() << " (rejected "
            << temporal.stats.rejected << ")\n";
  return 0;
}

}  // namespace
}  // namespace egokit

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "tests/data/fixture";
  try {
    return egokit::run(dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
