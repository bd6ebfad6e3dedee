// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace egokit {

// Data-level failure (bad records, missing fields, impossible configs).
// The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Axis-aligned box in normalized image coordinates; every value lies in [0,1].
struct BBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  double center_x() const { return 0.5 * (x_min + x_max); }
  double center_y() const { return 0.5 * (y_min + y_max); }
  bool valid() const {
    return x_min >= 0.0 && y_min >= 0.0 && x_max <= 1.0 && y_max <= 1.0 &&
           x_min <= x_max && y_min <= y_max;
  }
  bool operator==(const BBox&) const = default;
};

// Closed time interval in seconds.
struct TimeInterval {
  double start_s = 0.0;
  double end_s = 0.0;

  double duration() const { return end_s - start_s; }
  bool valid() const { return start_s >= 0.0 && start_s <= end_s; }
  bool operator==(const TimeInterval&) const = default;
};

// One frame of upstream detector output. Box coordinates are normalized;
// image_w/image_h keep the pixel frame so displacement thresholds can be
// computed in pixel units.
struct FrameDetections {
  std::int64_t frame_index = 0;
  double timestamp_s = 0.0;
  std::vector<BBox> hand_boxes;
  std::vector<BBox> object_boxes;
  int image_w = 0;
  int image_h = 0;

  bool operator==(const FrameDetections&) const = default;
};

struct ClipRecord {
  std::string clip_id;
  std::string video_id;
  TimeInterval interval;
  std::vector<FrameDetections> frames;
  std::optional<double> ego_score;
  std::optional<std::string> caption;
  std::optional<std::string> narration;

  bool operator==(const ClipRecord&) const = default;
};

enum class Split { short_term, long_term, cot, fg_spatial, fg_temporal };

// The sixteen question types, prefixed by the split that owns them.
enum class QuestionType {
  short_object_existence,
  short_object_attribute,
  short_object_count,
  short_object_interaction,
  short_action_description,
  short_action_reasoning,
  short_background_attribute,
  long_action_sequence,
  long_temporal_grounding,
  long_object_count,
  long_action_prediction,
  long_action_summary,
  long_action_reasoning,
  cot_reasoning,
  fg_spatial_grounding,
  fg_temporal_grounding,
};

// Grounding reward task: og scores boxes, tg scores intervals.
enum class Task { og, tg };

std::string to_string(Split split);
std::string to_string(QuestionType type);
std::string to_string(Task task);

// Accepts the serialized name; splits additionally accept the hyphenated CLI
// spelling ("fg-spatial"). Throws Error on unknown names.
Split parse_split(const std::string& text);
QuestionType parse_question_type(const std::string& text);
Task parse_task(const std::string& text);

Split split_of(QuestionType type);
const std::vector<QuestionType>& question_types_for(Split split);

struct QARecord {
  std::string qa_id;
  std::vector<std::string> clip_ids;
  Split split = Split::short_term;
  QuestionType question_type = QuestionType::short_object_existence;
  std::string question;
  std::string answer;
  std::optional<std::string> rationale;
  std::optional<BBox> gt_box;
  std::optional<TimeInterval> gt_interval;

  bool operator==(const QARecord&) const = default;
};

// One model output to be scored or evaluated against a QARecord.
struct PredictionRecord {
  std::string qa_id;
  std::string response_text;

  bool operator==(const PredictionRecord&) const = default;
};

struct ValidationReport {
  std::vector<std::string> issues;

  bool ok() const { return issues.empty(); }
};

// Lists every violated invariant; an empty report means the record is
// well-formed. Never throws.
ValidationReport validate_clip(const ClipRecord& clip);
ValidationReport validate_qa_record(const QARecord& record);

}  // namespace egokit
