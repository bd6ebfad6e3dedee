// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0

#include "egokit/types.hpp"

#include <array>
#include <cmath>
#include <utility>

namespace egokit {
namespace {

constexpr double kIntervalSlack = 1e-9;

constexpr std::array<std::pair<Split, const char*>, 5> kSplitNames = {{
    {Split::short_term, "short"},
    {Split::long_term, "long"},
    {Split::cot, "cot"},
    {Split::fg_spatial, "fg_spatial"},
    {Split::fg_temporal, "fg_temporal"},
}};

constexpr std::array<std::pair<QuestionType, const char*>, 16> kTypeNames = {{
    {QuestionType::short_object_existence, "short_object_existence"},
    {QuestionType::short_object_attribute, "short_object_attribute"},
    {QuestionType::short_object_count, "short_object_count"},
    {QuestionType::short_object_interaction, "short_object_interaction"},
    {QuestionType::short_action_description, "short_action_description"},
    {QuestionType::short_action_reasoning, "short_action_reasoning"},
    {QuestionType::short_background_attribute, "short_background_attribute"},
    {QuestionType::long_action_sequence, "long_action_sequence"},
    {QuestionType::long_temporal_grounding, "long_temporal_grounding"},
    {QuestionType::long_object_count, "long_object_count"},
    {QuestionType::long_action_prediction, "long_action_prediction"},
    {QuestionType::long_action_summary, "long_action_summary"},
    {QuestionType::long_action_reasoning, "long_action_reasoning"},
    {QuestionType::cot_reasoning, "cot_reasoning"},
    {QuestionType::fg_spatial_grounding, "fg_spatial_grounding"},
    {QuestionType::fg_temporal_grounding, "fg_temporal_grounding"},
}};

std::string normalize_split_name(const std::string& text) {
  std::string out = text;
  for (char& c : out) {
    if (c == '-') c = '_';
  }
  return out;
}

}  // namespace

std::string to_string(Split split) {
  for (const auto& [value, name] : kSplitNames) {
    if (value == split) return name;
  }
  throw Error("unknown split value");
}

std::string to_string(QuestionType type) {
  for (const auto& [value, name] : kTypeNames) {
    if (value == type) return name;
  }
  throw Error("unknown question type value");
}

std::string to_string(Task task) { return task == Task::og ? "og" : "tg"; }

Split parse_split(const std::string& text) {
  const std::string name = normalize_split_name(text);
  for (const auto& [value, candidate] : kSplitNames) {
    if (name == candidate) return value;
  }
  throw Error("unknown split \"" + text + "\"");
}

QuestionType parse_question_type(const std::string& text) {
  for (const auto& [value, candidate] : kTypeNames) {
    if (text == candidate) return value;
  }
  throw Error("unknown question type \"" + text + "\"");
}

Task parse_task(const std::string& text) {
  if (text == "og") return Task::og;
  if (text == "tg") return Task::tg;
  throw Error("unknown task \"" + text + "\"");
}

Split split_of(QuestionType type) {
  switch (type) {
    case QuestionType::short_object_existence:
    case QuestionType::short_object_attribute:
    case QuestionType::short_object_count:
    case QuestionType::short_object_interaction:
    case QuestionType::short_action_description:
    case QuestionType::short_action_reasoning:
    case QuestionType::short_background_attribute:
      return Split::short_term;
    case QuestionType::long_action_sequence:
    case QuestionType::long_temporal_grounding:
    case QuestionType::long_object_count:
    case QuestionType::long_action_prediction:
    case QuestionType::long_action_summary:
    case QuestionType::long_action_reasoning:
      return Split::long_term;
    case QuestionType::cot_reasoning:
      return Split::cot;
    case QuestionType::fg_spatial_grounding:
      return Split::fg_spatial;
    case QuestionType::fg_temporal_grounding:
      return Split::fg_temporal;
  }
  throw Error("unknown question type value");
}

const std::vector<QuestionType>& question_types_for(Split split) {
  static const std::vector<QuestionType> short_types = {
      QuestionType::short_object_existence,
      QuestionType::short_object_attribute,
      QuestionType::short_object_count,
      QuestionType::short_object_interaction,
      QuestionType::short_action_description,
      QuestionType::short_action_reasoning,
      QuestionType::short_background_attribute,
  };
  static const std::vector<QuestionType> long_types = {
      QuestionType::long_action_sequence,
      QuestionType::long_temporal_grounding,
      QuestionType::long_object_count,
      QuestionType::long_action_prediction,
      QuestionType::long_action_summary,
      QuestionType::long_action_reasoning,
  };
  static const std::vector<QuestionType> cot_types = {
      QuestionType::cot_reasoning,
  };
  static const std::vector<QuestionType> fg_spatial_types = {
      QuestionType::fg_spatial_grounding,
  };
  static const std::vector<QuestionType> fg_temporal_types = {
      QuestionType::fg_temporal_grounding,
  };
  switch (split) {
    case Split::short_term:
      return short_types;
    case Split::long_term:
      return long_types;
    case Split::cot:
      return cot_types;
    case Split::fg_spatial:
      return fg_spatial_types;
    case Split::fg_temporal:
      return fg_temporal_types;
  }
  throw Error("unknown split value");
}

ValidationReport validate_clip(const ClipRecord& clip) {
  ValidationReport report;
  auto issue = [&report](std::string text) {
    report.issues.push_back(std::move(text));
  };

  if (clip.clip_id.empty()) issue("clip_id empty");
  if (clip.interval.start_s < 0.0) issue("interval negative");
  if (clip.interval.end_s < clip.interval.start_s) issue("interval inverted");
  if (clip.ego_score &&
      (*clip.ego_score < 0.0 || *clip.ego_score > 1.0 ||
       !std::isfinite(*clip.ego_score))) {
    issue("ego score out of range");
  }

  double prev_timestamp = 0.0;
  bool have_prev = false;
  for (const FrameDetections& frame : clip.frames) {
    const std::string where = " at frame " + std::to_string(frame.frame_index);
    if (frame.image_w <= 0 || frame.image_h <= 0) {
      issue("image dims nonpositive" + where);
    }
    if (frame.timestamp_s < clip.interval.start_s - kIntervalSlack ||
        frame.timestamp_s > clip.interval.end_s + kIntervalSlack) {
      issue("frame outside interval" + where);
    }
    if (have_prev && frame.timestamp_s <= prev_timestamp) {
      issue("timestamps not increasing" + where);
    }
    prev_timestamp = frame.timestamp_s;
    have_prev = true;
    for (const BBox& box : frame.hand_boxes) {
      if (!box.valid()) {
        issue("hand box invalid" + where);
        break;
      }
    }
    for (const BBox& box : frame.object_boxes) {
      if (!box.valid()) {
        issue("object box invalid" + where);
        break;
      }
    }
  }
  return report;
}

ValidationReport validate_qa_record(const QARecord& record) {
  ValidationReport report;
  auto issue = [&report](std::string text) {
    report.issues.push_back(std::move(text));
  };

  if (record.qa_id.empty()) issue("qa_id empty");
  if (record.question.empty()) issue("question empty");
  if (record.answer.empty()) issue("answer empty");
  if (split_of(record.question_type) != record.split) {
    issue("question type not valid for split");
  }
  if (record.split == Split::fg_spatial) {
    if (!record.gt_box) {
      issue("gt_box absent");
    } else if (!record.gt_box->valid()) {
      issue("gt_box invalid");
    }
  }
  if (record.split == Split::fg_temporal) {
    if (!record.gt_interval) {
      issue("gt_interval absent");
    } else if (!record.gt_interval->valid()) {
      issue("gt_interval invalid");
    }
  }
  return report;
}

}  // namespace egokit
