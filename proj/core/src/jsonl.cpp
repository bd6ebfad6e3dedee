// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0

#include "egokit/jsonl.hpp"

namespace egokit {
namespace {

// Serializes an optional as an explicit null; readers accept a missing key
// as null so hand-written inputs stay convenient.
template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& value) {
  if (value) {
    j[key] = *value;
  } else {
    j[key] = nullptr;
  }
}

template <typename T>
std::optional<T> get_optional(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

}  // namespace

const json& require_key(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw JsonlError(std::string("missing field \"") + key + "\"", 0, key);
  }
  return *it;
}

std::string to_jsonl_line(const json& j) { return j.dump(); }

json detail::parse_line(const std::string& line, std::size_t line_no) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    throw JsonlError("line " + std::to_string(line_no) + ": " + e.what(),
                     line_no, "");
  }
}

void to_json(json& j, const BBox& b) {
  j = json{{"x_min", b.x_min},
           {"y_min", b.y_min},
           {"x_max", b.x_max},
           {"y_max", b.y_max}};
}

void from_json(const json& j, BBox& b) {
  b.x_min = require_key(j, "x_min").get<double>();
  b.y_min = require_key(j, "y_min").get<double>();
  b.x_max = require_key(j, "x_max").get<double>();
  b.y_max = require_key(j, "y_max").get<double>();
}

void to_json(json& j, const TimeInterval& iv) {
  j = json{{"start_s", iv.start_s}, {"end_s", iv.end_s}};
}

void from_json(const json& j, TimeInterval& iv) {
  iv.start_s = require_key(j, "start_s").get<double>();
  iv.end_s = require_key(j, "end_s").get<double>();
}

void to_json(json& j, const FrameDetections& f) {
  j = json{{"frame_index", f.frame_index}, {"timestamp_s", f.timestamp_s},
           {"hand_boxes", f.hand_boxes},   {"object_boxes", f.object_boxes},
           {"image_w", f.image_w},         {"image_h", f.image_h}};
}

void from_json(const json& j, FrameDetections& f) {
  f.frame_index = require_key(j, "frame_index").get<std::int64_t>();
  f.timestamp_s = require_key(j, "timestamp_s").get<double>();
  f.hand_boxes = require_key(j, "hand_boxes").get<std::vector<BBox>>();
  f.object_boxes = require_key(j, "object_boxes").get<std::vector<BBox>>();
  f.image_w = require_key(j, "image_w").get<int>();
  f.image_h = require_key(j, "image_h").get<int>();
}

void to_json(json& j, const ClipRecord& c) {
  j = json{{"clip_id", c.clip_id},
           {"video_id", c.video_id},
           {"interval", c.interval},
           {"frames", c.frames}};
  put_optional(j, "ego_score", c.ego_score);
  put_optional(j, "caption", c.caption);
  put_optional(j, "narration", c.narration);
}

void from_json(const json& j, ClipRecord& c) {
  c.clip_id = require_key(j, "clip_id").get<std::string>();
  c.video_id = require_key(j, "video_id").get<std::string>();
  c.interval = require_key(j, "interval").get<TimeInterval>();
  c.frames = require_key(j, "frames").get<std::vector<FrameDetections>>();
  c.ego_score = get_optional<double>(j, "ego_score");
  c.caption = get_optional<std::string>(j, "caption");
  c.narration = get_optional<std::string>(j, "narration");
}

void to_json(json& j, const QARecord& q) {
  j = json{{"qa_id", q.qa_id},
           {"clip_ids", q.clip_ids},
           {"split", to_string(q.split)},
           {"question_type", to_string(q.question_type)},
           {"question", q.question},
           {"answer", q.answer}};
  put_optional(j, "rationale", q.rationale);
  put_optional(j, "gt_box", q.gt_box);
  put_optional(j, "gt_interval", q.gt_interval);
}

void from_json(const json& j, QARecord& q) {
  q.qa_id = require_key(j, "qa_id").get<std::string>();
  q.clip_ids = require_key(j, "clip_ids").get<std::vector<std::string>>();
  q.split = parse_split(require_key(j, "split").get<std::string>());
  q.question_type =
      parse_question_type(require_key(j, "question_type").get<std::string>());
  q.question = require_key(j, "question").get<std::string>();
  q.answer = require_key(j, "answer").get<std::string>();
  q.rationale = get_optional<std::string>(j, "rationale");
  q.gt_box = get_optional<BBox>(j, "gt_box");
  q.gt_interval = get_optional<TimeInterval>(j, "gt_interval");
}

void to_json(json& j, const PredictionRecord& p) {
  j = json{{"qa_id", p.qa_id}, {"response_text", p.response_text}};
}

void from_json(const json& j, PredictionRecord& p) {
  p.qa_id = require_key(j, "qa_id").get<std::string>();
  p.response_text = require_key(j, "response_text").get<std::string>();
}

}  // namespace egokit
