// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0

#include "egokit/curation.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace egokit {
namespace {

struct PixelPoint {
  double x = 0.0;
  double y = 0.0;
};

// Centroid of the frame's hand-box centers, in pixels of that frame.
std::optional<PixelPoint> hand_center(const FrameDetections& frame) {
  if (frame.hand_boxes.empty()) return std::nullopt;
  double cx = 0.0;
  double cy = 0.0;
  for (const BBox& box : frame.hand_boxes) {
    cx += box.center_x();
    cy += box.center_y();
  }
  const double n = static_cast<double>(frame.hand_boxes.size());
  return PixelPoint{cx / n * frame.image_w, cy / n * frame.image_h};
}

}  // namespace

void FilterConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error("alpha must be in (0,1]");
  if (!(disp_fraction > 0.0 && disp_fraction <= 1.0)) {
    throw Error("disp_fraction must be in (0,1]");
  }
  if (!(min_duration_s > 0.0)) throw Error("min_duration_s must be positive");
  if (max_hands < 0) throw Error("max_hands must be non-negative");
  if (frame_stride < 1) throw Error("frame_stride must be at least 1");
  if (!(ego_threshold >= 0.0 && ego_threshold <= 1.0)) {
    throw Error("ego_threshold must be in [0,1]");
  }
}

std::string to_string(FilterRule rule) {
  switch (rule) {
    case FilterRule::none:
      return "none";
    case FilterRule::ego_score:
      return "ego_score";
    case FilterRule::duration:
      return "duration";
    case FilterRule::hand_count:
      return "hand_count";
    case FilterRule::object_coverage:
      return "object_coverage";
    case FilterRule::displacement:
      return "displacement";
  }
  throw Error("unknown filter rule value");
}

FilterRule parse_filter_rule(const std::string& text) {
  for (FilterRule rule :
       {FilterRule::none, FilterRule::ego_score, FilterRule::duration,
        FilterRule::hand_count, FilterRule::object_coverage,
        FilterRule::displacement}) {
    if (text == to_string(rule)) return rule;
  }
  throw Error("unknown filter rule \"" + text + "\"");
}

void to_json(json& j, const FilterDecision& d) {
  j = json{{"clip_id", d.clip_id},
           {"kept", d.kept},
           {"failed_rule", to_string(d.failed_rule)},
           {"metrics", d.metrics}};
  if (d.error_note) {
    j["error_note"] = *d.error_note;
  } else {
    j["error_note"] = nullptr;
  }
}

void from_json(const json& j, FilterDecision& d) {
  d.clip_id = require_key(j, "clip_id").get<std::string>();
  d.kept = require_key(j, "kept").get<bool>();
  d.failed_rule =
      parse_filter_rule(require_key(j, "failed_rule").get<std::string>());
  d.metrics = require_key(j, "metrics").get<std::map<std::string, double>>();
  const auto it = j.find("error_note");
  if (it != j.end() && !it->is_null()) {
    d.error_note = it->get<std::string>();
  } else {
    d.error_note = std::nullopt;
  }
}

bool ego_gate(const ClipRecord& clip, const FilterConfig& cfg) {
  if (!clip.ego_score) throw Error("ego score absent");
  return *clip.ego_score >= cfg.ego_threshold;
}

bool duration_rule(const ClipRecord& clip, const FilterConfig& cfg) {
  return clip.interval.duration() >= cfg.min_duration_s;
}

std::size_t max_hand_count(const ClipRecord& clip) {
  std::size_t most = 0;
  for (const FrameDetections& frame : clip.frames) {
    most = std::max(most, frame.hand_boxes.size());
  }
  return most;
}

bool hand_count_rule(const ClipRecord& clip, const FilterConfig& cfg) {
  return max_hand_count(clip) <= static_cast<std::size_t>(cfg.max_hands);
}

std::size_t total_object_boxes(const ClipRecord& clip) {
  std::size_t total = 0;
  for (const FrameDetections& frame : clip.frames) {
    total += frame.object_boxes.size();
  }
  return total;
}

bool object_coverage_rule(const ClipRecord& clip, const FilterConfig& cfg) {
  if (clip.frames.empty()) throw Error("empty clip");
  const double total = static_cast<double>(total_object_boxes(clip));
  const double n = static_cast<double>(clip.frames.size());
  return !(total < cfg.alpha * n);
}

double max_center_displacement(const ClipRecord& clip, int frame_stride) {
  std::vector<PixelPoint> centers;
  for (std::size_t i = 0; i < clip.frames.size();
       i += static_cast<std::size_t>(frame_stride)) {
    if (auto center = hand_center(clip.frames[i])) {
      centers.push_back(*center);
    }
  }
  double best = 0.0;
  for (std::size_t a = 0; a < centers.size(); ++a) {
    for (std::size_t b = a + 1; b < centers.size(); ++b) {
      const double dx = centers[a].x - centers[b].x;
      const double dy = centers[a].y - centers[b].y;
      best = std::max(best, std::hypot(dx, dy));
    }
  }
  return best;
}

bool displacement_rule(const ClipRecord& clip, const FilterConfig& cfg) {
  if (clip.frames.empty()) return false;
  const FrameDetections& first = clip.frames.front();
  const double threshold =
      cfg.disp_fraction * std::min(first.image_w, first.image_h);
  return max_center_displacement(clip, cfg.frame_stride) > threshold;
}

FilterDecision evaluate_clip(const ClipRecord& clip, const FilterConfig& cfg) {
  FilterDecision decision;
  decision.clip_id = clip.clip_id;

  auto fail = [&decision](FilterRule rule) {
    decision.kept = false;
    decision.failed_rule = rule;
  };
  // Runs one gate; a rule that raises rejects the clip at that rule.
  auto gate = [&](FilterRule rule, auto&& fn) {
    try {
      if (!fn()) fail(rule);
    } catch (const Error& e) {
      fail(rule);
      decision.error_note = e.what();
    }
    return decision.failed_rule == FilterRule::none;
  };

  if (clip.ego_score) decision.metrics["ego_score"] = *clip.ego_score;
  if (!gate(FilterRule::ego_score, [&] { return ego_gate(clip, cfg); })) {
    return decision;
  }

  decision.metrics["duration"] = clip.interval.duration();
  if (!gate(FilterRule::duration, [&] { return duration_rule(clip, cfg); })) {
    return decision;
  }

  decision.metrics["hand_count"] = static_cast<double>(max_hand_count(clip));
  if (!gate(FilterRule::hand_count,
            [&] { return hand_count_rule(clip, cfg); })) {
    return decision;
  }

  decision.metrics["object_coverage"] =
      static_cast<double>(total_object_boxes(clip));
  if (!gate(FilterRule::object_coverage,
            [&] { return object_coverage_rule(clip, cfg); })) {
    return decision;
  }

  decision.metrics["displacement"] =
      max_center_displacement(clip, cfg.frame_stride);
  if (!gate(FilterRule::displacement,
            [&] { return displacement_rule(clip, cfg); })) {
    return decision;
  }

  decision.kept = true;
  decision.failed_rule = FilterRule::none;
  return decision;
}

std::vector<FilterDecision> run_pipeline(const std::vector<ClipRecord>& clips,
                                         const FilterConfig& cfg) {
  cfg.validate();
  std::vector<FilterDecision> decisions;
  decisions.reserve(clips.size());
  for (const ClipRecord& clip : clips) {
    decisions.push_back(evaluate_clip(clip, cfg));
  }
  return decisions;
}

void SegmentConfig::validate() const {
  if (!(min_len_s > 0.0)) throw Error("min_len_s must be positive");
  if (!(max_len_s >= min_len_s)) throw Error("max_len_s must be >= min_len_s");
  if (!(max_gap_s >= 0.0)) throw Error("max_gap_s must be non-negative");
}

void to_json(json& j, const SegmentRecord& s) {
  j = json{{"segment_id", s.segment_id},
           {"video_id", s.video_id},
           {"interval", s.interval},
           {"clip_ids", s.clip_ids}};
  if (s.caption) {
    j["caption"] = *s.caption;
  } else {
    j["caption"] = nullptr;
  }
}

void from_json(const json& j, SegmentRecord& s) {
  s.segment_id = require_key(j, "segment_id").get<std::string>();
  s.video_id = require_key(j, "video_id").get<std::string>();
  s.interval = require_key(j, "interval").get<TimeInterval>();
  s.clip_ids = require_key(j, "clip_ids").get<std::vector<std::string>>();
  const auto it = j.find("caption");
  if (it != j.end() && !it->is_null()) {
    s.caption = it->get<std::string>();
  } else {
    s.caption = std::nullopt;
  }
}

namespace {

struct OpenSegment {
  std::vector<const ClipRecord*> clips;

  double start() const { return clips.front()->interval.start_s; }
  double end() const { return clips.back()->interval.end_s; }
};

void emit_segment(const OpenSegment& seg, const SegmentConfig& cfg,
                  std::size_t* counter, std::vector<SegmentRecord>* out) {
  const double duration = seg.end() - seg.start();
  if (duration < cfg.min_len_s || duration > cfg.max_len_s) return;

  SegmentRecord record;
  record.video_id = seg.clips.front()->video_id;
  record.segment_id = record.video_id + ":seg" + std::to_string((*counter)++);
  record.interval = TimeInterval{seg.start(), seg.end()};
  std::string caption;
  bool have_caption = false;
  for (const ClipRecord* clip : seg.clips) {
    record.clip_ids.push_back(clip->clip_id);
    if (clip->caption) {
      if (have_caption) caption += cfg.delimiter;
      caption += *clip->caption;
      have_caption = true;
    }
  }
  if (have_caption) record.caption = std::move(caption);
  out->push_back(std::move(record));
}

}  // namespace

std::vector<SegmentRecord> segment_long_term(
    const std::vector<ClipRecord>& clips, const SegmentConfig& cfg) {
  cfg.validate();

  // Videos keep their first-appearance order; clips are ordered by start
  // within each video, so pre-sorted input passes through unchanged.
  std::vector<std::string> video_order;
  std::map<std::string, std::vector<const ClipRecord*>> by_video;
  for (const ClipRecord& clip : clips) {
    auto [it, inserted] = by_video.try_emplace(clip.video_id);
    if (inserted) video_order.push_back(clip.video_id);
    it->second.push_back(&clip);
  }

  std::vector<SegmentRecord> segments;
  for (const std::string& video_id : video_order) {
    auto& group = by_video[video_id];
    std::stable_sort(group.begin(), group.end(),
                     [](const ClipRecord* a, const ClipRecord* b) {
                       return a->interval.start_s < b->interval.start_s;
                     });
    std::size_t counter = 0;
    OpenSegment open;
    for (const ClipRecord* clip : group) {
      if (open.clips.empty()) {
        open.clips.push_back(clip);
        continue;
      }
      const double gap = clip->interval.start_s - open.end();
      const double stretched = clip->interval.end_s - open.start();
      if (gap > cfg.max_gap_s || stretched > cfg.max_len_s) {
        emit_segment(open, cfg, &counter, &segments);
        open.clips.clear();
      }
      open.clips.push_back(clip);
    }
    if (!open.clips.empty()) emit_segment(open, cfg, &counter, &segments);
  }
  return segments;
}

}  // namespace egokit
