// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "egokit/jsonl.hpp"
#include "egokit/types.hpp"

namespace egokit {

struct FilterConfig {
  double ego_threshold = 0.5;
  int max_hands = 2;
  double alpha = 0.7;
  double disp_fraction = 0.1;
  double min_duration_s = 2.0;
  int frame_stride = 1;

  // Throws Error when a knob is outside its legal range.
  void validate() const;
};

// Pipeline order; failed_rule records the first rule that rejected a clip.
enum class FilterRule {
  none,
  ego_score,
  duration,
  hand_count,
  object_coverage,
  displacement,
};

std::string to_string(FilterRule rule);
FilterRule parse_filter_rule(const std::string& text);

struct FilterDecision {
  std::string clip_id;
  bool kept = false;
  FilterRule failed_rule = FilterRule::none;
  // Rule name -> the value the rule compared against its threshold.
  std::map<std::string, double> metrics;
  std::optional<std::string> error_note;

  bool operator==(const FilterDecision&) const = default;
};

void to_json(json& j, const FilterDecision& d);
void from_json(const json& j, FilterDecision& d);

// Individual gates; each returns true to keep the clip.
bool ego_gate(const ClipRecord& clip, const FilterConfig& cfg);
bool duration_rule(const ClipRecord& clip, const FilterConfig& cfg);
bool hand_count_rule(const ClipRecord& clip, const FilterConfig& cfg);
bool object_coverage_rule(const ClipRecord& clip, const FilterConfig& cfg);
bool displacement_rule(const ClipRecord& clip, const FilterConfig& cfg);

// Largest per-frame hand-box count; 0 for an empty clip.
std::size_t max_hand_count(const ClipRecord& clip);

// Object boxes summed over all frames.
std::size_t total_object_boxes(const ClipRecord& clip);

// Largest pairwise distance between per-frame hand centers, in pixels.
// Frames are subsampled by stride before pairing; frames without hands are
// skipped; fewer than two hand-bearing frames give 0.
double max_center_displacement(const ClipRecord& clip, int frame_stride);

// Applies ego_score -> duration -> hand_count -> object_coverage ->
// displacement, stopping at the first failure. Rule errors (absent ego score,
// empty clip) reject at that rule and carry an error note.
FilterDecision evaluate_clip(const ClipRecord& clip, const FilterConfig& cfg);

// Per-clip evaluate_clip in input order.
std::vector<FilterDecision> run_pipeline(const std::vector<ClipRecord>& clips,
                                         const FilterConfig& cfg);

struct SegmentConfig {
  double min_len_s = 15.0;
  double max_len_s = 120.0;
  double max_gap_s = 1.0;
  std::string delimiter = " ";

  void validate() const;
};

struct SegmentRecord {
  std::string segment_id;
  std::string video_id;
  TimeInterval interval;
  std::vector<std::string> clip_ids;
  std::optional<std::string> caption;

  bool operator==(const SegmentRecord&) const = default;
};

void to_json(json& j, const SegmentRecord& s);
void from_json(const json& j, SegmentRecord& s);

// Greedy left-to-right aggregation of same-video clips. A segment closes when
// the next clip would stretch it past max_len_s or sits more than max_gap_s
// after it. Segments outside [min_len_s, max_len_s] are dropped. Captions are
// joined in time order with the delimiter; a segment of caption-less clips
// gets no caption.
std::vector<SegmentRecord> segment_long_term(
    const std::vector<ClipRecord>& clips, const SegmentConfig& cfg);

}  // namespace egokit
