// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "egokit/jsonl.hpp"
#include "egokit/structured_output.hpp"
#include "egokit/types.hpp"

namespace egokit {

struct RewardBreakdown {
  Task task = Task::og;
  double r_format = 0.0;  // 0 or 1
  double r_iou = 0.0;     // [0,1]; 0 whenever the payload failed to parse
  double total = 0.0;     // r_format + r_iou
  std::optional<std::string> note;

  bool operator==(const RewardBreakdown&) const = default;
};

// RewardBreakdown joined onto its prediction, as written to reward files.
struct RewardRecord {
  std::string qa_id;
  RewardBreakdown breakdown;

  bool operator==(const RewardRecord&) const = default;
};

void to_json(json& j, const RewardRecord& r);
void from_json(const json& j, RewardRecord& r);

// 1 iff the tag structure matched; payload validity does not matter.
double format_reward(const ParseOutcome& outcome);

// area(a intersect b) / area(a union b); 0 when the union has zero area.
double box_iou(const BBox& a, const BBox& b);

// Length ratio on the real line; 0 when the union has zero length.
double interval_iou(const TimeInterval& a, const TimeInterval& b);

// Scores one response against a grounding QARecord. The split selects the
// payload: fg_spatial scores boxes (task og), fg_temporal scores intervals
// (task tg). Throws Error for other splits or a missing ground-truth field.
RewardBreakdown score_candidate(std::string_view response_text,
                                const QARecord& gt);

// Elementwise score_candidate; a candidate that raises becomes a zero-reward
// entry with the error as its note.
std::vector<RewardBreakdown> score_group(
    const std::vector<std::string>& responses, const QARecord& gt);

}  // namespace egokit
