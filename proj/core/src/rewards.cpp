// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0

#include "egokit/rewards.hpp"

#include <algorithm>

namespace egokit {

void to_json(json& j, const RewardRecord& r) {
  j = json{{"qa_id", r.qa_id},
           {"task", to_string(r.breakdown.task)},
           {"r_format", r.breakdown.r_format},
           {"r_iou", r.breakdown.r_iou},
           {"total", r.breakdown.total}};
  if (r.breakdown.note) {
    j["note"] = *r.breakdown.note;
  } else {
    j["note"] = nullptr;
  }
}

void from_json(const json& j, RewardRecord& r) {
  r.qa_id = require_key(j, "qa_id").get<std::string>();
  r.breakdown.task = parse_task(require_key(j, "task").get<std::string>());
  r.breakdown.r_format = require_key(j, "r_format").get<double>();
  r.breakdown.r_iou = require_key(j, "r_iou").get<double>();
  r.breakdown.total = require_key(j, "total").get<double>();
  const auto it = j.find("note");
  if (it != j.end() && !it->is_null()) {
    r.breakdown.note = it->get<std::string>();
  } else {
    r.breakdown.note = std::nullopt;
  }
}

double format_reward(const ParseOutcome& outcome) {
  return outcome.status == ParseStatus::format_mismatch ? 0.0 : 1.0;
}

double box_iou(const BBox& a, const BBox& b) {
  const double ix = std::max(
      0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
  const double iy = std::max(
      0.0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

double interval_iou(const TimeInterval& a, const TimeInterval& b) {
  const double inter = std::max(
      0.0, std::min(a.end_s, b.end_s) - std::max(a.start_s, b.start_s));
  const double uni = a.duration() + b.duration() - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

RewardBreakdown score_candidate(std::string_view response_text,
                                const QARecord& gt) {
  RewardBreakdown out;
  PayloadKind expected;
  if (gt.split == Split::fg_spatial) {
    out.task = Task::og;
    expected = PayloadKind::box;
    if (!gt.gt_box) throw Error("gt_box absent on " + gt.qa_id);
  } else if (gt.split == Split::fg_temporal) {
    out.task = Task::tg;
    expected = PayloadKind::interval;
    if (!gt.gt_interval) throw Error("gt_interval absent on " + gt.qa_id);
  } else {
    throw Error("split " + to_string(gt.split) +
                " has no verifiable grounding reward");
  }

  const ParseOutcome outcome = parse_response(response_text, expected);
  out.r_format = format_reward(outcome);
  if (outcome.status == ParseStatus::ok) {
    if (expected == PayloadKind::box) {
      out.r_iou = box_iou(std::get<BBox>(outcome.answer->payload), *gt.gt_box);
    } else {
      out.r_iou = interval_iou(std::get<TimeInterval>(outcome.answer->payload),
                               *gt.gt_interval);
    }
  }
  out.total = out.r_format + out.r_iou;
  return out;
}

std::vector<RewardBreakdown> score_group(
    const std::vector<std::string>& responses, const QARecord& gt) {
  std::vector<RewardBreakdown> out;
  out.reserve(responses.size());
  for (const std::string& response : responses) {
    try {
      out.push_back(score_candidate(response, gt));
    } catch (const Error& e) {
      RewardBreakdown zero;
      zero.task = gt.split == Split::fg_temporal ? Task::tg : Task::og;
      zero.note = e.what();
      out.push_back(std::move(zero));
    }
  }
  return out;
}

}  // namespace egokit
