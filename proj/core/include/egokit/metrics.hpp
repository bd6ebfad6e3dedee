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

enum class EvalKind { spatial, temporal, mc };

std::string to_string(EvalKind kind);
EvalKind parse_eval_kind(const std::string& text);

struct EvalItem {
  std::string qa_id;
  double iou = 0.0;
  bool correct = false;

  bool operator==(const EvalItem&) const = default;
};

// Aggregates are exactly the means of per_item; missing lists ground-truth
// ids that had no prediction (their items score 0).
struct EvalReport {
  EvalKind kind = EvalKind::spatial;
  std::size_t n = 0;
  double miou = 0.0;
  std::optional<double> loc_acc;            // spatial
  std::map<std::string, double> r1_at;      // temporal, key is the tau text
  std::optional<double> mc_accuracy;        // mc
  std::vector<EvalItem> per_item;
  std::vector<std::string> missing;
};

void to_json(json& j, const EvalReport& r);
void from_json(const json& j, EvalReport& r);

// True iff pred's center lies in the closed gt box.
bool loc_acc(const BBox& pred, const BBox& gt);

// Fraction of queries whose interval IoU reaches tau. Lengths must match.
double r1_at(const std::vector<TimeInterval>& preds,
             const std::vector<TimeInterval>& gts, double tau);

// Joins predictions onto ground truth by qa_id. Responses are parsed with the
// think/answer protocol for spatial and temporal kinds; mc compares the bare
// response to the answer by trimmed, case-folded exact match. A prediction
// with an unknown or duplicate qa_id raises; a ground truth without a
// prediction scores 0 and is listed in missing. For temporal items, correct
// means IoU >= the first tau.
EvalReport evaluate(const std::vector<PredictionRecord>& preds,
                    const std::vector<QARecord>& gts, EvalKind kind,
                    const std::vector<double>& taus = {0.05});

}  // namespace egokit
