// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0

#include "egokit/metrics.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <unordered_map>

#include "egokit/rewards.hpp"
#include "egokit/structured_output.hpp"

namespace egokit {
namespace {

std::string normalize_option(const std::string& text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end &&
         std::isspace(static_cast<unsigned char>(text[begin]))) {
    ++begin;
  }
  while (end > begin &&
         std::isspace(static_cast<unsigned char>(text[end - 1]))) {
    --end;
  }
  std::string out = text.substr(begin, end - begin);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::toupper(c));
  });
  return out;
}

std::string tau_key(double tau) {
  std::array<char, 32> buf;
  const int n = std::snprintf(buf.data(), buf.size(), "%g", tau);
  return std::string(buf.data(), static_cast<std::size_t>(n));
}

double mean_of(const std::vector<EvalItem>& items, double (*pick)(const EvalItem&)) {
  if (items.empty()) return 0.0;
  double sum = 0.0;
  for (const EvalItem& item : items) sum += pick(item);
  return sum / static_cast<double>(items.size());
}

}  // namespace

std::string to_string(EvalKind kind) {
  switch (kind) {
    case EvalKind::spatial:
      return "spatial";
    case EvalKind::temporal:
      return "temporal";
    case EvalKind::mc:
      return "mc";
  }
  throw Error("unknown eval kind value");
}

EvalKind parse_eval_kind(const std::string& text) {
  if (text == "spatial") return EvalKind::spatial;
  if (text == "temporal") return EvalKind::temporal;
  if (text == "mc") return EvalKind::mc;
  throw Error("unknown eval kind \"" + text + "\"");
}

void to_json(json& j, const EvalItem& item) {
  j = json{{"qa_id", item.qa_id}, {"iou", item.iou}, {"correct", item.correct}};
}

void from_json(const json& j, EvalItem& item) {
  item.qa_id = require_key(j, "qa_id").get<std::string>();
  item.iou = require_key(j, "iou").get<double>();
  item.correct = require_key(j, "correct").get<bool>();
}

void to_json(json& j, const EvalReport& r) {
  j = json{{"kind", to_string(r.kind)},
           {"n", r.n},
           {"miou", r.miou},
           {"per_item", r.per_item},
           {"missing", r.missing}};
  j["loc_acc"] = r.loc_acc ? json(*r.loc_acc) : json(nullptr);
  j["mc_accuracy"] = r.mc_accuracy ? json(*r.mc_accuracy) : json(nullptr);
  j["r1_at"] = r.r1_at;
}

void from_json(const json& j, EvalReport& r) {
  r.kind = parse_eval_kind(require_key(j, "kind").get<std::string>());
  r.n = require_key(j, "n").get<std::size_t>();
  r.miou = require_key(j, "miou").get<double>();
  r.per_item = require_key(j, "per_item").get<std::vector<EvalItem>>();
  r.missing = require_key(j, "missing").get<std::vector<std::string>>();
  const auto loc = j.find("loc_acc");
  r.loc_acc = (loc != j.end() && !loc->is_null())
                  ? std::optional<double>(loc->get<double>())
                  : std::nullopt;
  const auto mc = j.find("mc_accuracy");
  r.mc_accuracy = (mc != j.end() && !mc->is_null())
                      ? std::optional<double>(mc->get<double>())
                      : std::nullopt;
  const auto r1 = j.find("r1_at");
  r.r1_at = (r1 != j.end() && !r1->is_null())
                ? r1->get<std::map<std::string, double>>()
                : std::map<std::string, double>{};
}

bool loc_acc(const BBox& pred, const BBox& gt) {
  const double cx = pred.center_x();
  const double cy = pred.center_y();
  return cx >= gt.x_min && cx <= gt.x_max && cy >= gt.y_min && cy <= gt.y_max;
}

double r1_at(const std::vector<TimeInterval>& preds,
             const std::vector<TimeInterval>& gts, double tau) {
  if (preds.size() != gts.size()) {
    throw Error("r1_at needs matched prediction and ground-truth lists");
  }
  if (preds.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (interval_iou(preds[i], gts[i]) >= tau) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

EvalReport evaluate(const std::vector<PredictionRecord>& preds,
                    const std::vector<QARecord>& gts, EvalKind kind,
                    const std::vector<double>& taus) {
  if (kind == EvalKind::temporal && taus.empty()) {
    throw Error("temporal evaluation needs at least one tau");
  }

  std::unordered_map<std::string, const QARecord*> gt_by_id;
  for (const QARecord& gt : gts) {
    if (!gt_by_id.emplace(gt.qa_id, &gt).second) {
      throw Error("duplicate ground-truth qa_id " + gt.qa_id);
    }
  }
  std::unordered_map<std::string, const PredictionRecord*> pred_by_id;
  for (const PredictionRecord& pred : preds) {
    if (!gt_by_id.count(pred.qa_id)) {
      throw Error("prediction qa_id " + pred.qa_id +
                  " has no ground-truth record");
    }
    if (!pred_by_id.emplace(pred.qa_id, &pred).second) {
      throw Error("duplicate prediction qa_id " + pred.qa_id);
    }
  }

  EvalReport report;
  report.kind = kind;
  report.n = gts.size();

  for (const QARecord& gt : gts) {
    EvalItem item;
    item.qa_id = gt.qa_id;
    const auto found = pred_by_id.find(gt.qa_id);
    if (found == pred_by_id.end()) {
      report.missing.push_back(gt.qa_id);
      report.per_item.push_back(std::move(item));
      continue;
    }
    const std::string& response = found->second->response_text;

    switch (kind) {
      case EvalKind::spatial: {
        if (!gt.gt_box) throw Error("gt_box absent on " + gt.qa_id);
        const ParseOutcome outcome =
            parse_response(response, PayloadKind::box);
        if (outcome.status == ParseStatus::ok) {
          const BBox& box = std::get<BBox>(outcome.answer->payload);
          item.iou = box_iou(box, *gt.gt_box);
          item.correct = loc_acc(box, *gt.gt_box);
        }
        break;
      }
      case EvalKind::temporal: {
        if (!gt.gt_interval) throw Error("gt_interval absent on " + gt.qa_id);
        const ParseOutcome outcome =
            parse_response(response, PayloadKind::interval);
        if (outcome.status == ParseStatus::ok) {
          const TimeInterval& iv =
              std::get<TimeInterval>(outcome.answer->payload);
          item.iou = interval_iou(iv, *gt.gt_interval);
          item.correct = item.iou >= taus.front();
        }
        break;
      }
      case EvalKind::mc: {
        item.correct =
            normalize_option(response) == normalize_option(gt.answer);
        item.iou = item.correct ? 1.0 : 0.0;
        break;
      }
    }
    report.per_item.push_back(std::move(item));
  }

  report.miou =
      mean_of(report.per_item, [](const EvalItem& i) { return i.iou; });
  const auto correct_mean = mean_of(
      report.per_item, [](const EvalItem& i) { return i.correct ? 1.0 : 0.0; });
  if (kind == EvalKind::spatial) report.loc_acc = correct_mean;
  if (kind == EvalKind::mc) report.mc_accuracy = correct_mean;
  if (kind == EvalKind::temporal) {
    for (double tau : taus) {
      std::size_t hits = 0;
      for (const EvalItem& item : report.per_item) {
        if (item.iou >= tau) ++hits;
      }
      report.r1_at[tau_key(tau)] =
          report.per_item.empty()
              ? 0.0
              : static_cast<double>(hits) /
                    static_cast<double>(report.per_item.size());
    }
  }
  return report;
}

}  // namespace egokit
