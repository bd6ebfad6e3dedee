// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0

#include "egokit/qa_builder.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <deque>
#include <future>
#include <random>
#include <thread>
#include <utility>

#include "egokit/jsonl.hpp"
#include "egokit/structured_output.hpp"

namespace egokit {
namespace {

constexpr const char* kQaSystemPrompt =
    "You are a careful egocentric video QA annotator. Reply with a single "
    "JSON object {\"question\": ..., \"answer\": ...}; include a "
    "\"rationale\" field when reasoning is requested. Write nothing outside "
    "the JSON object.";

constexpr const char* kCotSystemPrompt =
    "You are a careful egocentric video QA annotator. First decide whether "
    "the segment warrants a chain-of-thought question. If it does not, reply "
    "exactly {\"skip\": true}. Otherwise reply with a single JSON object "
    "{\"question\": ..., \"answer\": ..., \"rationale\": ...} where the "
    "rationale reasons step by step over the captions. Write nothing outside "
    "the JSON object.";

constexpr const char* kFgSystemPrompt =
    "You are a grounding annotator. Reply with a single JSON object "
    "{\"answer\": ...} where answer is exactly the payload string the task "
    "requests, with no tags around it. Write nothing outside the JSON "
    "object.";

std::vector<QuestionTemplate> build_templates() {
  auto entry = [](QuestionType type, std::string prompt_text,
                  bool reconstructed = true) {
    QuestionTemplate t;
    t.split = split_of(type);
    t.type = type;
    t.prompt_text = std::move(prompt_text);
    t.reconstructed = reconstructed;
    return t;
  };

  const std::string short_evidence =
      "\nClip from [START]s to [END]s.\nText annotation: [NARRATION]\n"
      "Caption: [CAPTION]";
  const std::string long_evidence =
      "\nSegment from [START]s to [END]s.\nCaptions: [CAPTION]";

  std::vector<QuestionTemplate> templates;
  templates.push_back(entry(
      QuestionType::short_object_existence,
      "Write one question asking whether a particular object is present or "
      "in use in the clip, then answer it from the evidence." +
          short_evidence));
  templates.push_back(entry(
      QuestionType::short_object_attribute,
      "Write one question about the state or attribute of an object visible "
      "in the clip, then answer it from the evidence." + short_evidence));
  templates.push_back(entry(
      QuestionType::short_object_count,
      "Write one question counting objects or people visible in the clip, "
      "then answer it with the count." + short_evidence));
  templates.push_back(entry(
      QuestionType::short_object_interaction,
      "Write one question about how the camera wearer interacts with a "
      "specific object in the clip, then answer it." + short_evidence));
  templates.push_back(entry(
      QuestionType::short_action_description,
      "Write one question asking what actions the hands perform in the clip, "
      "then answer it by describing those actions." + short_evidence));
  templates.push_back(entry(
      QuestionType::short_action_reasoning,
      "Write one question asking why an action in the clip is performed, "
      "then answer it with the likely intent." + short_evidence));
  templates.push_back(entry(
      QuestionType::short_background_attribute,
      "Write one question about the setting or background of the clip, then "
      "answer it." + short_evidence));

  templates.push_back(entry(
      QuestionType::long_action_sequence,
      "Write one question about the ordered sequence of actions across the "
      "segment, then answer it step by step." + long_evidence));
  templates.push_back(entry(
      QuestionType::long_temporal_grounding,
      "Write one question asking when a described event happens in the "
      "segment, then answer it stating the start and end times in seconds." +
          long_evidence));
  templates.push_back(entry(
      QuestionType::long_object_count,
      "Write one question counting the distinct objects interacted with "
      "across the segment, then answer it with the total." + long_evidence));
  templates.push_back(entry(
      QuestionType::long_action_prediction,
      "Write one question asking what likely happens right after the "
      "segment, then answer it." + long_evidence));
  templates.push_back(entry(
      QuestionType::long_action_summary,
      "Write one question asking for a summary of the key actions across "
      "the segment, then answer it." + long_evidence));
  templates.push_back(entry(
      QuestionType::long_action_reasoning,
      "Write one question asking why the actions in the segment are "
      "performed, then answer it." + long_evidence));

  templates.push_back(entry(
      QuestionType::cot_reasoning,
      "Decide whether this segment supports a question that needs multi-step "
      "reasoning across its captions. If not, reply exactly "
      "{\"skip\": true}. Otherwise write one such question, answer it, and "
      "give a step-by-step rationale that cites the captions." +
          long_evidence));

  templates.push_back(entry(QuestionType::fg_spatial_grounding,
                            std::string(fg_spatial_prompt_template),
                            /*reconstructed=*/false));
  templates.push_back(entry(QuestionType::fg_temporal_grounding,
                            std::string(fg_temporal_prompt_template),
                            /*reconstructed=*/false));
  return templates;
}

std::string render_seconds(double value) {
  std::array<char, 32> buf;
  const int n = std::snprintf(buf.data(), buf.size(), "%.2f", value);
  return std::string(buf.data(), static_cast<std::size_t>(n));
}

// Replaces every occurrence of slot; requires text when the slot is present.
void substitute(std::string& text, const std::string& slot,
                const std::optional<std::string>& value) {
  std::size_t pos = text.find(slot);
  if (pos == std::string::npos) return;
  if (!value) throw Error("no text annotation");
  while (pos != std::string::npos) {
    text.replace(pos, slot.size(), *value);
    pos = text.find(slot, pos + value->size());
  }
}

std::string fold_trim(const std::string& text) {
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
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

// splitmix64 of the seed and source index; decorrelates per-source engines.
std::uint64_t derive_seed(std::uint64_t seed, std::size_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

const std::vector<QuestionTemplate>& question_templates() {
  static const std::vector<QuestionTemplate> templates = build_templates();
  return templates;
}

const QuestionTemplate& template_for(QuestionType type) {
  for (const QuestionTemplate& t : question_templates()) {
    if (t.type == type) return t;
  }
  throw Error("no template for question type " + to_string(type));
}

PromptSource source_from(const ClipRecord& clip) {
  PromptSource src;
  src.source_id = clip.clip_id;
  src.clip_ids = {clip.clip_id};
  src.interval = clip.interval;
  src.caption = clip.caption;
  src.narration = clip.narration;
  return src;
}

PromptSource source_from(const SegmentRecord& segment) {
  PromptSource src;
  src.source_id = segment.segment_id;
  src.clip_ids = segment.clip_ids;
  src.interval = segment.interval;
  src.caption = segment.caption;
  src.narration = std::nullopt;
  return src;
}

AnnotatorRequest build_prompt(const QuestionTemplate& tmpl,
                              const PromptSource& source) {
  if (!source.caption && !source.narration) throw Error("no text annotation");

  std::string user = tmpl.prompt_text;
  substitute(user, "[OBJECT]", source.narration);
  substitute(user, "[QUESTION]", source.narration);
  substitute(user, "[NARRATION]", source.narration);
  substitute(user, "[CAPTION]", source.caption);
  substitute(user, "[START]", render_seconds(source.interval.start_s));
  substitute(user, "[END]", render_seconds(source.interval.end_s));

  AnnotatorRequest request;
  request.user_prompt = std::move(user);
  switch (tmpl.split) {
    case Split::cot:
      request.system_prompt = kCotSystemPrompt;
      break;
    case Split::fg_spatial:
    case Split::fg_temporal:
      request.system_prompt = kFgSystemPrompt;
      break;
    default:
      request.system_prompt = kQaSystemPrompt;
      break;
  }
  return request;
}

QaValidation validate_qa(const std::string& response_text, QuestionType type,
                         const PromptSource& source,
                         const QaBuildOptions& options) {
  QaValidation out;
  const Split split = split_of(type);

  json j;
  try {
    j = json::parse(response_text);
  } catch (const json::exception&) {
    out.reason = "malformed annotator JSON";
    return out;
  }
  if (!j.is_object()) {
    out.reason = "malformed annotator JSON";
    return out;
  }

  const auto skip_it = j.find("skip");
  if (skip_it != j.end() && skip_it->is_boolean() && skip_it->get<bool>()) {
    if (split == Split::cot) {
      out.verdict = QaValidation::Verdict::skipped;
      return out;
    }
    out.reason = "skip sentinel outside cot";
    return out;
  }

  QARecord record;
  record.qa_id = to_string(split) + ":" + source.source_id;
  record.clip_ids = source.clip_ids;
  record.split = split;
  record.question_type = type;

  const bool grounding =
      split == Split::fg_spatial || split == Split::fg_temporal;

  if (!j.contains("answer") || !j["answer"].is_string()) {
    out.reason = "answer missing";
    return out;
  }
  record.answer = j["answer"].get<std::string>();
  if (fold_trim(record.answer).empty()) {
    out.reason = "answer empty";
    return out;
  }

  if (grounding) {
    // The question is the rendered grounding prompt itself.
    record.question = build_prompt(template_for(type), source).user_prompt;
    if (split == Split::fg_spatial) {
      const auto box = parse_box_payload(record.answer);
      if (!box) {
        out.reason = "payload_malformed";
        return out;
      }
      record.gt_box = *box;
    } else {
      const auto iv = parse_interval_payload(record.answer);
      if (!iv) {
        out.reason = "payload_malformed";
        return out;
      }
      record.gt_interval = *iv;
    }
  } else {
    if (!j.contains("question") || !j["question"].is_string()) {
      out.reason = "question missing";
      return out;
    }
    record.question = j["question"].get<std::string>();
    if (fold_trim(record.question).empty()) {
      out.reason = "question empty";
      return out;
    }
    if (fold_trim(record.question) == fold_trim(record.answer)) {
      out.reason = "question equals answer";
      return out;
    }
  }

  if (j.contains("rationale") && j["rationale"].is_string()) {
    record.rationale = j["rationale"].get<std::string>();
  }
  if (split == Split::cot) {
    if (!record.rationale ||
        record.rationale->size() < options.min_rationale_chars) {
      out.reason = "rationale too short";
      return out;
    }
  }

  const ValidationReport report = validate_qa_record(record);
  if (!report.ok()) {
    out.reason = report.issues.front();
    return out;
  }

  out.verdict = QaValidation::Verdict::accepted;
  out.record = std::move(record);
  return out;
}

namespace {

struct WorkItem {
  bool included = false;
  QuestionType type = QuestionType::short_object_existence;
  AnnotatorRequest request;
  std::string build_failure;  // prompt could not be rendered
};

struct WorkOutcome {
  bool adapter_ok = false;
  std::string text;
  std::size_t retries = 0;
  std::string failure;
};

WorkOutcome call_with_retries(AnnotatorAdapter& adapter,
                              const AnnotatorRequest& request,
                              const QaBuildOptions& options) {
  WorkOutcome outcome;
  for (int attempt = 1; attempt <= options.max_attempts; ++attempt) {
    try {
      outcome.text = adapter.complete(request).text;
      outcome.adapter_ok = true;
      return outcome;
    } catch (const AdapterError& e) {
      outcome.failure = e.what();
      if (attempt == options.max_attempts) break;
      ++outcome.retries;
      if (options.backoff_base_ms > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(
            options.backoff_base_ms << (attempt - 1)));
      }
    }
  }
  return outcome;
}

}  // namespace

RunResult run_split(const std::vector<PromptSource>& sources, Split split,
                    AnnotatorAdapter& adapter, const QaBuildOptions& options) {
  if (options.concurrency < 1) throw Error("concurrency must be at least 1");
  if (!(options.sampling_ratio >= 0.0 && options.sampling_ratio <= 1.0)) {
    throw Error("sampling_ratio must be in [0,1]");
  }
  if (options.max_attempts < 1) throw Error("max_attempts must be at least 1");

  const std::vector<QuestionType>& types = question_types_for(split);

  // Sampling and type choice are decided serially up front so that the
  // adapter call order cannot perturb them.
  std::vector<WorkItem> items(sources.size());
  for (std::size_t i = 0; i < sources.size(); ++i) {
    std::mt19937_64 rng(derive_seed(options.seed, i));
    const double u = unit_draw(rng);
    WorkItem& item = items[i];
    if (u >= options.sampling_ratio) continue;
    item.type = types.size() == 1
                    ? types.front()
                    : types[static_cast<std::size_t>(unit_draw(rng) *
                                                     types.size()) %
                            types.size()];
    try {
      item.request = build_prompt(template_for(item.type), sources[i]);
      item.included = true;
    } catch (const Error& e) {
      item.build_failure = e.what();
    }
  }

  std::vector<WorkOutcome> outcomes(sources.size());
  std::deque<std::pair<std::size_t, std::future<WorkOutcome>>> window;
  auto drain_one = [&] {
    auto& [index, future] = window.front();
    outcomes[index] = future.get();
    window.pop_front();
  };
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (!items[i].included) continue;
    window.emplace_back(i, std::async(std::launch::async, [&, i] {
                          return call_with_retries(adapter, items[i].request,
                                                   options);
                        }));
    if (window.size() >= static_cast<std::size_t>(options.concurrency)) {
      drain_one();
    }
  }
  while (!window.empty()) drain_one();

  RunResult result;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const std::string& id = sources[i].source_id;
    if (!items[i].included) {
      if (!items[i].build_failure.empty()) {
        ++result.stats.rejected;
        result.log.push_back(id + ": rejected: " + items[i].build_failure);
      } else {
        ++result.stats.sampled_out;
      }
      continue;
    }
    const WorkOutcome& outcome = outcomes[i];
    result.stats.retries += outcome.retries;
    if (!outcome.adapter_ok) {
      ++result.stats.failed;
      result.log.push_back(id + ": adapter failed after " +
                           std::to_string(options.max_attempts) +
                           " attempts: " + outcome.failure);
      continue;
    }
    QaValidation validation =
        validate_qa(outcome.text, items[i].type, sources[i], options);
    switch (validation.verdict) {
      case QaValidation::Verdict::accepted:
        ++result.stats.emitted;
        result.records.push_back(std::move(validation.record));
        break;
      case QaValidation::Verdict::rejected:
        ++result.stats.rejected;
        result.log.push_back(id + ": rejected: " + validation.reason);
        break;
      case QaValidation::Verdict::skipped:
        ++result.stats.skipped;
        result.log.push_back(id + ": skip sentinel");
        break;
    }
  }
  return result;
}

}  // namespace egokit
