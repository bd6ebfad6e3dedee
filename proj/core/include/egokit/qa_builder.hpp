// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "egokit/annotator.hpp"
#include "egokit/curation.hpp"
#include "egokit/types.hpp"

namespace egokit {

// One of the sixteen question-type templates. The grounding templates are
// verbatim from the published prompt table; the others are original wordings
// (the source prints question types and examples, not generation prompts),
// marked reconstructed.
struct QuestionTemplate {
  Split split = Split::short_term;
  QuestionType type = QuestionType::short_object_existence;
  std::string prompt_text;
  bool reconstructed = true;
};

const std::vector<QuestionTemplate>& question_templates();
const QuestionTemplate& template_for(QuestionType type);

// Flattened prompt inputs shared by clips and segments.
struct PromptSource {
  std::string source_id;
  std::vector<std::string> clip_ids;
  TimeInterval interval;
  std::optional<std::string> caption;
  std::optional<std::string> narration;
};

PromptSource source_from(const ClipRecord& clip);
PromptSource source_from(const SegmentRecord& segment);

// Renders every slot in the template from the source. Throws Error
// "no text annotation" when the source lacks the text a slot needs.
AnnotatorRequest build_prompt(const QuestionTemplate& tmpl,
                              const PromptSource& source);

struct QaBuildOptions {
  std::uint64_t seed = 0;
  int concurrency = 1;
  double sampling_ratio = 1.0;
  int max_attempts = 3;
  int backoff_base_ms = 200;
  std::size_t min_rationale_chars = 200;
};

// Outcome of screening one annotator response.
struct QaValidation {
  enum class Verdict { accepted, rejected, skipped };
  Verdict verdict = Verdict::rejected;
  QARecord record;     // meaningful iff accepted
  std::string reason;  // meaningful iff rejected
};

// Parses the annotator's JSON envelope {question, answer, rationale?} into a
// QARecord. Rejects malformed JSON, empty answers, a question equal to its
// answer, a chain-of-thought rationale under min_rationale_chars, and
// grounding answers whose payload does not parse (those also populate
// gt_box/gt_interval on success). The {"skip": true} sentinel yields skipped.
QaValidation validate_qa(const std::string& response_text, QuestionType type,
                         const PromptSource& source,
                         const QaBuildOptions& options = {});

struct RunStats {
  std::size_t emitted = 0;
  std::size_t rejected = 0;
  std::size_t skipped = 0;   // skip sentinel
  std::size_t failed = 0;    // adapter gave up after retries
  std::size_t sampled_out = 0;
  std::size_t retries = 0;
};

struct RunResult {
  std::vector<QARecord> records;
  RunStats stats;
  std::vector<std::string> log;  // one line per rejected/skipped/failed source
};

// Builds one QA record per sampled source: pick a question type for the
// split, render the prompt, call the adapter with bounded retries, screen the
// response. Per-source randomness derives from (seed, source index), so
// results do not depend on concurrency; records come out in input order.
RunResult run_split(const std::vector<PromptSource>& sources, Split split,
                    AnnotatorAdapter& adapter,
                    const QaBuildOptions& options = {});

}  // namespace egokit
