// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "egokit/types.hpp"

namespace egokit {

enum class PayloadKind { box, interval, free };

std::string to_string(PayloadKind kind);
PayloadKind parse_payload_kind(const std::string& text);

enum class ParseStatus { ok, format_mismatch, payload_malformed };

std::string to_string(ParseStatus status);
ParseStatus parse_parse_status(const std::string& text);

// monostate stands for free text.
using AnswerPayload = std::variant<std::monostate, BBox, TimeInterval>;

struct GroundedAnswer {
  std::string think_text;
  std::string answer_text;
  AnswerPayload payload;
};

// answer is present iff the tag structure matched (status != format_mismatch).
struct ParseOutcome {
  ParseStatus status = ParseStatus::format_mismatch;
  std::optional<GroundedAnswer> answer;
};

struct ParseOptions {
  // Strips surrounding whitespace from think_text and answer_text. Payload
  // parsing always ignores surrounding whitespace either way.
  bool trim_contents = false;
};

// Accepts exactly one <think>...</think> block followed by exactly one
// <answer>...</answer> block; only whitespace may appear outside them and
// neither block may contain a tag token. A structure match with an answer
// that fails the expected payload grammar is payload_malformed.
ParseOutcome parse_response(std::string_view text, PayloadKind expected,
                            const ParseOptions& options = {});

// Payload grammars, without the surrounding tags. Both accept surrounding
// whitespace but none inside, require plain decimal numbers (no exponent,
// ".5" allowed), and reject out-of-range or inverted values.
std::optional<BBox> parse_box_payload(std::string_view text);
std::optional<TimeInterval> parse_interval_payload(std::string_view text);

// "(start,end)", each rendered "%.2f".
std::string render_interval(const TimeInterval& iv);

// "(x_min,y_min),(x_max,y_max)", each rendered "%.3f".
std::string render_box(const BBox& box);

// Grounding prompt templates, shipped verbatim with their substitution slots.
inline constexpr std::string_view fg_spatial_prompt_template =
    "This is an image containing an object: \"[OBJECT]\" ,and output the "
    "bounding box of this object in the image. Output your thought process "
    "within the <think> </think> tags. Then provide your bounding box within "
    "the <answer> </answer> tags,following <answer> (x_min,y_min),(x_max,"
    "y_max) </answer> format. The bounding box coordinates are normalized to "
    "the range [0, 1], relative to the width and height of the image.";

inline constexpr std::string_view fg_temporal_prompt_template =
    "To accurately pinpoint the event \"[QUESTION]\" in the video, you need "
    "to identify a time interval from which the answer to the question can "
    "be deduced. Output your thought process within the <think> </think> "
    "tags. Then, provide the start and end times (in seconds, precise to two "
    "decimal places) in the format \"(start,end)\" within the <answer> "
    "</answer> tags.";

std::string render_fg_spatial_prompt(std::string_view object_name);
std::string render_fg_temporal_prompt(std::string_view question);

}  // namespace egokit
