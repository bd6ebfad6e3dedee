// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0

#include "egokit/structured_output.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace egokit {
namespace {

constexpr std::string_view kThinkOpen = "<think>";
constexpr std::string_view kThinkClose = "</think>";
constexpr std::string_view kAnswerOpen = "<answer>";
constexpr std::string_view kAnswerClose = "</answer>";

bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool all_space(std::string_view s) {
  for (char c : s) {
    if (!is_space(c)) return false;
  }
  return true;
}

bool contains_tag_token(std::string_view s) {
  for (std::string_view tag :
       {kThinkOpen, kThinkClose, kAnswerOpen, kAnswerClose}) {
    if (s.find(tag) != std::string_view::npos) return true;
  }
  return false;
}

// Pulls the inner text of the next tag block out of s, which must start with
// open (after leading whitespace). Returns false when the structure is absent.
bool take_block(std::string_view& s, std::string_view open,
                std::string_view close, std::string_view& inner) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  if (s.substr(0, open.size()) != open) return false;
  s.remove_prefix(open.size());
  const auto end = s.find(close);
  if (end == std::string_view::npos) return false;
  inner = s.substr(0, end);
  s.remove_prefix(end + close.size());
  return true;
}

// Plain decimal with optional leading zero omitted; no sign, no exponent.
bool parse_decimal(std::string_view token, double& value) {
  if (token.empty()) return false;
  const auto dot = token.find('.');
  if (dot != std::string_view::npos) {
    if (token.find('.', dot + 1) != std::string_view::npos) return false;
    if (dot + 1 == token.size()) return false;  // "5." has no fraction digits
    if (token.size() == 1) return false;        // lone "."
  }
  for (std::size_t i = 0; i < token.size(); ++i) {
    const char c = token[i];
    if (c == '.' && i == dot) continue;
    if (c < '0' || c > '9') return false;
  }
  const auto result =
      std::from_chars(token.data(), token.data() + token.size(), value);
  return result.ec == std::errc() &&
         result.ptr == token.data() + token.size();
}

// "(a,b)" with no internal whitespace.
bool parse_pair(std::string_view& s, double& a, double& b) {
  if (s.empty() || s.front() != '(') return false;
  s.remove_prefix(1);
  const auto comma = s.find(',');
  if (comma == std::string_view::npos) return false;
  if (!parse_decimal(s.substr(0, comma), a)) return false;
  s.remove_prefix(comma + 1);
  const auto paren = s.find(')');
  if (paren == std::string_view::npos) return false;
  if (!parse_decimal(s.substr(0, paren), b)) return false;
  s.remove_prefix(paren + 1);
  return true;
}

}  // namespace

std::string to_string(PayloadKind kind) {
  switch (kind) {
    case PayloadKind::box:
      return "box";
    case PayloadKind::interval:
      return "interval";
    case PayloadKind::free:
      return "free";
  }
  throw Error("unknown payload kind value");
}

PayloadKind parse_payload_kind(const std::string& text) {
  if (text == "box") return PayloadKind::box;
  if (text == "interval") return PayloadKind::interval;
  if (text == "free") return PayloadKind::free;
  throw Error("unknown payload kind \"" + text + "\"");
}

std::string to_string(ParseStatus status) {
  switch (status) {
    case ParseStatus::ok:
      return "ok";
    case ParseStatus::format_mismatch:
      return "format_mismatch";
    case ParseStatus::payload_malformed:
      return "payload_malformed";
  }
  throw Error("unknown parse status value");
}

ParseStatus parse_parse_status(const std::string& text) {
  if (text == "ok") return ParseStatus::ok;
  if (text == "format_mismatch") return ParseStatus::format_mismatch;
  if (text == "payload_malformed") return ParseStatus::payload_malformed;
  throw Error("unknown parse status \"" + text + "\"");
}

std::optional<BBox> parse_box_payload(std::string_view text) {
  std::string_view s = trim(text);
  BBox box;
  if (!parse_pair(s, box.x_min, box.y_min)) return std::nullopt;
  if (s.empty() || s.front() != ',') return std::nullopt;
  s.remove_prefix(1);
  if (!parse_pair(s, box.x_max, box.y_max)) return std::nullopt;
  if (!s.empty()) return std::nullopt;
  if (!box.valid()) return std::nullopt;
  return box;
}

std::optional<TimeInterval> parse_interval_payload(std::string_view text) {
  std::string_view s = trim(text);
  TimeInterval iv;
  if (!parse_pair(s, iv.start_s, iv.end_s)) return std::nullopt;
  if (!s.empty()) return std::nullopt;
  if (!iv.valid()) return std::nullopt;
  return iv;
}

ParseOutcome parse_response(std::string_view text, PayloadKind expected,
                            const ParseOptions& options) {
  ParseOutcome outcome;

  std::string_view rest = text;
  std::string_view think_text;
  std::string_view answer_text;
  if (!take_block(rest, kThinkOpen, kThinkClose, think_text)) return outcome;
  if (!take_block(rest, kAnswerOpen, kAnswerClose, answer_text)) {
    return outcome;
  }
  if (!all_space(rest)) return outcome;
  if (contains_tag_token(think_text) || contains_tag_token(answer_text)) {
    return outcome;
  }

  GroundedAnswer answer;
  answer.think_text =
      std::string(options.trim_contents ? trim(think_text) : think_text);
  answer.answer_text =
      std::string(options.trim_contents ? trim(answer_text) : answer_text);

  switch (expected) {
    case PayloadKind::free:
      outcome.status = ParseStatus::ok;
      break;
    case PayloadKind::box:
      if (auto box = parse_box_payload(answer_text)) {
        answer.payload = *box;
        outcome.status = ParseStatus::ok;
      } else {
        outcome.status = ParseStatus::payload_malformed;
      }
      break;
    case PayloadKind::interval:
      if (auto iv = parse_interval_payload(answer_text)) {
        answer.payload = *iv;
        outcome.status = ParseStatus::ok;
      } else {
        outcome.status = ParseStatus::payload_malformed;
      }
      break;
  }
  outcome.answer = std::move(answer);
  return outcome;
}

std::string render_interval(const TimeInterval& iv) {
  std::array<char, 64> buf;
  const int n = std::snprintf(buf.data(), buf.size(), "(%.2f,%.2f)",
                              iv.start_s, iv.end_s);
  return std::string(buf.data(), static_cast<std::size_t>(n));
}

std::string render_box(const BBox& box) {
  std::array<char, 96> buf;
  const int n =
      std::snprintf(buf.data(), buf.size(), "(%.3f,%.3f),(%.3f,%.3f)",
                    box.x_min, box.y_min, box.x_max, box.y_max);
  return std::string(buf.data(), static_cast<std::size_t>(n));
}

namespace {

std::string substitute_slot(std::string_view tmpl, std::string_view slot,
                            std::string_view value) {
  const auto pos = tmpl.find(slot);
  if (pos == std::string_view::npos) {
    throw Error("template is missing slot " + std::string(slot));
  }
  std::string out(tmpl);
  out.replace(pos, slot.size(), value);
  return out;
}

}  // namespace

std::string render_fg_spatial_prompt(std::string_view object_name) {
  return substitute_slot(fg_spatial_prompt_template, "[OBJECT]", object_name);
}

std::string render_fg_temporal_prompt(std::string_view question) {
  return substitute_slot(fg_temporal_prompt_template, "[QUESTION]", question);
}

}  // namespace egokit
