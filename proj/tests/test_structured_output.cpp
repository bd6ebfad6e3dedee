// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <string>

#include "egokit/jsonl.hpp"
#include "egokit/structured_output.hpp"
#include "support/generators.hpp"

using namespace egokit;

namespace {

std::vector<json> load_corpus() {
  std::ifstream in(EGOKIT_TEST_DATA_DIR "/format_corpus.jsonl");
  REQUIRE(in.good());
  std::vector<json> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    entries.push_back(json::parse(line));
  }
  return entries;
}

}  // namespace

TEST_CASE("labeled corpus parses to its labels") {
  const std::vector<json> corpus = load_corpus();
  REQUIRE(corpus.size() >= 30);

  for (const json& entry : corpus) {
    const std::string text = entry.at("text").get<std::string>();
    const PayloadKind kind =
        parse_payload_kind(entry.at("kind").get<std::string>());
    const ParseStatus want_status =
        parse_parse_status(entry.at("status").get<std::string>());
    CAPTURE(text);

    const ParseOutcome outcome = parse_response(text, kind);
    CHECK(outcome.status == want_status);
    CHECK(outcome.answer.has_value() ==
          (want_status != ParseStatus::format_mismatch));

    if (entry.contains("box")) {
      REQUIRE(outcome.status == ParseStatus::ok);
      const auto& want = entry.at("box");
      const BBox& got = std::get<BBox>(outcome.answer->payload);
      CHECK(got.x_min == want.at(0).get<double>());
      CHECK(got.y_min == want.at(1).get<double>());
      CHECK(got.x_max == want.at(2).get<double>());
      CHECK(got.y_max == want.at(3).get<double>());
    }
    if (entry.contains("interval")) {
      REQUIRE(outcome.status == ParseStatus::ok);
      const auto& want = entry.at("interval");
      const TimeInterval& got =
          std::get<TimeInterval>(outcome.answer->payload);
      CHECK(got.start_s == want.at(0).get<double>());
      CHECK(got.end_s == want.at(1).get<double>());
    }
  }
}

TEST_CASE("contents come back verbatim, or trimmed on request") {
  const std::string text =
      "<think> two thoughts </think><answer> free text </answer>";
  const ParseOutcome raw = parse_response(text, PayloadKind::free);
  REQUIRE(raw.status == ParseStatus::ok);
  CHECK(raw.answer->think_text == " two thoughts ");
  CHECK(raw.answer->answer_text == " free text ");

  ParseOptions options;
  options.trim_contents = true;
  const ParseOutcome trimmed = parse_response(text, PayloadKind::free, options);
  CHECK(trimmed.answer->think_text == "two thoughts");
  CHECK(trimmed.answer->answer_text == "free text");
}

TEST_CASE("malformed payloads still expose the raw answer text") {
  const ParseOutcome outcome = parse_response(
      "<think>t</think><answer>nonsense</answer>", PayloadKind::box);
  CHECK(outcome.status == ParseStatus::payload_malformed);
  REQUIRE(outcome.answer.has_value());
  CHECK(outcome.answer->answer_text == "nonsense");
  CHECK(std::holds_alternative<std::monostate>(outcome.answer->payload));
}

TEST_CASE("interval rendering is fixed two-decimal") {
  CHECK(render_interval(TimeInterval{7.33, 10.25}) == "(7.33,10.25)");
  CHECK(render_interval(TimeInterval{0.0, 0.0}) == "(0.00,0.00)");
  CHECK(render_interval(TimeInterval{1.005, 2.0}) == "(1.00,2.00)");
  CHECK(render_interval(TimeInterval{12.0, 18.0}) == "(12.00,18.00)");
  CHECK(render_interval(TimeInterval{123.456, 789.994}) ==
        "(123.46,789.99)");
}

TEST_CASE("box rendering is fixed three-decimal") {
  CHECK(render_box(BBox{0.1, 0.2, 0.3, 0.4}) ==
        "(0.100,0.200),(0.300,0.400)");
  CHECK(render_box(BBox{0.0, 0.0, 1.0, 1.0}) ==
        "(0.000,0.000),(1.000,1.000)");
  CHECK(render_box(BBox{0.0005, 0.25, 0.5, 0.75}) ==
        "(0.001,0.250),(0.500,0.750)");
}

TEST_CASE("rendered payloads re-parse within formatting precision") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> seconds(0.0, 500.0);

  for (int i = 0; i < 2000; ++i) {
    BBox box;
    box.x_min = unit(rng);
    box.y_min = unit(rng);
    box.x_max = box.x_min + (1.0 - box.x_min) * unit(rng);
    box.y_max = box.y_min + (1.0 - box.y_min) * unit(rng);
    const auto parsed = parse_box_payload(render_box(box));
    // Rounding the two edges can only move each by half an ulp of the last
    // printed digit, so 0.0005 plus slack bounds the error.
    // Correct rounding is monotone, so a valid box always re-parses.
    REQUIRE(parsed.has_value());
    CHECK(std::abs(parsed->x_min - box.x_min) <= 0.000501);
    CHECK(std::abs(parsed->y_min - box.y_min) <= 0.000501);
    CHECK(std::abs(parsed->x_max - box.x_max) <= 0.000501);
    CHECK(std::abs(parsed->y_max - box.y_max) <= 0.000501);
  }

  for (int i = 0; i < 2000; ++i) {
    TimeInterval iv;
    iv.start_s = seconds(rng);
    iv.end_s = iv.start_s + 100.0 * unit(rng);
    const auto parsed = parse_interval_payload(render_interval(iv));
    REQUIRE(parsed.has_value());
    CHECK(std::abs(parsed->start_s - iv.start_s) <= 0.00501);
    CHECK(std::abs(parsed->end_s - iv.end_s) <= 0.00501);
  }
}

TEST_CASE("payload kind and status names round-trip") {
  for (PayloadKind kind :
       {PayloadKind::box, PayloadKind::interval, PayloadKind::free}) {
    CHECK(parse_payload_kind(to_string(kind)) == kind);
  }
  for (ParseStatus status : {ParseStatus::ok, ParseStatus::format_mismatch,
                             ParseStatus::payload_malformed}) {
    CHECK(parse_parse_status(to_string(status)) == status);
  }
  CHECK_THROWS_AS(parse_payload_kind("tuple"), Error);
  CHECK_THROWS_AS(parse_parse_status("maybe"), Error);
}

TEST_CASE("grounding prompt templates carry their slots verbatim") {
  CHECK(fg_spatial_prompt_template.find("[OBJECT]") != std::string_view::npos);
  CHECK(fg_temporal_prompt_template.find("[QUESTION]") !=
        std::string_view::npos);
  CHECK(fg_temporal_prompt_template.find("\"(start,end)\"") !=
        std::string_view::npos);

  const std::string spatial = render_fg_spatial_prompt("the red mug");
  CHECK(spatial.find("the red mug") != std::string::npos);
  CHECK(spatial.find("[OBJECT]") == std::string::npos);
  CHECK(spatial.find("(x_min,y_min),(x_max,"
                     "y_max)") != std::string::npos);

  const std::string temporal = render_fg_temporal_prompt("when does it boil");
  CHECK(temporal.find("when does it boil") != std::string::npos);
  CHECK(temporal.find("[QUESTION]") == std::string::npos);
}
