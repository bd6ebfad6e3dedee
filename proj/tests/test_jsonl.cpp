// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>
#include <string>

#include "egokit/jsonl.hpp"
#include "egokit/types.hpp"
#include "support/generators.hpp"

using namespace egokit;

TEST_CASE("clip records survive a 100-record round-trip byte for byte") {
  std::mt19937_64 rng(11);
  std::vector<ClipRecord> clips;
  for (int i = 0; i < 100; ++i) {
    clips.push_back(testing::random_clip(rng, "clip_" + std::to_string(i)));
  }
  // Exercise the optional fields explicitly.
  clips[3].ego_score = std::nullopt;
  clips[4].caption = std::nullopt;
  clips[5].narration = std::nullopt;

  std::ostringstream out;
  write_jsonl(out, clips);
  const std::string first_pass = out.str();

  std::istringstream in(first_pass);
  const auto reread = read_jsonl<ClipRecord>(in);
  REQUIRE(reread.size() == clips.size());
  CHECK(reread == clips);

  std::ostringstream out2;
  write_jsonl(out2, reread);
  CHECK(out2.str() == first_pass);
}

TEST_CASE("qa and prediction records round-trip") {
  QARecord qa;
  qa.qa_id = "cot:v1:seg0";
  qa.clip_ids = {"a", "b"};
  qa.split = Split::cot;
  qa.question_type = QuestionType::cot_reasoning;
  qa.question = "why?";
  qa.answer = "because";
  qa.rationale = "step 1 then step 2";

  QARecord grounding;
  grounding.qa_id = "fg_temporal:c2";
  grounding.clip_ids = {"c2"};
  grounding.split = Split::fg_temporal;
  grounding.question_type = QuestionType::fg_temporal_grounding;
  grounding.question = "when?";
  grounding.answer = "(1.00,2.00)";
  grounding.gt_interval = TimeInterval{1.0, 2.0};

  std::ostringstream out;
  write_jsonl(out, std::vector<QARecord>{qa, grounding});
  std::istringstream in(out.str());
  const auto reread = read_jsonl<QARecord>(in);
  REQUIRE(reread.size() == 2);
  CHECK(reread[0] == qa);
  CHECK(reread[1] == grounding);
  CHECK(!reread[0].gt_box.has_value());
  CHECK(reread[1].gt_interval.has_value());

  PredictionRecord pred{"fg_temporal:c2", "<think>t</think>"};
  std::ostringstream pout;
  write_jsonl(pout, std::vector<PredictionRecord>{pred});
  std::istringstream pin(pout.str());
  CHECK(read_jsonl<PredictionRecord>(pin).front() == pred);
}

TEST_CASE("optionals serialize as explicit null and read back from missing") {
  ClipRecord clip;
  clip.clip_id = "c";
  clip.video_id = "v";
  clip.interval = TimeInterval{0.0, 3.0};

  const json j = clip;
  CHECK(j.at("ego_score").is_null());
  CHECK(j.at("caption").is_null());

  // A reader-side record may omit optional keys entirely.
  json trimmed = j;
  trimmed.erase("ego_score");
  trimmed.erase("caption");
  trimmed.erase("narration");
  const ClipRecord reread = trimmed.get<ClipRecord>();
  CHECK(reread == clip);
}

TEST_CASE("missing required fields name the field and the line") {
  const std::string line =
      R"({"video_id":"v","interval":{"start_s":0,"end_s":1},"frames":[]})";
  std::istringstream in(line + "\n");
  try {
    read_jsonl<ClipRecord>(in);
    FAIL("expected a JsonlError");
  } catch (const JsonlError& e) {
    CHECK(e.line_no() == 1);
    CHECK(std::string(e.what()).find("clip_id") != std::string::npos);
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }
}

TEST_CASE("syntactically broken lines report their line number") {
  std::istringstream in(
      "{\"qa_id\":\"a\",\"response_text\":\"x\"}\nnot json\n");
  try {
    read_jsonl<PredictionRecord>(in);
    FAIL("expected a JsonlError");
  } catch (const JsonlError& e) {
    CHECK(e.line_no() == 2);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("unknown enum names surface as data errors with line numbers") {
  const std::string line =
      R"({"qa_id":"q","clip_ids":[],"split":"hourly","question_type":)"
      R"("short_object_count","question":"q","answer":"a"})";
  std::istringstream in(line + "\n");
  CHECK_THROWS_AS(read_jsonl<QARecord>(in), JsonlError);
}

TEST_CASE("empty input and trailing newline are fine, interior blanks are not") {
  std::istringstream empty("");
  CHECK(read_jsonl<PredictionRecord>(empty).empty());

  std::istringstream trailing(
      "{\"qa_id\":\"a\",\"response_text\":\"x\"}\n");
  CHECK(read_jsonl<PredictionRecord>(trailing).size() == 1);

  std::istringstream interior(
      "{\"qa_id\":\"a\",\"response_text\":\"x\"}\n\n"
      "{\"qa_id\":\"b\",\"response_text\":\"y\"}\n");
  CHECK_THROWS_AS(read_jsonl<PredictionRecord>(interior), JsonlError);
}

TEST_CASE("read_jsonl_file reports unopenable paths") {
  CHECK_THROWS_WITH_AS(
      read_jsonl_file<ClipRecord>("/nonexistent/nowhere.jsonl"),
      "cannot open /nonexistent/nowhere.jsonl", Error);
}

TEST_CASE("canonical line form is compact with sorted keys") {
  const json j{{"b", 1}, {"a", 2}};
  CHECK(to_jsonl_line(j) == R"({"a":2,"b":1})");
}
