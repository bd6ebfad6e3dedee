// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>

#include "egokit/types.hpp"

namespace egokit {

// Failure talking to an annotator; run_split retries these.
class AdapterError : public Error {
 public:
  using Error::Error;
};

struct AnnotatorRequest {
  std::string system_prompt;
  std::string user_prompt;
  double temperature = 0.0;
  int max_output = 1024;
};

struct AnnotatorResponse {
  std::string text;
  int usage_tokens = 0;
  double latency_ms = 0.0;
};

class AnnotatorAdapter {
 public:
  virtual ~AnnotatorAdapter() = default;
  virtual AnnotatorResponse complete(const AnnotatorRequest& request) = 0;
};

// FNV-1a 64-bit of the user prompt, as fixed-width lowercase hex. Keys the
// mock adapter's canned-response file.
std::string prompt_hash(std::string_view user_prompt);

// Replays canned responses from a JSONL file of {prompt_hash, text}. An
// unknown prompt raises AdapterError.
class MockAdapter : public AnnotatorAdapter {
 public:
  explicit MockAdapter(const std::filesystem::path& canned_file);
  AnnotatorResponse complete(const AnnotatorRequest& request) override;

 private:
  std::unordered_map<std::string, std::string> by_hash_;
};

// POSTs {system, user, temperature, max_tokens} as JSON and expects {text}
// back. When the EGOKIT_ADAPTER_TOKEN environment variable is set its value
// is sent as a bearer token.
class HttpAdapter : public AnnotatorAdapter {
 public:
  explicit HttpAdapter(std::string url);
  AnnotatorResponse complete(const AnnotatorRequest& request) override;

 private:
  std::string base_;
  std::string path_;
};

// "mock:<path>" or "http://host[:port][/path]".
std::unique_ptr<AnnotatorAdapter> make_adapter(const std::string& uri);

}  // namespace egokit
