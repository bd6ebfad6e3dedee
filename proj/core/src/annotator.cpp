// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0

#include "egokit/annotator.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include <httplib.h>

#include "egokit/jsonl.hpp"

namespace egokit {

std::string prompt_hash(std::string_view user_prompt) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : user_prompt) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::array<char, 17> buf;
  std::snprintf(buf.data(), buf.size(), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf.data(), 16);
}

MockAdapter::MockAdapter(const std::filesystem::path& canned_file) {
  std::ifstream in(canned_file);
  if (!in) throw Error("cannot open " + canned_file.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const json j = detail::parse_line(line, line_no);
    by_hash_[require_key(j, "prompt_hash").get<std::string>()] =
        require_key(j, "text").get<std::string>();
  }
}

AnnotatorResponse MockAdapter::complete(const AnnotatorRequest& request) {
  const auto it = by_hash_.find(prompt_hash(request.user_prompt));
  if (it == by_hash_.end()) {
    throw AdapterError("no canned response for prompt hash " +
                       prompt_hash(request.user_prompt));
  }
  AnnotatorResponse response;
  response.text = it->second;
  return response;
}

HttpAdapter::HttpAdapter(std::string url) {
  // Split "scheme://host[:port]" from the request path.
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw Error("http adapter needs a scheme://host url");
  }
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) {
    base_ = url;
    path_ = "/";
  } else {
    base_ = url.substr(0, slash);
    path_ = url.substr(slash);
  }
}

AnnotatorResponse HttpAdapter::complete(const AnnotatorRequest& request) {
  const auto begin = std::chrono::steady_clock::now();

  httplib::Client client(base_);
  client.set_connection_timeout(10, 0);
  client.set_read_timeout(60, 0);
  if (const char* token = std::getenv("EGOKIT_ADAPTER_TOKEN")) {
    client.set_bearer_token_auth(token);
  }

  const json body = {{"system", request.system_prompt},
                     {"user", request.user_prompt},
                     {"temperature", request.temperature},
                     {"max_tokens", request.max_output}};
  const auto result = client.Post(path_, body.dump(), "application/json");
  if (!result) {
    throw AdapterError("http adapter request failed: " +
                       httplib::to_string(result.error()));
  }
  if (result->status != 200) {
    throw AdapterError("http adapter returned status " +
                       std::to_string(result->status));
  }

  AnnotatorResponse response;
  try {
    const json j = json::parse(result->body);
    response.text = require_key(j, "text").get<std::string>();
    if (j.contains("usage") && j["usage"].is_number_integer()) {
      response.usage_tokens = j["usage"].get<int>();
    }
  } catch (const json::exception& e) {
    throw AdapterError(std::string("http adapter returned invalid JSON: ") +
                       e.what());
  }
  const auto end = std::chrono::steady_clock::now();
  response.latency_ms =
      std::chrono::duration<double, std::milli>(end - begin).count();
  return response;
}

std::unique_ptr<AnnotatorAdapter> make_adapter(const std::string& uri) {
  if (uri.rfind("mock:", 0) == 0) {
    return std::make_unique<MockAdapter>(uri.substr(5));
  }
  if (uri.rfind("http://", 0) == 0 || uri.rfind("https://", 0) == 0) {
    return std::make_unique<HttpAdapter>(uri);
  }
  throw Error("adapter uri must be mock:<path> or http(s)://<url>");
}

}  // namespace egokit
