// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "egokit/types.hpp"

namespace egokit {

using json = nlohmann::json;

// Parse failure inside a JSONL stream. line_no is 1-based; field names the
// offending key when known, otherwise it is empty.
class JsonlError : public Error {
 public:
  JsonlError(const std::string& message, std::size_t line_no, std::string field)
      : Error(message), line_no_(line_no), field_(std::move(field)) {}

  std::size_t line_no() const { return line_no_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_no_;
  std::string field_;
};

// Fetches a required key or throws a JsonlError naming it.
const json& require_key(const json& j, const char* key);

// Canonical single-line form: keys sorted, no whitespace.
std::string to_jsonl_line(const json& j);

void to_json(json& j, const BBox& b);
void from_json(const json& j, BBox& b);
void to_json(json& j, const TimeInterval& iv);
void from_json(const json& j, TimeInterval& iv);
void to_json(json& j, const FrameDetections& f);
void from_json(const json& j, FrameDetections& f);
void to_json(json& j, const ClipRecord& c);
void from_json(const json& j, ClipRecord& c);
void to_json(json& j, const QARecord& q);
void from_json(const json& j, QARecord& q);
void to_json(json& j, const PredictionRecord& p);
void from_json(const json& j, PredictionRecord& p);

namespace detail {

json parse_line(const std::string& line, std::size_t line_no);

template <typename T>
T record_from_line(const std::string& line, std::size_t line_no) {
  const json j = parse_line(line, line_no);
  try {
    return j.get<T>();
  } catch (const JsonlError& e) {
    throw JsonlError("line " + std::to_string(line_no) + ": " + e.what(),
                     line_no, e.field());
  } catch (const json::exception& e) {
    throw JsonlError("line " + std::to_string(line_no) + ": " + e.what(),
                     line_no, "");
  } catch (const Error& e) {
    throw JsonlError("line " + std::to_string(line_no) + ": " + e.what(),
                     line_no, "");
  }
}

}  // namespace detail

// Streams records one per line; blank lines are not permitted between records
// (a trailing newline is). fn is invoked in input order.
template <typename T, typename Fn>
void for_each_jsonl(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    fn(detail::record_from_line<T>(line, line_no));
  }
}

template <typename T>
std::vector<T> read_jsonl(std::istream& in) {
  std::vector<T> records;
  for_each_jsonl<T>(in, [&](T rec) { records.push_back(std::move(rec)); });
  return records;
}

template <typename T>
std::vector<T> read_jsonl_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_jsonl<T>(in);
}

template <typename T>
void write_jsonl(std::ostream& out, const std::vector<T>& records) {
  for (const T& rec : records) {
    out << to_jsonl_line(json(rec)) << '\n';
  }
}

template <typename T>
void write_jsonl_file(const std::filesystem::path& path,
                      const std::vector<T>& records) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_jsonl(out, records);
}

}  // namespace egokit
