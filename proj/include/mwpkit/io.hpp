#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mwpkit/errors.hpp"

namespace mwpkit {

/// Order-preserving JSON object; record field order is part of the byte
/// contract for deterministic outputs.
using JsonRecord = nlohmann::ordered_json;

/// One JSON object per line, UTF-8, no blank lines.
std::vector<JsonRecord> read_jsonl(const std::string& path);
std::vector<JsonRecord> parse_jsonl(std::string_view text);
std::string to_jsonl(const std::vector<JsonRecord>& records);
void write_jsonl(const std::string& path, const std::vector<JsonRecord>& records);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

/// `key = value` lines with '#' comments. Duplicate keys keep the last value;
/// lookup helpers split list values on commas.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::string& path);

  bool has(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, std::string fallback) const;
  std::int64_t get_int(const std::string& key) const;
  double get_double(const std::string& key) const;
  /// Comma-separated values; "2-5" ranges expand for integer lists.
  std::vector<std::string> get_list(const std::string& key) const;
  std::vector<int> get_int_list(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

/// Whitespace-delimited token count over all string fields of a record.
std::size_t whitespace_token_count(const JsonRecord& record);

}  // namespace mwpkit
