#include "mwpkit/io.hpp"

#include <fstream>
#include <sstream>

namespace mwpkit {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed: " + path);
}

std::vector<JsonRecord> parse_jsonl(std::string_view text) {
  std::vector<JsonRecord> records;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) {
      JsonRecord rec = JsonRecord::parse(line, nullptr, false);
      if (rec.is_discarded()) {
        throw IoError("bad JSON on line " + std::to_string(line_no));
      }
      records.push_back(std::move(rec));
    }
    pos = eol + 1;
  }
  return records;
}

std::vector<JsonRecord> read_jsonl(const std::string& path) {
  return parse_jsonl(read_file(path));
}

std::string to_jsonl(const std::vector<JsonRecord>& records) {
  std::string out;
  for (const auto& rec : records) {
    out += rec.dump();
    out += '\n';
  }
  return out;
}

void write_jsonl(const std::string& path,
                 const std::vector<JsonRecord>& records) {
  write_file(path, to_jsonl(records));
}

namespace {

std::string strip(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  KeyValueConfig cfg;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    std::string trimmed = strip(line);
    if (!trimmed.empty()) {
      std::size_t eq = trimmed.find('=');
      if (eq == std::string::npos) {
        throw Error("config line " + std::to_string(line_no) +
                    ": expected key = value");
      }
      cfg.entries_[strip(std::string_view(trimmed).substr(0, eq))] =
          strip(std::string_view(trimmed).substr(eq + 1));
    }
    if (eol == text.size()) break;
    pos = eol + 1;
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  return parse(read_file(path));
}

bool KeyValueConfig::has(const std::string& key) const {
  return entries_.count(key) > 0;
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::get_or(const std::string& key,
                                   std::string fallback) const {
  auto v = get(key);
  return v ? *v : std::move(fallback);
}

std::int64_t KeyValueConfig::get_int(const std::string& key) const {
  auto v = get(key);
  if (!v) throw Error("missing config key: " + key);
  try {
    return std::stoll(*v);
  } catch (const std::exception&) {
    throw Error("config key " + key + " is not an integer: " + *v);
  }
}

double KeyValueConfig::get_double(const std::string& key) const {
  auto v = get(key);
  if (!v) throw Error("missing config key: " + key);
  try {
    return std::stod(*v);
  } catch (const std::exception&) {
    throw Error("config key " + key + " is not a number: " + *v);
  }
}

std::vector<std::string> KeyValueConfig::get_list(const std::string& key) const {
  auto v = get(key);
  if (!v) throw Error("missing config key: " + key);
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= v->size()) {
    std::size_t comma = v->find(',', pos);
    if (comma == std::string::npos) comma = v->size();
    std::string part = strip(std::string_view(*v).substr(pos, comma - pos));
    if (!part.empty()) out.push_back(std::move(part));
    pos = comma + 1;
  }
  return out;
}

std::vector<int> KeyValueConfig::get_int_list(const std::string& key) const {
  std::vector<int> out;
  for (const std::string& part : get_list(key)) {
    std::size_t dash = part.find('-', 1);  // allow a leading minus sign
    try {
      if (dash != std::string::npos) {
        int lo = std::stoi(part.substr(0, dash));
        int hi = std::stoi(part.substr(dash + 1));
        for (int v = lo; v <= hi; ++v) out.push_back(v);
      } else {
        out.push_back(std::stoi(part));
      }
    } catch (const std::exception&) {
      throw Error("config key " + key + " has a bad integer entry: " + part);
    }
  }
  return out;
}

std::size_t whitespace_token_count(const JsonRecord& record) {
  std::size_t count = 0;
  if (record.is_string()) {
    const std::string& s = record.get_ref<const std::string&>();
    bool in_token = false;
    for (char c : s) {
      bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r';
      if (!ws && !in_token) ++count;
      in_token = !ws;
    }
  } else if (record.is_object() || record.is_array()) {
    for (const auto& child : record) count += whitespace_token_count(child);
  }
  return count;
}

}  // namespace mwpkit
