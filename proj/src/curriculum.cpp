#include "mwpkit/curriculum.hpp"

#include <algorithm>

#include "mwpkit/rng.hpp"

namespace {

// Chain-derived difficulty for records without generator metadata (MWP
// JSONL): total hops, operator class, operand value type and the maximum
// significant digit count over the answer's chains.
const mwpkit::UnitKb& stats_kb() {
  static mwpkit::UnitKb kb =
      mwpkit::UnitKb::parse("unitkb 1\nlength | meter | meters | m | 1\n");
  return kb;
}

}  // namespace

namespace mwpkit {

MixSpec MixSpec::parse(std::string_view text) {
  KeyValueConfig cfg = KeyValueConfig::parse(text);
  MixSpec spec;
  if (cfg.has("seed")) {
    spec.has_seed = true;
    spec.seed = static_cast<std::uint64_t>(cfg.get_int("seed"));
  }
  spec.prompt_template = cfg.get_or("template", "alpaca");
  if (cfg.has("replay.source")) spec.replay_path = *cfg.get("replay.source");
  if (cfg.has("replay.count")) {
    spec.replay_count = static_cast<std::size_t>(cfg.get_int("replay.count"));
  }
  std::map<std::string, SkillSource> skills;
  for (const auto& [key, value] : cfg.entries()) {
    if (key.rfind("skill.", 0) != 0) continue;
    std::size_t dot = key.find('.', 6);
    if (dot == std::string::npos) {
      throw Error("bad mix spec key: " + key);
    }
    std::string name = key.substr(6, dot - 6);
    std::string field = key.substr(dot + 1);
    SkillSource& skill = skills[name];
    skill.name = name;
    if (field == "source") {
      skill.path = value;
    } else if (field == "ratio") {
      skill.ratio = static_cast<int>(cfg.get_int(key));
      if (skill.ratio <= 0) throw Error("ratio must be positive for " + name);
    } else if (field == "count") {
      skill.count = static_cast<std::size_t>(cfg.get_int(key));
    } else {
      throw Error("unknown mix spec key: " + key);
    }
  }
  for (auto& [name, skill] : skills) spec.skills.push_back(skill);
  if (spec.skills.empty()) throw Error("mix spec declares no skills");
  return spec;
}

MixSpec MixSpec::load(const std::string& path) {
  return parse(read_file(path));
}

std::string prerequisite_text(const JsonRecord& record) {
  if (record.contains("text") && record["text"].is_string()) {
    return record["text"].get<std::string>();
  }
  std::string task = record.value("task", std::string());
  std::string input = record.value("input", std::string());
  std::string output = record.value("output", std::string());
  if (task == "arith") return output;  // the trace restates the input
  if (input.empty()) return output;
  return input + " " + output;
}

std::string wrap_prompt(std::string_view template_id, std::string_view question,
                        std::string_view answer) {
  if (template_id == "none") {
    return std::string(question) + "\n" + std::string(answer);
  }
  if (template_id == "alpaca" || template_id == "fields") {
    return "Below is an instruction that describes a task. Write a response "
           "that appropriately completes the request.\n\n### Instruction:\n" +
           std::string(question) + "\n\n### Response:\n" + std::string(answer);
  }
  throw Error("unknown prompt template: " + std::string(template_id));
}

JsonRecord wrap_mwp_record(std::string_view template_id, const MWPItem& item) {
  JsonRecord rec;
  if (template_id == "fields") {
    rec["instruction"] = item.question;
    rec["input"] = "";
    rec["output"] = item.answer;
  } else {
    rec["text"] = wrap_prompt(template_id, item.question, item.answer);
  }
  rec["task"] = "mwp";
  rec["id"] = item.id;
  return rec;
}

std::vector<JsonRecord> build_skill_training(
    const MixSpec& spec,
    const std::map<std::string, std::vector<JsonRecord>>& skill_sources,
    const std::vector<MWPItem>& replay_items) {
  std::size_t replay_n = spec.replay_count.value_or(replay_items.size());
  if (replay_n > replay_items.size()) {
    throw SourceExhausted("replay needs " + std::to_string(replay_n) +
                          " items, source has " +
                          std::to_string(replay_items.size()));
  }

  std::vector<JsonRecord> mixture;
  for (const MixSpec::SkillSource& skill : spec.skills) {
    auto it = skill_sources.find(skill.name);
    if (it == skill_sources.end()) {
      throw Error("no source loaded for skill " + skill.name);
    }
    std::size_t need = skill.count.value_or(
        static_cast<std::size_t>(skill.ratio) * replay_n);
    if (need > it->second.size()) {
      throw SourceExhausted("skill " + skill.name + " needs " +
                            std::to_string(need) + " items, source has " +
                            std::to_string(it->second.size()));
    }
    for (std::size_t i = 0; i < need; ++i) {
      JsonRecord rec;
      rec["text"] = prerequisite_text(it->second[i]);
      rec["task"] = skill.name;
      mixture.push_back(std::move(rec));
    }
  }
  for (std::size_t i = 0; i < replay_n; ++i) {
    mixture.push_back(wrap_mwp_record(spec.prompt_template, replay_items[i]));
  }

  Rng rng(spec.seed);
  rng.shuffle(mixture);
  return mixture;
}

std::vector<JsonRecord> build_applied_learning(
    const std::vector<MWPItem>& composed, std::string_view template_id) {
  std::vector<JsonRecord> records;
  records.reserve(composed.size());
  for (const MWPItem& item : composed) {
    records.push_back(wrap_mwp_record(template_id, item));
  }
  return records;
}

JsonRecord StatsReport::to_json() const {
  JsonRecord rec;
  rec["total_items"] = total_items;
  rec["token_total"] = token_total;
  JsonRecord tasks_json = JsonRecord::object();
  for (const auto& [task, count] : tasks) tasks_json[task] = count;
  rec["tasks"] = std::move(tasks_json);
  auto hist = [](const auto& m) {
    JsonRecord h = JsonRecord::object();
    for (const auto& [key, count] : m) {
      if constexpr (std::is_same_v<std::decay_t<decltype(key)>, int>) {
        h[std::to_string(key)] = count;
      } else {
        h[key] = count;
      }
    }
    return h;
  };
  rec["hops"] = hist(hops);
  rec["op_class"] = hist(op_class);
  rec["value_type"] = hist(value_type);
  rec["sig_digits"] = hist(sig_digits);
  return rec;
}

StatsReport stats(const std::vector<JsonRecord>& records) {
  StatsReport report;
  report.total_items = records.size();
  for (const JsonRecord& rec : records) {
    for (const char* field :
         {"text", "input", "output", "question", "answer", "instruction"}) {
      if (rec.contains(field)) {
        report.token_total += whitespace_token_count(rec[field]);
      }
    }
    report.tasks[rec.value("task", std::string(
                                rec.contains("answer") ? "mwp" : "untagged"))] +=
        1;
    if (rec.contains("meta") && rec["meta"].is_object()) {
      const JsonRecord& meta = rec["meta"];
      if (meta.contains("hops")) report.hops[meta["hops"].get<int>()] += 1;
      if (meta.contains("op_class")) {
        report.op_class[meta["op_class"].get<std::string>()] += 1;
      }
      if (meta.contains("value_type")) {
        report.value_type[meta["value_type"].get<std::string>()] += 1;
      }
      if (meta.contains("max_sig_digits")) {
        report.sig_digits[meta["max_sig_digits"].get<int>()] += 1;
      }
      continue;
    }
    if (!rec.contains("answer") || !rec["answer"].is_string()) continue;
    int hops = 0, digits = 0;
    bool has_mul = false, has_div = false, any_int = false, any_float = false;
    for (const SkillSegment& seg :
         extract_segments(rec["answer"].get<std::string>(), stats_kb(),
                          ExtractMode::Lenient)) {
      if (seg.kind != SegmentKind::ArithChain) continue;
      const Expression& expr = seg.sides.front().expr;
      hops += expr.hops();
      for (OperatorKind op : expr.operators) {
        if (op == OperatorKind::Mul) has_mul = true;
        if (op == OperatorKind::Div) has_div = true;
      }
      for (const Decimal& n : expr.operands) {
        digits = std::max(digits, n.significant_digits());
        (n.is_integer() ? any_int : any_float) = true;
      }
    }
    if (hops == 0) continue;
    report.hops[hops] += 1;
    report.op_class[has_div ? "MixAll" : has_mul ? "MixMul" : "AddSub"] += 1;
    report.value_type[any_int && any_float ? "mixed"
                      : any_float          ? "float"
                                           : "integer"] += 1;
    report.sig_digits[digits] += 1;
  }
  return report;
}

}  // namespace mwpkit
