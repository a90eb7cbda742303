#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mwpkit/composer.hpp"

namespace mwpkit {

/// Mixture declaration for the skill-training stage: per-skill prerequisite
/// sources with a prerequisite:replay ratio each, a replay source of MWP
/// training items, a seed and a prompt template for the replay items.
struct MixSpec {
  struct SkillSource {
    std::string name;
    std::string path;
    int ratio = 1;  // prerequisite items per replay item
    std::optional<std::size_t> count;  // explicit override
  };
  std::vector<SkillSource> skills;
  std::string replay_path;
  std::optional<std::size_t> replay_count;  // default: whole replay file
  bool has_seed = false;
  std::uint64_t seed = 0;
  std::string prompt_template = "alpaca";

  static MixSpec parse(std::string_view text);
  static MixSpec load(const std::string& path);
};

/// Training text of a prerequisite record: the derivation itself, no
/// instruction wrapper.
std::string prerequisite_text(const JsonRecord& record);

/// Instruction wrapping for MWP items. Templates: "alpaca" (instruction
/// header + response), "none" (question and answer joined), "fields"
/// (callers emit {instruction, input, output} instead of {text}).
std::string wrap_prompt(std::string_view template_id, std::string_view question,
                        std::string_view answer);

JsonRecord wrap_mwp_record(std::string_view template_id, const MWPItem& item);

/// Exact-ratio interleaved mixture: ratio*replay items per skill plus the
/// replay items, deterministically shuffled by the seed. Throws
/// SourceExhausted when a source is too small.
std::vector<JsonRecord> build_skill_training(
    const MixSpec& spec,
    const std::map<std::string, std::vector<JsonRecord>>& skill_sources,
    const std::vector<MWPItem>& replay_items);

/// Prompt-wrapped compositional items, input order preserved.
std::vector<JsonRecord> build_applied_learning(
    const std::vector<MWPItem>& composed, std::string_view template_id);

/// Per-dimension difficulty histograms and token totals.
struct StatsReport {
  std::size_t total_items = 0;
  std::size_t token_total = 0;
  std::map<std::string, std::size_t> tasks;
  std::map<int, std::size_t> hops;
  std::map<std::string, std::size_t> op_class;
  std::map<std::string, std::size_t> value_type;
  std::map<int, std::size_t> sig_digits;

  JsonRecord to_json() const;
};

StatsReport stats(const std::vector<JsonRecord>& records);

}  // namespace mwpkit
