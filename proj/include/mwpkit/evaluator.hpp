#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mwpkit/composer.hpp"

namespace mwpkit {

/// Number token in free text (unsigned; '$' accepted and stripped).
struct ScannedNumber {
  Decimal value;
  bool currency = false;
  ByteSpan span;
};
std::vector<ScannedNumber> scan_numbers(std::string_view text);

/// First match wins, in priority order: "So the answer is <num>", then
/// "#### <num>", then the last parseable number anywhere. Absent when the
/// response carries no number.
std::optional<Decimal> extract_final_answer(std::string_view response);

enum class AnswerRule {
  Exact,       // equal after canonicalization only
  ExactOr2dp,  // additionally accept equality after rounding both to 2dp
};

/// Equal after canonicalization, or (under ExactOr2dp, the default) equal
/// after rounding both to two fractional digits, tolerating stored division
/// rounding.
bool score_answer(const Decimal& pred, const Decimal& gold,
                  AnswerRule rule = AnswerRule::ExactOr2dp);

struct SegmentVerdict {
  ByteSpan span;
  SegmentKind kind = SegmentKind::ArithChain;
  bool correct = false;
  bool has_mul = false;
  bool has_div = false;
  int hops = 0;  // operator count of the first side
  std::string surface;
};

/// Lenient segment scan of a model response; each chain verdict checks every
/// "=" transition, each unit statement checks the stated value against the
/// exact ratio (within div_rounded rounding).
std::vector<SegmentVerdict> score_skill_segments(std::string_view response,
                                                 const UnitKb& kb);

/// True iff some multiplication with a multi-digit second operand appears
/// expanded into its place-value terms: a chain holds adjacent sides where
/// "a * B" has been replaced by "a * w0 + a * w1 + ..." for the digit terms
/// of B.
bool detect_cot_integration(std::string_view response, const UnitKb& kb);

enum class Category { Correct, AtomicSkillError, OtherError };
std::string to_string(Category c);

/// AtomicSkillError when any skill segment fails; otherwise Correct when the
/// final answer matches; otherwise OtherError.
Category categorize(std::string_view response, const Decimal& gold,
                    const UnitKb& kb);

struct EvalReport {
  std::size_t item_count = 0;
  double answer_accuracy = 0.0;
  /// Keyed "<class>|<hops>" with class in {AddSub, MixMul, MixAll} derived
  /// from the gold answer's chains and hops clamped to [2,5]; values are
  /// segment-level accuracies of the predictions in that bucket.
  std::map<std::string, double> skill_accuracy;
  double cot_integration_rate = 0.0;
  std::map<std::string, std::size_t> error_counts;
  std::vector<JsonRecord> verdicts;

  JsonRecord to_json() const;
};

/// Score predictions ({id, response} records; answer/output accepted as
/// fallback fields) against gold items, matched by id.
EvalReport evaluate(const std::vector<MWPItem>& gold,
                    const std::vector<JsonRecord>& predictions,
                    const UnitKb& kb,
                    AnswerRule rule = AnswerRule::ExactOr2dp);

/// Gold-side difficulty bucket of an answer, "<class>|<hops>", empty when
/// the answer has no arithmetic chains.
std::string difficulty_bucket(std::string_view answer, const UnitKb& kb);

}  // namespace mwpkit
