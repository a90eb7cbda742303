#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mwpkit/arith_gen.hpp"
#include "mwpkit/unit_kb.hpp"

namespace mwpkit {

struct MWPItem {
  std::string id;
  std::string question;
  std::string answer;
  Decimal final;
  std::string source;

  static MWPItem from_json(const JsonRecord& rec);
  JsonRecord to_json() const;
};

enum class SegmentKind { ArithChain, UnitStatement };
enum class ExtractMode {
  Strict,   // drop candidates that fail numeric verification
  Lenient,  // keep them, flagged unverified
};

/// One "=" separated side of an arithmetic chain.
struct ChainSide {
  Expression expr;
  std::vector<bool> currency;  // per operand, true when written with '$'
  std::string surface;         // original bytes, trimmed to the side tokens
};

struct SkillSegment {
  ByteSpan span;
  SegmentKind kind = SegmentKind::ArithChain;
  std::string surface;
  bool verified = false;

  // ArithChain
  std::vector<ChainSide> sides;

  // UnitStatement
  Decimal quantity;
  Decimal stated;
  const UnitEntry* unit0 = nullptr;
  const UnitEntry* unit1 = nullptr;
  bool leading_words = false;  // quantity written as words ("Two inches ...")
};

/// Value a verified chain carries (evaluation of its first side).
Decimal chain_value(const SkillSegment& seg);

/// Parse one expression side (num (op num)*, flexible spacing, currency
/// marks stripped). The whole trimmed text must be consumed.
Expression parse_expression(std::string_view text);

bool verify_chain_sides(const std::vector<ChainSide>& sides);
bool verify_unit_statement(const SkillSegment& seg);

/// Locate maximal arithmetic equality chains (num (op num)+ = num ...,
/// ops in {+,-,*,/,x-sign,division-sign}, calculator << >> islands absorbed)
/// and unit statements ("<num> <unit> is/are equal to <num> <unit>") against
/// the knowledge base. Every candidate is checked numerically; strict mode
/// drops failures, lenient mode keeps them flagged. Spans never overlap and
/// come back sorted.
std::vector<SkillSegment> extract_segments(std::string_view answer,
                                           const UnitKb& kb,
                                           ExtractMode mode = ExtractMode::Strict);

/// Canonical prerequisite-format text for a verified segment: chains become
/// the step-wise derivation of their first side (restating it first when the
/// original surface was non-canonical, e.g. "31 * $25"), unit statements the
/// canonical conversion sentence.
std::string rewrite_segment(const SkillSegment& seg);

struct ComposeResult {
  MWPItem item;
  std::vector<ByteSpan> replaced;  // spans in the input answer
  std::size_t segment_count = 0;
  bool appended_final_sentence = false;
};

/// Replace every skill segment of the answer in place; all other bytes are
/// preserved. Appends "So the answer is <final>." when the answer carries no
/// final-answer sentence. Throws SegmentVerificationError when any candidate
/// segment fails verification.
ComposeResult compose(const MWPItem& item, const UnitKb& kb);

struct ComposePolicy {
  bool correct_noise = true;  // oracle-correct failing chains when safe
};

struct ComposeOutcome {
  std::optional<ComposeResult> result;
  std::string skip_reason;  // non-empty when the item was skipped
  std::size_t corrections = 0;
};

/// compose() with the data-noise policy: a failing chain whose stated result
/// does not occur anywhere else in the item is re-derived from its left
/// side; anything else skips the item with a reason code.
ComposeOutcome compose_with_policy(const MWPItem& item, const UnitKb& kb,
                                   const ComposePolicy& policy = {});

}  // namespace mwpkit
